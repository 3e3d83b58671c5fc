#include "qjet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "qjet/crc32.hpp"

namespace qjet {

namespace {

constexpr uint16_t kVersion = 1;

} // namespace

void write_dataset(const std::string& path, const std::vector<JetImage>& images) {
    if (images.empty()) {
        throw std::invalid_argument("write_dataset: no images");
    }
    const size_t h = images[0].height;
    const size_t w = images[0].width;
    if (h == 0 || w == 0 || h > UINT16_MAX || w > UINT16_MAX ||
        images.size() > UINT32_MAX) {
        throw std::invalid_argument("write_dataset: dimensions out of range");
    }

    ByteWriter payload;
    for (const JetImage& img : images) {
        if (img.height != h || img.width != w) {
            throw std::invalid_argument("write_dataset: inconsistent image shapes");
        }
        for (double p : img.pixels) {
            if (!std::isfinite(p) || p < 0.0) {
                throw std::invalid_argument("write_dataset: pixels must be finite and >= 0");
            }
            payload.f32(static_cast<float>(p));
        }
    }

    ByteWriter w_out;
    w_out.bytes("QJET", 4);
    w_out.u16(kVersion);
    w_out.u32(static_cast<uint32_t>(images.size()));
    w_out.u16(static_cast<uint16_t>(h));
    w_out.u16(static_cast<uint16_t>(w));
    w_out.bytes(payload.data().data(), payload.data().size());
    w_out.u32(crc32(payload.data().data(), payload.data().size()));
    write_binary_file(path, w_out.data());
}

std::vector<JetImage> read_dataset(const std::string& path) {
    ByteReader r(read_binary_file(path));
    if (r.remaining() < 4 || std::memcmp(r.take(4), "QJET", 4) != 0) {
        throw FormatError(FormatError::Kind::BadMagic, "not a dataset file");
    }
    if (r.u16() != kVersion) {
        throw FormatError(FormatError::Kind::BadVersion, "unsupported dataset version");
    }
    const uint32_t count = r.u32();
    const uint16_t h = r.u16();
    const uint16_t w = r.u16();
    if (count == 0 || h == 0 || w == 0) {
        throw FormatError(FormatError::Kind::BadHeader, "empty dataset header");
    }

    const size_t payload_bytes = static_cast<size_t>(count) * h * w * 4;
    if (r.remaining() != payload_bytes + 4) {
        throw FormatError(FormatError::Kind::Truncated,
                          "payload size does not match header");
    }
    const uint8_t* payload = r.take(payload_bytes);
    const uint32_t stored = r.u32();
    if (stored != crc32(payload, payload_bytes)) {
        throw FormatError(FormatError::Kind::CrcMismatch, "dataset CRC mismatch");
    }

    std::vector<JetImage> images;
    images.reserve(count);
    ByteReader pr(std::vector<uint8_t>(payload, payload + payload_bytes));
    for (uint32_t s = 0; s < count; ++s) {
        JetImage img(h, w);
        for (double& p : img.pixels) {
            const float f = pr.f32();
            if (!std::isfinite(f) || f < 0.0f) {
                throw FormatError(FormatError::Kind::BadPayload,
                                  "pixels must be finite and >= 0");
            }
            p = f;
        }
        images.push_back(std::move(img));
    }
    return images;
}

JetImage center_crop(const JetImage& img, size_t out_height, size_t out_width) {
    if (out_height > img.height || out_width > img.width) {
        throw std::invalid_argument("center_crop: output larger than input");
    }
    const size_t off_r = (img.height - out_height) / 2;
    const size_t off_c = (img.width - out_width) / 2;
    JetImage out(out_height, out_width);
    for (size_t i = 0; i < out_height; ++i) {
        for (size_t j = 0; j < out_width; ++j) {
            out.at(i, j) = img.at(off_r + i, off_c + j);
        }
    }
    return out;
}

std::vector<JetImage> synth_jets(const SyntheticJetConfig& cfg) {
    if (cfg.count < 1 || cfg.size == 0 || cfg.size % 2 != 0) {
        throw std::invalid_argument("synth_jets: count must be >= 1 and size even");
    }
    if (!(cfg.sigma > 0.0) || !(cfg.peak_rate > 0.0) || cfg.blobs_min > cfg.blobs_max) {
        throw std::invalid_argument("synth_jets: invalid blob configuration");
    }

    RngStream rng(cfg.seed);
    std::vector<JetImage> images;
    images.reserve(cfg.count);
    const double inv_two_sigma2 = 1.0 / (2.0 * cfg.sigma * cfg.sigma);
    for (size_t s = 0; s < cfg.count; ++s) {
        JetImage img(cfg.size, cfg.size);
        const size_t blobs =
            cfg.blobs_min + rng.uniform_below(cfg.blobs_max - cfg.blobs_min + 1);
        for (size_t b = 0; b < blobs; ++b) {
            const size_t cy = rng.uniform_below(cfg.size);
            const size_t cx = rng.uniform_below(cfg.size);
            // Exponential via inverse CDF; uniform() < 1 keeps log finite.
            const double peak = -std::log(1.0 - rng.uniform()) / cfg.peak_rate;
            for (size_t i = 0; i < cfg.size; ++i) {
                for (size_t j = 0; j < cfg.size; ++j) {
                    const double dy = static_cast<double>(i) - static_cast<double>(cy);
                    const double dx = static_cast<double>(j) - static_cast<double>(cx);
                    img.at(i, j) += peak * std::exp(-(dy * dy + dx * dx) * inv_two_sigma2);
                }
            }
        }
        double peak_value = 0.0;
        for (double p : img.pixels) peak_value = std::max(peak_value, p);
        if (peak_value > 1.0) {
            for (double& p : img.pixels) p /= peak_value;
        }
        // Quantize through f32 so the in-memory values round-trip the file
        // format exactly.
        for (double& p : img.pixels) {
            p = static_cast<double>(static_cast<float>(std::clamp(p, 0.0, 1.0)));
        }
        images.push_back(std::move(img));
    }
    return images;
}

void write_pgm(const std::string& path, const JetImage& img) {
    std::string header = "P5\n" + std::to_string(img.width) + " " +
                         std::to_string(img.height) + "\n255\n";
    std::vector<uint8_t> data(header.begin(), header.end());
    data.reserve(data.size() + img.size());
    for (double p : img.pixels) {
        const double c = std::clamp(p, 0.0, 1.0);
        data.push_back(static_cast<uint8_t>(std::lround(255.0 * c)));
    }
    write_binary_file(path, data);
}

} // namespace qjet
