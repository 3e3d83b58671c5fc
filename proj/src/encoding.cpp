#include "qjet/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qjet {

JetImage normalize(const JetImage& img, double max_value) {
    if (!(max_value > 0.0)) {
        throw std::invalid_argument("normalize: max_value must be > 0");
    }
    JetImage out(img.height, img.width);
    for (size_t i = 0; i < img.size(); ++i) {
        out.pixels[i] = std::clamp(img.pixels[i] / max_value, 0.0, 1.0);
    }
    return out;
}

ChannelSet space_to_depth(const JetImage& img) {
    if (img.height % 2 != 0 || img.width % 2 != 0) {
        throw std::invalid_argument("space_to_depth: image dimensions must be even");
    }
    const size_t h = img.height / 2;
    const size_t w = img.width / 2;
    ChannelSet cs;
    for (size_t dy = 0; dy < 2; ++dy) {
        for (size_t dx = 0; dx < 2; ++dx) {
            JetImage& ch = cs.channels[2 * dy + dx];
            ch = JetImage(h, w);
            for (size_t i = 0; i < h; ++i) {
                for (size_t j = 0; j < w; ++j) {
                    ch.at(i, j) = img.at(2 * i + dy, 2 * j + dx);
                }
            }
        }
    }
    return cs;
}

JetImage depth_to_space(const ChannelSet& cs) {
    const size_t h = cs.channels[0].height;
    const size_t w = cs.channels[0].width;
    for (const JetImage& ch : cs.channels) {
        if (ch.height != h || ch.width != w) {
            throw std::invalid_argument("depth_to_space: channel dimensions differ");
        }
    }
    JetImage out(2 * h, 2 * w);
    for (size_t dy = 0; dy < 2; ++dy) {
        for (size_t dx = 0; dx < 2; ++dx) {
            const JetImage& ch = cs.channels[2 * dy + dx];
            for (size_t i = 0; i < h; ++i) {
                for (size_t j = 0; j < w; ++j) {
                    out.at(2 * i + dy, 2 * j + dx) = ch.at(i, j);
                }
            }
        }
    }
    return out;
}

StateVector encode_group(const std::array<double, 4>& pixels) {
    StateVector state(4);
    for (size_t q = 0; q < 4; ++q) {
        const double x = pixels[q];
        if (x < -1e-9 || x > 1.0 + 1e-9) {
            throw std::invalid_argument("encode_group: pixel value outside [0, 1]");
        }
        const double clamped = std::clamp(x, 0.0, 1.0);
        apply_gate_inplace(state, Gate::rx(std::numbers::pi * clamped, q));
    }
    return state;
}

std::array<double, 4> decode_group(const StateVector& state) {
    if (state.num_qubits() != 4) {
        throw std::invalid_argument("decode_group: expected a 4-qubit state");
    }
    std::array<double, 4> pixels{};
    for (size_t q = 0; q < 4; ++q) {
        const double z = std::clamp(expectation_z(state, q), -1.0, 1.0);
        pixels[q] = std::acos(z) / std::numbers::pi;
    }
    return pixels;
}

EncodedChannel encode_channel(const JetImage& channel) {
    if (channel.size() % 4 != 0) {
        throw std::invalid_argument("encode_channel: pixel count must be divisible by 4");
    }
    EncodedChannel ec;
    ec.height = channel.height;
    ec.width = channel.width;
    ec.groups.reserve(channel.size() / 4);
    for (size_t g = 0; g < channel.size() / 4; ++g) {
        ec.groups.push_back(encode_group({channel.pixels[4 * g], channel.pixels[4 * g + 1],
                                          channel.pixels[4 * g + 2], channel.pixels[4 * g + 3]}));
    }
    return ec;
}

JetImage decode_channel(const EncodedChannel& ec) {
    JetImage out(ec.height, ec.width);
    if (ec.groups.size() * 4 != out.size()) {
        throw std::invalid_argument("decode_channel: group count does not match dimensions");
    }
    for (size_t g = 0; g < ec.groups.size(); ++g) {
        const std::array<double, 4> px = decode_group(ec.groups[g]);
        for (size_t k = 0; k < 4; ++k) out.pixels[4 * g + k] = px[k];
    }
    return out;
}

} // namespace qjet
