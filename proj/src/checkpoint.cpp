#include "qjet/checkpoint.hpp"

#include <cmath>
#include <cstring>

#include "qjet/crc32.hpp"

namespace qjet {

namespace {

constexpr uint16_t kVersion = 1;

void write_stack_header(ByteWriter& w, const ConvStack& stack) {
    w.u16(static_cast<uint16_t>(stack.size()));
    for (const ConvLayer& layer : stack) {
        w.u16(static_cast<uint16_t>(layer.in_channels));
        w.u16(static_cast<uint16_t>(layer.out_channels));
        w.u16(static_cast<uint16_t>(layer.kernel));
        w.u8(static_cast<uint8_t>(layer.activation));
    }
}

ConvStack read_stack_header(ByteReader& r) {
    ConvStack stack;
    const uint16_t count = r.u16();
    for (uint16_t i = 0; i < count; ++i) {
        const uint16_t in_ch = r.u16();
        const uint16_t out_ch = r.u16();
        const uint16_t kernel = r.u16();
        const uint8_t act = r.u8();
        if (in_ch == 0 || out_ch == 0 || kernel == 0 || kernel % 2 == 0 || act > 1) {
            throw FormatError(FormatError::Kind::BadHeader, "invalid conv layer header");
        }
        stack.emplace_back(in_ch, out_ch, kernel, static_cast<Activation>(act));
    }
    return stack;
}

} // namespace

void write_checkpoint(const std::string& path, const DenoiserModel& model) {
    ByteWriter w;
    w.bytes("QDMW", 4);
    w.u16(kVersion);
    w.u8(static_cast<uint8_t>(model.kind));
    write_stack_header(w, model.conv_front);
    w.u16(static_cast<uint16_t>(model.vqc.size()));
    for (const VqcParams& v : model.vqc) {
        w.u16(static_cast<uint16_t>(v.layers));
    }
    write_stack_header(w, model.conv_back);

    const ParamSet params = export_params(model);
    w.u64(params.total_size());
    for (const ParamBlock& b : params.blocks) {
        for (double v : b.values) w.f64(v);
    }
    w.u32(crc32(w.data().data(), w.data().size()));
    write_binary_file(path, w.data());
}

DenoiserModel read_checkpoint(const std::string& path) {
    ByteReader r(read_binary_file(path));
    if (r.remaining() < 4 || std::memcmp(r.take(4), "QDMW", 4) != 0) {
        throw FormatError(FormatError::Kind::BadMagic, "not a checkpoint file");
    }
    if (r.u16() != kVersion) {
        throw FormatError(FormatError::Kind::BadVersion, "unsupported checkpoint version");
    }
    const uint8_t kind = r.u8();
    if (kind > 2) {
        throw FormatError(FormatError::Kind::BadHeader, "unknown model kind");
    }

    DenoiserModel model;
    model.kind = static_cast<ModelKind>(kind);
    model.conv_front = read_stack_header(r);
    const uint16_t vqc_count = r.u16();
    for (uint16_t i = 0; i < vqc_count; ++i) {
        const uint16_t layers = r.u16();
        if (layers == 0) {
            throw FormatError(FormatError::Kind::BadHeader, "vqc layer count must be >= 1");
        }
        model.vqc.emplace_back(layers);
    }
    model.conv_back = read_stack_header(r);

    const bool shape_ok =
        (model.kind == ModelKind::Classical && !model.conv_front.empty() &&
         model.vqc.empty() && model.conv_back.empty()) ||
        (model.kind == ModelKind::Hybrid && !model.conv_front.empty() &&
         model.vqc.size() == 1 && !model.conv_back.empty()) ||
        (model.kind == ModelKind::FullyQuantum && model.conv_front.empty() &&
         (model.vqc.size() == 1 || model.vqc.size() == 4) && model.conv_back.empty());
    if (!shape_ok) {
        throw FormatError(FormatError::Kind::BadHeader,
                          "architecture does not match model kind");
    }

    ParamSet params = export_params(model);  // template with the right shapes
    const uint64_t declared = r.u64();
    if (declared != params.total_size()) {
        throw FormatError(FormatError::Kind::BadHeader,
                          "parameter count does not match architecture");
    }
    for (ParamBlock& b : params.blocks) {
        for (double& v : b.values) {
            v = r.f64();
            if (!std::isfinite(v)) {
                throw FormatError(FormatError::Kind::BadPayload, "non-finite parameter value");
            }
        }
    }

    const size_t crc_pos = r.pos();
    const uint32_t stored = r.u32();
    if (r.remaining() != 0) {
        throw FormatError(FormatError::Kind::BadHeader, "trailing bytes after checkpoint");
    }
    if (stored != crc32(r.data().data(), crc_pos)) {
        throw FormatError(FormatError::Kind::CrcMismatch, "checkpoint CRC mismatch");
    }

    import_params(model, params);
    return model;
}

} // namespace qjet
