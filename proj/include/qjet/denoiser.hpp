#ifndef QJET_DENOISER_HPP
#define QJET_DENOISER_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qjet/encoding.hpp"
#include "qjet/rng.hpp"
#include "qjet/sim.hpp"

namespace qjet {

/// Channel-major pixel stack, the working representation of a ChannelSet
/// inside the denoising models.
struct Tensor {
    size_t channels = 0;
    size_t height = 0;
    size_t width = 0;
    std::vector<double> v;

    Tensor() = default;
    Tensor(size_t c, size_t h, size_t w) : channels(c), height(h), width(w), v(c * h * w, 0.0) {}

    double& at(size_t c, size_t i, size_t j) { return v[(c * height + i) * width + j]; }
    double at(size_t c, size_t i, size_t j) const { return v[(c * height + i) * width + j]; }
    size_t size() const { return v.size(); }
    bool same_shape(const Tensor& o) const {
        return channels == o.channels && height == o.height && width == o.width;
    }
};

Tensor channels_to_tensor(const ChannelSet& cs);
ChannelSet tensor_to_channels(const Tensor& t);

/// Angles of a 4-qubit strongly entangling ansatz: per layer, an
/// Rz-Ry-Rz triple on every qubit followed by a stride-1 CNOT ring.
struct VqcParams {
    size_t layers = 0;
    std::vector<double> angles;  // layers * 4 * 3, ordered (layer, qubit, slot)

    VqcParams() = default;
    explicit VqcParams(size_t num_layers) : layers(num_layers), angles(num_layers * 12, 0.0) {}

    double& angle(size_t layer, size_t qubit, size_t slot) {
        return angles[layer * 12 + qubit * 3 + slot];
    }
    double angle(size_t layer, size_t qubit, size_t slot) const {
        return angles[layer * 12 + qubit * 3 + slot];
    }
};

/// Gate list for the ansatz: per layer, Rz(a0) Ry(a1) Rz(a2) on qubits
/// 0..3 in order, then CNOT(q -> (q+1) mod 4) for q = 0..3.
Circuit strongly_entangling_circuit(const VqcParams& params);

/// encode_group -> ansatz -> decode_group. Inputs are clamped to [0, 1];
/// outputs land in [0, 1] by construction.
std::array<double, 4> vqc_forward(const std::array<double, 4>& in_pixels,
                                  const VqcParams& params);

struct VqcGrad {
    std::vector<double> angle_grad;     // shape of params.angles
    std::array<double, 4> input_grad{};  // d loss / d in_pixels
};

/// Exact gradients via the parameter-shift rule on every rotation gate
/// (including the encoding rotations, which yield the input gradient),
/// chained through the arccos decode of each output qubit. Expectations are
/// clamped to |z| <= 1 - 1e-7 before the arccos derivative.
VqcGrad vqc_backward(const std::array<double, 4>& in_pixels, const VqcParams& params,
                     const std::array<double, 4>& upstream);

enum class Activation : uint8_t { Sigmoid = 0, Identity = 1 };

struct ConvLayer {
    size_t in_channels = 0;
    size_t out_channels = 0;
    size_t kernel = 3;  // odd, same padding
    std::vector<double> weights;  // out * in * kernel * kernel
    std::vector<double> bias;     // out
    Activation activation = Activation::Sigmoid;

    ConvLayer() = default;
    ConvLayer(size_t in_ch, size_t out_ch, size_t k, Activation act);

    double& w(size_t o, size_t c, size_t di, size_t dj) {
        return weights[((o * in_channels + c) * kernel + di) * kernel + dj];
    }
    double w(size_t o, size_t c, size_t di, size_t dj) const {
        return weights[((o * in_channels + c) * kernel + di) * kernel + dj];
    }
};

using ConvStack = std::vector<ConvLayer>;

Tensor conv_layer_forward(const ConvLayer& layer, const Tensor& x);
Tensor conv_forward(const ConvStack& stack, const Tensor& x);

struct ConvTrace {
    std::vector<Tensor> inputs;   // input of each layer
    std::vector<Tensor> outputs;  // activated output of each layer
};

Tensor conv_forward_cached(const ConvStack& stack, const Tensor& x, ConvTrace& trace);

struct ConvLayerGrad {
    std::vector<double> weight_grad;
    std::vector<double> bias_grad;
};

/// Exact adjoint of conv_forward_cached; returns the input gradient and
/// fills one ConvLayerGrad per layer.
Tensor conv_backward(const ConvStack& stack, const ConvTrace& trace, const Tensor& upstream,
                     std::vector<ConvLayerGrad>& grads);

enum class ModelKind : uint8_t { Classical = 0, Hybrid = 1, FullyQuantum = 2 };

/// Denoiser over 4 x (H/2) x (W/2) channel tensors in [0, 1]:
///   Classical     — three 3x3 sigmoid conv layers,
///   Hybrid        — conv front, per-group VQC, conv back,
///   FullyQuantum  — per-group VQC only (params shared across channels by
///                   default, or one VqcParams per channel).
struct DenoiserModel {
    ModelKind kind = ModelKind::Classical;
    ConvStack conv_front;          // Classical: the whole stack; Hybrid: front
    ConvStack conv_back;           // Hybrid only
    std::vector<VqcParams> vqc;    // size 1 (shared) or 4 (per channel)

    const VqcParams& vqc_for_channel(size_t c) const {
        return vqc[vqc.size() == 1 ? 0 : c];
    }
};

DenoiserModel make_model(ModelKind kind, size_t vqc_layers, bool per_channel_vqc,
                         RngStream& rng);

/// Named flat parameter blocks; the canonical serialized order of a model's
/// parameters (also the gradient layout).
struct ParamBlock {
    std::string name;
    std::vector<double> values;
};

struct ParamSet {
    std::vector<ParamBlock> blocks;
    size_t total_size() const;
};

ParamSet export_params(const DenoiserModel& model);
void import_params(DenoiserModel& model, const ParamSet& params);

Tensor model_forward(const DenoiserModel& model, const Tensor& noisy);

/// Gradient of the scalar loss whose dL/d(output) is `upstream`, with
/// respect to every model parameter. Blocks align with export_params.
ParamSet model_backward(const DenoiserModel& model, const Tensor& noisy,
                        const Tensor& upstream);

/// The VQC stage alone (per-group circuits over every channel), exposed so
/// the hybrid pipeline can be composed stage by stage.
Tensor vqc_forward_tensor(const std::vector<VqcParams>& vqc, const Tensor& x);

} // namespace qjet

#endif
