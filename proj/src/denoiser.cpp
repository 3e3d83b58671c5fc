#include "qjet/denoiser.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qjet {

namespace {

constexpr double kZClamp = 1.0 - 1e-7;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

} // namespace

Tensor channels_to_tensor(const ChannelSet& cs) {
    const size_t h = cs.channels[0].height;
    const size_t w = cs.channels[0].width;
    Tensor t(4, h, w);
    for (size_t c = 0; c < 4; ++c) {
        if (cs.channels[c].height != h || cs.channels[c].width != w) {
            throw std::invalid_argument("channels_to_tensor: channel dimensions differ");
        }
        std::copy(cs.channels[c].pixels.begin(), cs.channels[c].pixels.end(),
                  t.v.begin() + c * h * w);
    }
    return t;
}

ChannelSet tensor_to_channels(const Tensor& t) {
    if (t.channels != 4) {
        throw std::invalid_argument("tensor_to_channels: expected 4 channels");
    }
    ChannelSet cs;
    for (size_t c = 0; c < 4; ++c) {
        cs.channels[c] = JetImage(t.height, t.width);
        std::copy(t.v.begin() + c * t.height * t.width,
                  t.v.begin() + (c + 1) * t.height * t.width,
                  cs.channels[c].pixels.begin());
    }
    return cs;
}

Circuit strongly_entangling_circuit(const VqcParams& params) {
    if (params.layers < 1 || params.angles.size() != params.layers * 12) {
        throw std::invalid_argument("strongly_entangling_circuit: malformed parameters");
    }
    Circuit c;
    c.num_qubits = 4;
    c.gates.reserve(params.layers * 16);
    for (size_t l = 0; l < params.layers; ++l) {
        for (size_t q = 0; q < 4; ++q) {
            c.gates.push_back(Gate::rz(params.angle(l, q, 0), q));
            c.gates.push_back(Gate::ry(params.angle(l, q, 1), q));
            c.gates.push_back(Gate::rz(params.angle(l, q, 2), q));
        }
        for (size_t q = 0; q < 4; ++q) {
            c.gates.push_back(Gate::cnot(q, (q + 1) % 4));
        }
    }
    return c;
}

namespace {

std::array<double, 4> clamp_unit(const std::array<double, 4>& px) {
    std::array<double, 4> out;
    for (size_t i = 0; i < 4; ++i) out[i] = std::clamp(px[i], 0.0, 1.0);
    return out;
}

std::array<double, 4> decode_state(const StateVector& state) {
    std::array<double, 4> px;
    for (size_t q = 0; q < 4; ++q) {
        const double z = std::clamp(expectation_z(state, q), -1.0, 1.0);
        px[q] = std::acos(z) / std::numbers::pi;
    }
    return px;
}

} // namespace

std::array<double, 4> vqc_forward(const std::array<double, 4>& in_pixels,
                                  const VqcParams& params) {
    const std::array<double, 4> px = clamp_unit(in_pixels);
    StateVector state(4);
    for (size_t q = 0; q < 4; ++q) {
        apply_gate_inplace(state, Gate::rx(std::numbers::pi * px[q], q));
    }
    apply_circuit_inplace(state, strongly_entangling_circuit(params));
    return decode_state(state);
}

VqcGrad vqc_backward(const std::array<double, 4>& in_pixels, const VqcParams& params,
                     const std::array<double, 4>& upstream) {
    const std::array<double, 4> px = clamp_unit(in_pixels);

    // Full gate list: four encoding rotations, then the ansatz. Ansatz
    // rotations appear in the same order as params.angles.
    std::vector<Gate> gates;
    for (size_t q = 0; q < 4; ++q) {
        gates.push_back(Gate::rx(std::numbers::pi * px[q], q));
    }
    const Circuit ansatz = strongly_entangling_circuit(params);
    gates.insert(gates.end(), ansatz.gates.begin(), ansatz.gates.end());

    // Prefix states: prefix[j] is the state before gate j.
    std::vector<StateVector> prefix;
    prefix.reserve(gates.size() + 1);
    prefix.emplace_back(4);
    for (const Gate& g : gates) {
        StateVector next = prefix.back();
        apply_gate_inplace(next, g);
        prefix.push_back(std::move(next));
    }

    // Chain factor per output qubit: d pixel_q / d z_q = -1 / (pi sqrt(1-z^2)).
    std::array<double, 4> chain;
    for (size_t q = 0; q < 4; ++q) {
        double z = std::clamp(expectation_z(prefix.back(), q), -kZClamp, kZClamp);
        chain[q] = upstream[q] * (-1.0 / (std::numbers::pi * std::sqrt(1.0 - z * z)));
    }

    VqcGrad grad;
    grad.angle_grad.assign(params.angles.size(), 0.0);
    size_t param_index = 0;
    for (size_t j = 0; j < gates.size(); ++j) {
        if (!gates[j].is_rotation()) continue;

        std::array<double, 4> zplus{}, zminus{};
        for (int sign = 0; sign < 2; ++sign) {
            const double shift = sign == 0 ? std::numbers::pi / 2.0 : -std::numbers::pi / 2.0;
            StateVector state = prefix[j];
            apply_gate_inplace(state, gates[j].with_angle(gates[j].angle + shift));
            for (size_t k = j + 1; k < gates.size(); ++k) {
                apply_gate_inplace(state, gates[k]);
            }
            for (size_t q = 0; q < 4; ++q) {
                (sign == 0 ? zplus : zminus)[q] = expectation_z(state, q);
            }
        }

        double g = 0.0;
        for (size_t q = 0; q < 4; ++q) {
            g += chain[q] * (zplus[q] - zminus[q]) * 0.5;
        }
        if (j < 4) {
            // Encoding gate: theta = pi * pixel, dead where the clamp bound.
            const bool clamped = in_pixels[j] < 0.0 || in_pixels[j] > 1.0;
            grad.input_grad[j] = clamped ? 0.0 : std::numbers::pi * g;
        } else {
            grad.angle_grad[param_index++] = g;
        }
    }
    return grad;
}

ConvLayer::ConvLayer(size_t in_ch, size_t out_ch, size_t k, Activation act)
    : in_channels(in_ch), out_channels(out_ch), kernel(k),
      weights(out_ch * in_ch * k * k, 0.0), bias(out_ch, 0.0), activation(act) {
    if (k % 2 == 0) {
        throw std::invalid_argument("ConvLayer: kernel must be odd for same padding");
    }
}

Tensor conv_layer_forward(const ConvLayer& layer, const Tensor& x) {
    if (x.channels != layer.in_channels) {
        throw std::invalid_argument("conv_layer_forward: channel count mismatch");
    }
    const size_t h = x.height, w = x.width, k = layer.kernel;
    const long pad = static_cast<long>(k / 2);
    Tensor y(layer.out_channels, h, w);
    for (size_t o = 0; o < layer.out_channels; ++o) {
        for (size_t i = 0; i < h; ++i) {
            for (size_t j = 0; j < w; ++j) {
                double acc = layer.bias[o];
                for (size_t c = 0; c < layer.in_channels; ++c) {
                    for (size_t di = 0; di < k; ++di) {
                        const long ii = static_cast<long>(i) + static_cast<long>(di) - pad;
                        if (ii < 0 || ii >= static_cast<long>(h)) continue;
                        for (size_t dj = 0; dj < k; ++dj) {
                            const long jj = static_cast<long>(j) + static_cast<long>(dj) - pad;
                            if (jj < 0 || jj >= static_cast<long>(w)) continue;
                            acc += layer.w(o, c, di, dj) * x.at(c, ii, jj);
                        }
                    }
                }
                y.at(o, i, j) = layer.activation == Activation::Sigmoid ? sigmoid(acc) : acc;
            }
        }
    }
    return y;
}

Tensor conv_forward(const ConvStack& stack, const Tensor& x) {
    Tensor cur = x;
    for (const ConvLayer& layer : stack) {
        cur = conv_layer_forward(layer, cur);
    }
    return cur;
}

Tensor conv_forward_cached(const ConvStack& stack, const Tensor& x, ConvTrace& trace) {
    trace.inputs.clear();
    trace.outputs.clear();
    Tensor cur = x;
    for (const ConvLayer& layer : stack) {
        trace.inputs.push_back(cur);
        cur = conv_layer_forward(layer, cur);
        trace.outputs.push_back(cur);
    }
    return cur;
}

Tensor conv_backward(const ConvStack& stack, const ConvTrace& trace, const Tensor& upstream,
                     std::vector<ConvLayerGrad>& grads) {
    if (trace.inputs.size() != stack.size()) {
        throw std::invalid_argument("conv_backward: trace does not match stack");
    }
    grads.assign(stack.size(), {});
    Tensor gy = upstream;
    for (size_t li = stack.size(); li-- > 0;) {
        const ConvLayer& layer = stack[li];
        const Tensor& x = trace.inputs[li];
        const Tensor& y = trace.outputs[li];
        if (!gy.same_shape(y)) {
            throw std::invalid_argument("conv_backward: upstream shape mismatch");
        }
        const size_t h = x.height, w = x.width, k = layer.kernel;
        const long pad = static_cast<long>(k / 2);

        Tensor gpre = gy;
        if (layer.activation == Activation::Sigmoid) {
            for (size_t idx = 0; idx < gpre.v.size(); ++idx) {
                gpre.v[idx] *= y.v[idx] * (1.0 - y.v[idx]);
            }
        }

        ConvLayerGrad& lg = grads[li];
        lg.weight_grad.assign(layer.weights.size(), 0.0);
        lg.bias_grad.assign(layer.bias.size(), 0.0);
        Tensor gx(layer.in_channels, h, w);
        for (size_t o = 0; o < layer.out_channels; ++o) {
            for (size_t i = 0; i < h; ++i) {
                for (size_t j = 0; j < w; ++j) {
                    const double g = gpre.at(o, i, j);
                    lg.bias_grad[o] += g;
                    for (size_t c = 0; c < layer.in_channels; ++c) {
                        for (size_t di = 0; di < k; ++di) {
                            const long ii = static_cast<long>(i) + static_cast<long>(di) - pad;
                            if (ii < 0 || ii >= static_cast<long>(h)) continue;
                            for (size_t dj = 0; dj < k; ++dj) {
                                const long jj = static_cast<long>(j) + static_cast<long>(dj) - pad;
                                if (jj < 0 || jj >= static_cast<long>(w)) continue;
                                lg.weight_grad[((o * layer.in_channels + c) * k + di) * k + dj] +=
                                    g * x.at(c, ii, jj);
                                gx.at(c, ii, jj) += g * layer.w(o, c, di, dj);
                            }
                        }
                    }
                }
            }
        }
        gy = std::move(gx);
    }
    return gy;
}

namespace {

ConvLayer random_conv_layer(size_t in_ch, size_t out_ch, size_t k, Activation act,
                            RngStream& rng) {
    ConvLayer layer(in_ch, out_ch, k, act);
    const double fan_in = static_cast<double>(in_ch * k * k);
    const double fan_out = static_cast<double>(out_ch * k * k);
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& w : layer.weights) {
        w = bound * (2.0 * rng.uniform() - 1.0);
    }
    return layer;
}

VqcParams random_vqc(size_t layers, RngStream& rng) {
    VqcParams p(layers);
    for (double& a : p.angles) {
        a = std::numbers::pi * (2.0 * rng.uniform() - 1.0);
    }
    return p;
}

} // namespace

DenoiserModel make_model(ModelKind kind, size_t vqc_layers, bool per_channel_vqc,
                         RngStream& rng) {
    DenoiserModel m;
    m.kind = kind;
    switch (kind) {
        case ModelKind::Classical:
            // Sized for rough parameter parity with the hybrid variant.
            for (int i = 0; i < 3; ++i) {
                m.conv_front.push_back(random_conv_layer(4, 4, 3, Activation::Sigmoid, rng));
            }
            break;
        case ModelKind::Hybrid:
            m.conv_front.push_back(random_conv_layer(4, 4, 3, Activation::Sigmoid, rng));
            m.vqc.push_back(random_vqc(vqc_layers, rng));
            m.conv_back.push_back(random_conv_layer(4, 4, 3, Activation::Sigmoid, rng));
            break;
        case ModelKind::FullyQuantum: {
            const size_t count = per_channel_vqc ? 4 : 1;
            for (size_t i = 0; i < count; ++i) {
                m.vqc.push_back(random_vqc(vqc_layers, rng));
            }
            break;
        }
    }
    return m;
}

size_t ParamSet::total_size() const {
    size_t n = 0;
    for (const ParamBlock& b : blocks) n += b.values.size();
    return n;
}

namespace {

void export_stack(const ConvStack& stack, const std::string& prefix, ParamSet& out) {
    for (size_t i = 0; i < stack.size(); ++i) {
        const std::string base = prefix + std::to_string(i);
        out.blocks.push_back({base + ".weight", stack[i].weights});
        out.blocks.push_back({base + ".bias", stack[i].bias});
    }
}

void import_stack(ConvStack& stack, const ParamSet& params, size_t& cursor) {
    for (ConvLayer& layer : stack) {
        if (cursor + 2 > params.blocks.size() ||
            params.blocks[cursor].values.size() != layer.weights.size() ||
            params.blocks[cursor + 1].values.size() != layer.bias.size()) {
            throw std::invalid_argument("import_params: conv block shape mismatch");
        }
        layer.weights = params.blocks[cursor++].values;
        layer.bias = params.blocks[cursor++].values;
    }
}

} // namespace

ParamSet export_params(const DenoiserModel& model) {
    ParamSet out;
    export_stack(model.conv_front, model.kind == ModelKind::Hybrid ? "front" : "conv", out);
    for (size_t i = 0; i < model.vqc.size(); ++i) {
        out.blocks.push_back({"vqc" + std::to_string(i) + ".angles", model.vqc[i].angles});
    }
    export_stack(model.conv_back, "back", out);
    return out;
}

void import_params(DenoiserModel& model, const ParamSet& params) {
    size_t cursor = 0;
    import_stack(model.conv_front, params, cursor);
    for (VqcParams& v : model.vqc) {
        if (cursor >= params.blocks.size() ||
            params.blocks[cursor].values.size() != v.angles.size()) {
            throw std::invalid_argument("import_params: vqc block shape mismatch");
        }
        v.angles = params.blocks[cursor++].values;
    }
    import_stack(model.conv_back, params, cursor);
    if (cursor != params.blocks.size()) {
        throw std::invalid_argument("import_params: extra parameter blocks");
    }
}

Tensor vqc_forward_tensor(const std::vector<VqcParams>& vqc, const Tensor& x) {
    if (x.channels != 4 || (x.height * x.width) % 4 != 0) {
        throw std::invalid_argument("vqc_forward_tensor: bad tensor shape");
    }
    const size_t plane = x.height * x.width;
    Tensor y(4, x.height, x.width);
    for (size_t c = 0; c < 4; ++c) {
        const VqcParams& params = vqc[vqc.size() == 1 ? 0 : c];
        for (size_t g = 0; g < plane / 4; ++g) {
            const size_t base = c * plane + 4 * g;
            const std::array<double, 4> out = vqc_forward(
                {x.v[base], x.v[base + 1], x.v[base + 2], x.v[base + 3]}, params);
            for (size_t k = 0; k < 4; ++k) y.v[base + k] = out[k];
        }
    }
    return y;
}

Tensor model_forward(const DenoiserModel& model, const Tensor& noisy) {
    if (noisy.channels != 4) {
        throw std::invalid_argument("model_forward: expected a 4-channel tensor");
    }
    switch (model.kind) {
        case ModelKind::Classical:
            return conv_forward(model.conv_front, noisy);
        case ModelKind::FullyQuantum:
            return vqc_forward_tensor(model.vqc, noisy);
        case ModelKind::Hybrid: {
            const Tensor mid = conv_forward(model.conv_front, noisy);
            const Tensor denoised = vqc_forward_tensor(model.vqc, mid);
            return conv_forward(model.conv_back, denoised);
        }
    }
    throw std::logic_error("model_forward: unknown model kind");
}

namespace {

// Per-group VQC backward over a whole tensor; accumulates angle gradients
// into the matching blocks and returns the input gradient.
Tensor vqc_backward_tensor(const std::vector<VqcParams>& vqc, const Tensor& x,
                           const Tensor& upstream,
                           std::vector<std::vector<double>>& angle_grads) {
    const size_t plane = x.height * x.width;
    angle_grads.assign(vqc.size(), {});
    for (size_t i = 0; i < vqc.size(); ++i) {
        angle_grads[i].assign(vqc[i].angles.size(), 0.0);
    }
    Tensor gx(4, x.height, x.width);
    for (size_t c = 0; c < 4; ++c) {
        const size_t vi = vqc.size() == 1 ? 0 : c;
        for (size_t g = 0; g < plane / 4; ++g) {
            const size_t base = c * plane + 4 * g;
            const VqcGrad vg = vqc_backward(
                {x.v[base], x.v[base + 1], x.v[base + 2], x.v[base + 3]}, vqc[vi],
                {upstream.v[base], upstream.v[base + 1], upstream.v[base + 2],
                 upstream.v[base + 3]});
            for (size_t k = 0; k < vg.angle_grad.size(); ++k) {
                angle_grads[vi][k] += vg.angle_grad[k];
            }
            for (size_t k = 0; k < 4; ++k) gx.v[base + k] = vg.input_grad[k];
        }
    }
    return gx;
}

void append_stack_grads(const std::vector<ConvLayerGrad>& grads, const ConvStack& stack,
                        const std::string& prefix, ParamSet& out) {
    for (size_t i = 0; i < stack.size(); ++i) {
        const std::string base = prefix + std::to_string(i);
        out.blocks.push_back({base + ".weight", grads[i].weight_grad});
        out.blocks.push_back({base + ".bias", grads[i].bias_grad});
    }
}

} // namespace

ParamSet model_backward(const DenoiserModel& model, const Tensor& noisy,
                        const Tensor& upstream) {
    ParamSet out;
    switch (model.kind) {
        case ModelKind::Classical: {
            ConvTrace trace;
            conv_forward_cached(model.conv_front, noisy, trace);
            std::vector<ConvLayerGrad> grads;
            conv_backward(model.conv_front, trace, upstream, grads);
            append_stack_grads(grads, model.conv_front, "conv", out);
            return out;
        }
        case ModelKind::FullyQuantum: {
            std::vector<std::vector<double>> angle_grads;
            vqc_backward_tensor(model.vqc, noisy, upstream, angle_grads);
            for (size_t i = 0; i < angle_grads.size(); ++i) {
                out.blocks.push_back({"vqc" + std::to_string(i) + ".angles",
                                      std::move(angle_grads[i])});
            }
            return out;
        }
        case ModelKind::Hybrid: {
            ConvTrace front_trace;
            const Tensor mid = conv_forward_cached(model.conv_front, noisy, front_trace);
            const Tensor denoised = vqc_forward_tensor(model.vqc, mid);
            ConvTrace back_trace;
            conv_forward_cached(model.conv_back, denoised, back_trace);

            std::vector<ConvLayerGrad> back_grads;
            const Tensor g_denoised =
                conv_backward(model.conv_back, back_trace, upstream, back_grads);
            std::vector<std::vector<double>> angle_grads;
            const Tensor g_mid = vqc_backward_tensor(model.vqc, mid, g_denoised, angle_grads);
            std::vector<ConvLayerGrad> front_grads;
            conv_backward(model.conv_front, front_trace, g_mid, front_grads);

            append_stack_grads(front_grads, model.conv_front, "front", out);
            for (size_t i = 0; i < angle_grads.size(); ++i) {
                out.blocks.push_back({"vqc" + std::to_string(i) + ".angles",
                                      std::move(angle_grads[i])});
            }
            append_stack_grads(back_grads, model.conv_back, "back", out);
            return out;
        }
    }
    throw std::logic_error("model_backward: unknown model kind");
}

} // namespace qjet
