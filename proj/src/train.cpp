#include "qjet/train.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "qjet/linalg.hpp"
#include "qjet/parallel.hpp"

namespace qjet {

namespace {

// Stream tags for deriving independent RNG streams from the run seed.
enum StreamTag : uint64_t {
    kSplitStream = 1,
    kInitStream = 2,
    kShuffleStream = 3,
    kScrambleStream = 4,
    kSampleStream = 5,
    kGenStream = 6,
};

} // namespace

void TrainConfig::validate() const {
    if (epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("config: batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("config: learning_rate must be > 0");
    if (vqc_layers < 1) throw std::invalid_argument("config: vqc layer count must be >= 1");
    if (forward == ForwardMode::Classical) {
        make_schedule(schedule_steps, beta_start, beta_end);  // throws on bad bounds
    }
}

AdamState make_adam_state(const ParamSet& params) {
    AdamState s;
    s.first_moment = params;
    s.second_moment = params;
    for (ParamBlock& b : s.first_moment.blocks) std::fill(b.values.begin(), b.values.end(), 0.0);
    for (ParamBlock& b : s.second_moment.blocks) std::fill(b.values.begin(), b.values.end(), 0.0);
    return s;
}

void adam_step(ParamSet& params, const ParamSet& grads, AdamState& state,
               double learning_rate) {
    if (grads.blocks.size() != params.blocks.size()) {
        throw std::invalid_argument("adam_step: gradient block count mismatch");
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(AdamState::beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(AdamState::beta2, static_cast<double>(state.step));
    for (size_t b = 0; b < params.blocks.size(); ++b) {
        ParamBlock& p = params.blocks[b];
        const ParamBlock& g = grads.blocks[b];
        if (g.values.size() != p.values.size()) {
            throw std::invalid_argument("adam_step: gradient shape mismatch in block " + p.name);
        }
        std::vector<double>& m = state.first_moment.blocks[b].values;
        std::vector<double>& v = state.second_moment.blocks[b].values;
        for (size_t i = 0; i < p.values.size(); ++i) {
            const double grad = g.values[i];
            if (!std::isfinite(grad)) {
                throw std::runtime_error("adam_step: non-finite gradient in block " + g.name);
            }
            m[i] = AdamState::beta1 * m[i] + (1.0 - AdamState::beta1) * grad;
            v[i] = AdamState::beta2 * v[i] + (1.0 - AdamState::beta2) * grad * grad;
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            p.values[i] -= learning_rate * mhat / (std::sqrt(vhat) + AdamState::epsilon);
        }
    }
}

double mse_loss(const Tensor& pred, const Tensor& target) {
    if (!pred.same_shape(target)) {
        throw std::invalid_argument("mse_loss: shape mismatch");
    }
    double acc = 0.0;
    for (size_t i = 0; i < pred.v.size(); ++i) {
        const double d = pred.v[i] - target.v[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pred.v.size());
}

namespace {

JetImage tensor_channel(const Tensor& t, size_t c) {
    JetImage img(t.height, t.width);
    std::copy(t.v.begin() + c * t.height * t.width,
              t.v.begin() + (c + 1) * t.height * t.width, img.pixels.begin());
    return img;
}

// Quantum forward process on one clean channel tensor: encode every channel,
// scramble it with the channel's unitary (optionally a fractional power),
// decode back to pixels.
Tensor scramble_forward(const Tensor& clean, const ChannelScrambler& scrambler,
                        double fraction, bool fractional) {
    Tensor noisy(4, clean.height, clean.width);
    for (size_t c = 0; c < 4; ++c) {
        const EncodedChannel ec = encode_channel(tensor_channel(clean, c));
        const EncodedChannel scrambled =
            fractional ? fractional_scramble(ec, scrambler.unitaries[c], fraction)
                       : scramble_channel(ec, scrambler.unitaries[c]);
        const JetImage decoded = decode_channel(scrambled);
        std::copy(decoded.pixels.begin(), decoded.pixels.end(),
                  noisy.v.begin() + c * clean.height * clean.width);
    }
    return noisy;
}

// Classical forward process: per-channel Gaussian noising at a random step,
// clamped back into the model's [0, 1] input range.
Tensor gaussian_forward(const Tensor& clean, const NoiseSchedule& sched, RngStream& rng) {
    const size_t t = 1 + rng.uniform_below(sched.steps);
    Tensor noisy(4, clean.height, clean.width);
    for (size_t c = 0; c < 4; ++c) {
        const JetImage x0 = tensor_channel(clean, c);
        JetImage noise(clean.height, clean.width);
        for (double& p : noise.pixels) p = rng.normal();
        const JetImage xt = classical_forward(x0, t, noise, sched);
        for (size_t i = 0; i < xt.size(); ++i) {
            noisy.v[c * clean.height * clean.width + i] = std::clamp(xt.pixels[i], 0.0, 1.0);
        }
    }
    return noisy;
}

void accumulate(ParamSet& acc, const ParamSet& g) {
    for (size_t b = 0; b < acc.blocks.size(); ++b) {
        for (size_t i = 0; i < acc.blocks[b].values.size(); ++i) {
            acc.blocks[b].values[i] += g.blocks[b].values[i];
        }
    }
}

} // namespace

double train_epoch(DenoiserModel& model, const std::vector<Tensor>& clean,
                   const TrainConfig& cfg, AdamState& adam, const RngStream& run_rng,
                   size_t epoch_index) {
    if (clean.empty()) {
        throw std::invalid_argument("train_epoch: empty dataset");
    }
    const size_t n = clean.size();

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    RngStream shuffle_rng = run_rng.derive(kShuffleStream, epoch_index);
    for (size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[shuffle_rng.uniform_below(i)]);
    }

    NoiseSchedule sched;
    if (cfg.forward == ForwardMode::Classical) {
        sched = make_schedule(cfg.schedule_steps, cfg.beta_start, cfg.beta_end);
    }

    ParamSet params = export_params(model);
    double loss_sum = 0.0;
    const size_t num_batches = (n + cfg.batch_size - 1) / cfg.batch_size;
    for (size_t batch = 0; batch < num_batches; ++batch) {
        const size_t begin = batch * cfg.batch_size;
        const size_t count = std::min(cfg.batch_size, n - begin);

        // One scrambler per batch so the model never sees a fixed unitary.
        ChannelScrambler scrambler;
        if (cfg.forward == ForwardMode::Quantum) {
            RngStream srng = run_rng.derive(kScrambleStream, (epoch_index << 32) | batch);
            scrambler = make_scrambler(srng);
        }

        std::vector<double> losses(count);
        std::vector<ParamSet> grads(count);
        parallel_for(count, cfg.threads, [&](size_t slot) {
            const Tensor& target = clean[order[begin + slot]];
            RngStream sample_rng =
                run_rng.derive(kSampleStream, (epoch_index << 32) | (begin + slot));
            Tensor noisy;
            if (cfg.forward == ForwardMode::Quantum) {
                const bool fractional = cfg.scramble == ScrambleMode::Fractional;
                const double fraction = fractional ? sample_rng.uniform() : 1.0;
                noisy = scramble_forward(target, scrambler, fraction, fractional);
            } else {
                noisy = gaussian_forward(target, sched, sample_rng);
            }
            const Tensor pred = model_forward(model, noisy);
            losses[slot] = mse_loss(pred, target);
            Tensor upstream(4, target.height, target.width);
            const double scale = 2.0 / static_cast<double>(pred.v.size());
            for (size_t i = 0; i < pred.v.size(); ++i) {
                upstream.v[i] = scale * (pred.v[i] - target.v[i]);
            }
            grads[slot] = model_backward(model, noisy, upstream);
        });

        ParamSet batch_grad = grads[0];
        for (size_t slot = 1; slot < count; ++slot) accumulate(batch_grad, grads[slot]);
        const double inv = 1.0 / static_cast<double>(count);
        for (ParamBlock& b : batch_grad.blocks) {
            for (double& v : b.values) v *= inv;
        }
        for (size_t slot = 0; slot < count; ++slot) loss_sum += losses[slot];

        adam_step(params, batch_grad, adam, cfg.learning_rate);
        import_params(model, params);
    }
    return loss_sum / static_cast<double>(n);
}

std::vector<JetImage> generate(const DenoiserModel& model, size_t count,
                               const RngStream& rng, size_t image_size,
                               size_t refine, size_t threads) {
    if (image_size == 0 || image_size % 2 != 0) {
        throw std::invalid_argument("generate: image size must be even");
    }
    const size_t half = image_size / 2;
    std::vector<JetImage> out(count);
    parallel_for(count, threads, [&](size_t s) {
        RngStream sample_rng = rng.derive(kGenStream, s);
        Tensor noisy(4, half, half);
        for (size_t c = 0; c < 4; ++c) {
            const EncodedChannel prior = noise_prior_channel(sample_rng, half, half);
            const JetImage decoded = decode_channel(prior);
            std::copy(decoded.pixels.begin(), decoded.pixels.end(),
                      noisy.v.begin() + c * half * half);
        }
        Tensor pred = noisy;
        for (size_t r = 0; r < refine; ++r) {
            pred = model_forward(model, pred);
        }
        out[s] = depth_to_space(tensor_to_channels(pred));
    });
    return out;
}

namespace {

// Sample mean and ridge-regularized unbiased covariance of flattened pixels.
void feature_stats(const std::vector<JetImage>& set, std::vector<double>& mean,
                   ComplexMatrix& cov) {
    const size_t n = set.size();
    const size_t d = set[0].size();
    mean.assign(d, 0.0);
    for (const JetImage& img : set) {
        for (size_t i = 0; i < d; ++i) mean[i] += img.pixels[i];
    }
    for (double& m : mean) m /= static_cast<double>(n);

    cov = ComplexMatrix(d, d);
    std::vector<double> centered(d);
    for (const JetImage& img : set) {
        for (size_t i = 0; i < d; ++i) centered[i] = img.pixels[i] - mean[i];
        for (size_t i = 0; i < d; ++i) {
            if (centered[i] == 0.0) continue;
            for (size_t j = i; j < d; ++j) {
                cov(i, j) += centered[i] * centered[j];
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(n - 1);
    for (size_t i = 0; i < d; ++i) {
        for (size_t j = i; j < d; ++j) {
            cov(i, j) *= inv;
            cov(j, i) = cov(i, j);
        }
        cov(i, i) += 1e-6;  // rank-deficient covariances are the norm here
    }
}

} // namespace

double fid(const std::vector<JetImage>& real_set, const std::vector<JetImage>& gen_set) {
    if (real_set.size() < 2 || gen_set.size() < 2) {
        throw std::invalid_argument("fid: each set needs at least 2 samples");
    }
    const size_t h = real_set[0].height, w = real_set[0].width;
    for (const auto* set : {&real_set, &gen_set}) {
        for (const JetImage& img : *set) {
            if (img.height != h || img.width != w) {
                throw std::invalid_argument("fid: inconsistent image shapes");
            }
        }
    }

    std::vector<double> mean_x, mean_g;
    ComplexMatrix cov_x, cov_g;
    feature_stats(real_set, mean_x, cov_x);
    feature_stats(gen_set, mean_g, cov_g);

    double mean_term = 0.0;
    for (size_t i = 0; i < mean_x.size(); ++i) {
        const double d = mean_x[i] - mean_g[i];
        mean_term += d * d;
    }

    double trace_x = 0.0, trace_g = 0.0;
    for (size_t i = 0; i < cov_x.rows(); ++i) {
        trace_x += cov_x(i, i).real();
        trace_g += cov_g(i, i).real();
    }

    // Tr((Sx Cg Sx)^{1/2}) with Sx = Cx^{1/2}; the symmetrized product keeps
    // the inner matrix Hermitian PSD.
    const ComplexMatrix sx = sqrtm_psd(cov_x);
    ComplexMatrix inner = matmul(sx, matmul(cov_g, sx));
    for (size_t i = 0; i < inner.rows(); ++i) {
        for (size_t j = i + 1; j < inner.cols(); ++j) {
            const cdouble avg = (inner(i, j) + std::conj(inner(j, i))) * 0.5;
            inner(i, j) = avg;
            inner(j, i) = std::conj(avg);
        }
        inner(i, i) = inner(i, i).real();
    }
    const ComplexMatrix cross = sqrtm_psd(inner);
    double trace_cross = 0.0;
    for (size_t i = 0; i < cross.rows(); ++i) trace_cross += cross(i, i).real();

    double value = mean_term + trace_x + trace_g - 2.0 * trace_cross;
    if (value < -1e-6) {
        throw std::runtime_error("fid: negative result beyond numerical floor");
    }
    return std::max(value, 0.0);
}

JetImage prominence_filter(const JetImage& img, size_t k) {
    JetImage out(img.height, img.width);
    if (k == 0) return out;
    if (k >= img.size()) return img;

    std::vector<size_t> idx(img.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    // Largest first; raster order (lower index) wins ties.
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (img.pixels[a] != img.pixels[b]) return img.pixels[a] > img.pixels[b];
        return a < b;
    });
    for (size_t i = 0; i < k; ++i) {
        out.pixels[idx[i]] = img.pixels[idx[i]];
    }
    return out;
}

TrainResult run_training(const TrainConfig& cfg, const std::vector<JetImage>& dataset) {
    cfg.validate();
    if (dataset.size() < 5) {
        throw std::invalid_argument("run_training: dataset needs at least 5 samples");
    }
    const size_t image_size = dataset[0].height;
    if (dataset[0].width != image_size || image_size % 2 != 0) {
        throw std::invalid_argument("run_training: images must be square with even size");
    }

    // Bring arbitrary energy scales into the model's [0, 1] range.
    double max_pixel = 0.0;
    for (const JetImage& img : dataset) {
        for (double p : img.pixels) max_pixel = std::max(max_pixel, p);
    }
    std::vector<JetImage> normalized;
    normalized.reserve(dataset.size());
    for (const JetImage& img : dataset) {
        normalized.push_back(max_pixel > 1.0 ? normalize(img, max_pixel) : img);
    }

    const RngStream run_rng(cfg.seed);

    // 80/20 split on a seeded shuffle; the holdout is the FID reference.
    std::vector<size_t> order(normalized.size());
    std::iota(order.begin(), order.end(), size_t{0});
    RngStream split_rng = run_rng.derive(kSplitStream, 0);
    for (size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[split_rng.uniform_below(i)]);
    }
    const size_t holdout_count = std::max<size_t>(2, normalized.size() / 5);

    TrainResult result;
    std::vector<Tensor> clean;
    for (size_t i = 0; i < order.size(); ++i) {
        const JetImage& img = normalized[order[i]];
        if (i < holdout_count) {
            result.holdout.push_back(img);
        } else {
            clean.push_back(channels_to_tensor(space_to_depth(img)));
        }
    }
    if (clean.empty()) {
        throw std::invalid_argument("run_training: dataset too small for a train split");
    }

    RngStream init_rng = run_rng.derive(kInitStream, 0);
    result.model = make_model(cfg.model_kind, cfg.vqc_layers, cfg.per_channel_vqc, init_rng);
    result.initial_model = result.model;

    AdamState adam = make_adam_state(export_params(result.model));
    const size_t eval_count = std::min<size_t>(result.holdout.size(), 256);
    result.initial_fid =
        fid(result.holdout, generate(result.initial_model, eval_count,
                                     run_rng.derive(kGenStream, 0), image_size, 1,
                                     cfg.threads));
    for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double loss = train_epoch(result.model, clean, cfg, adam, run_rng, epoch);
        const std::vector<JetImage> samples =
            generate(result.model, eval_count, run_rng.derive(kGenStream, epoch + 1),
                     image_size, 1, cfg.threads);
        const double score = fid(result.holdout, samples);
        result.metrics.push_back({epoch + 1, loss, score});
    }
    return result;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

std::string metrics_to_csv(const std::vector<MetricsRecord>& metrics) {
    std::string out = "epoch,loss,fid\n";
    for (const MetricsRecord& m : metrics) {
        out += std::to_string(m.epoch);
        out += ',';
        out += format_double(m.loss);
        out += ',';
        out += format_double(m.fid);
        out += '\n';
    }
    return out;
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& metrics) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error("cannot open file for writing: " + path);
    }
    const std::string csv = metrics_to_csv(metrics);
    f.write(csv.data(), static_cast<std::streamsize>(csv.size()));
    if (!f) {
        throw std::runtime_error("write failed: " + path);
    }
}

std::vector<MetricsRecord> read_metrics_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw std::runtime_error("cannot open metrics file: " + path);
    }
    std::string line;
    if (!std::getline(f, line) || line != "epoch,loss,fid") {
        throw std::runtime_error("metrics file has an unexpected header: " + path);
    }
    std::vector<MetricsRecord> metrics;
    size_t line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) continue;
        MetricsRecord m;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        auto r1 = std::from_chars(p, end, m.epoch);
        if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ',') {
            throw std::runtime_error("bad metrics row at line " + std::to_string(line_no));
        }
        auto r2 = std::from_chars(r1.ptr + 1, end, m.loss);
        if (r2.ec != std::errc{} || r2.ptr == end || *r2.ptr != ',') {
            throw std::runtime_error("bad metrics row at line " + std::to_string(line_no));
        }
        auto r3 = std::from_chars(r2.ptr + 1, end, m.fid);
        if (r3.ec != std::errc{} || r3.ptr != end) {
            throw std::runtime_error("bad metrics row at line " + std::to_string(line_no));
        }
        metrics.push_back(m);
    }
    if (metrics.empty()) {
        throw std::runtime_error("metrics file has no rows: " + path);
    }
    return metrics;
}

} // namespace qjet
