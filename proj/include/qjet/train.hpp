#ifndef QJET_TRAIN_HPP
#define QJET_TRAIN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qjet/dataset.hpp"
#include "qjet/denoiser.hpp"
#include "qjet/diffusion.hpp"
#include "qjet/encoding.hpp"
#include "qjet/rng.hpp"

namespace qjet {

enum class ForwardMode : uint8_t { Quantum = 0, Classical = 1 };
enum class ScrambleMode : uint8_t { Single = 0, Fractional = 1 };

struct TrainConfig {
    size_t epochs = 50;
    size_t batch_size = 32;
    double learning_rate = 0.02;
    uint64_t seed = 1;
    ModelKind model_kind = ModelKind::FullyQuantum;
    size_t vqc_layers = 1;
    bool per_channel_vqc = false;
    ForwardMode forward = ForwardMode::Quantum;
    ScrambleMode scramble = ScrambleMode::Single;  // quantum forward only
    size_t schedule_steps = 1000;                  // classical forward only
    double beta_start = 1e-4;
    double beta_end = 0.02;
    size_t threads = 0;  // 0 = hardware concurrency
    std::string dataset_path;

    void validate() const;  // throws std::invalid_argument
};

/// Adam with the canonical constants and bias correction.
struct AdamState {
    static constexpr double beta1 = 0.9;
    static constexpr double beta2 = 0.999;
    static constexpr double epsilon = 1e-8;
    ParamSet first_moment;
    ParamSet second_moment;
    size_t step = 0;
};

AdamState make_adam_state(const ParamSet& params);

/// One bias-corrected update, in place. Throws std::runtime_error naming
/// the offending block if a gradient is non-finite.
void adam_step(ParamSet& params, const ParamSet& grads, AdamState& state,
               double learning_rate);

struct MetricsRecord {
    size_t epoch = 0;  // 1-based
    double loss = 0.0;
    double fid = 0.0;
};

double mse_loss(const Tensor& pred, const Tensor& target);

/// One pass over the training tensors: per batch, build noisy inputs
/// (Haar scrambling or the Gaussian schedule), run forward/backward on every
/// sample, and take one Adam step on the batch-mean gradient. Deterministic
/// for a fixed config seed regardless of thread count. Returns the
/// epoch-mean MSE.
double train_epoch(DenoiserModel& model, const std::vector<Tensor>& clean,
                   const TrainConfig& cfg, AdamState& adam, const RngStream& run_rng,
                   size_t epoch_index);

/// Samples images from Haar noise priors: decode the prior channels, apply
/// the denoiser `refine` times, and reassemble the image.
std::vector<JetImage> generate(const DenoiserModel& model, size_t count,
                               const RngStream& rng, size_t image_size,
                               size_t refine = 1, size_t threads = 0);

/// Frechet distance between the two sets using flattened pixels as features
/// and a 1e-6 ridge on both covariances. Both sets need >= 2 samples of one
/// common shape.
double fid(const std::vector<JetImage>& real_set, const std::vector<JetImage>& gen_set);

/// Keeps the k largest pixels (raster order breaks ties), zeroes the rest.
JetImage prominence_filter(const JetImage& img, size_t k);

struct TrainResult {
    DenoiserModel model;
    DenoiserModel initial_model;
    double initial_fid = 0.0;  // FID of the untrained model's samples
    std::vector<MetricsRecord> metrics;
    std::vector<JetImage> holdout;  // the 20% split used for FID
};

/// Full training run: normalize if needed, 80/20 split, seeded model init,
/// then `epochs` training epochs with a per-epoch FID against the held-out
/// split.
TrainResult run_training(const TrainConfig& cfg, const std::vector<JetImage>& dataset);

/// Metrics CSV: header `epoch,loss,fid`, shortest round-trip float
/// formatting, LF line endings.
std::string metrics_to_csv(const std::vector<MetricsRecord>& metrics);
void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& metrics);
std::vector<MetricsRecord> read_metrics_csv(const std::string& path);

} // namespace qjet

#endif
