// qjet command line: synthetic data generation, training, sampling,
// evaluation, plotting and post-processing for the jet-image diffusion
// models. Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "qjet/checkpoint.hpp"
#include "qjet/dataset.hpp"
#include "qjet/svg.hpp"
#include "qjet/train.hpp"

namespace {

using namespace qjet;

std::string numbered_name(const std::string& prefix, size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "_%04zu.pgm", index);
    return prefix + buf;
}

int run_gen_data(const SyntheticJetConfig& cfg, const std::string& out) {
    const std::vector<JetImage> images = synth_jets(cfg);
    write_dataset(out, images);
    std::cout << "wrote " << images.size() << " images (" << cfg.size << "x" << cfg.size
              << ") to " << out << "\n";
    return 0;
}

int run_train(const TrainConfig& cfg, const std::string& checkpoint_path,
              const std::string& metrics_path) {
    const std::vector<JetImage> dataset = read_dataset(cfg.dataset_path);
    const TrainResult result = run_training(cfg, dataset);
    for (const MetricsRecord& m : result.metrics) {
        std::cout << "epoch " << m.epoch << "  loss " << m.loss << "  fid " << m.fid << "\n";
    }
    write_checkpoint(checkpoint_path, result.model);
    write_metrics_csv(metrics_path, result.metrics);
    std::cout << "checkpoint: " << checkpoint_path << "\nmetrics: " << metrics_path << "\n";
    return 0;
}

int run_sample(const std::string& checkpoint_path, size_t count, uint64_t seed,
               size_t image_size, size_t refine, size_t threads,
               const std::string& out_prefix) {
    const DenoiserModel model = read_checkpoint(checkpoint_path);
    const std::vector<JetImage> images =
        generate(model, count, RngStream(seed), image_size, refine, threads);
    for (size_t i = 0; i < images.size(); ++i) {
        write_pgm(numbered_name(out_prefix, i), images[i]);
    }
    write_dataset(out_prefix + ".qjet", images);
    std::cout << "wrote " << images.size() << " samples to " << out_prefix << "_*.pgm and "
              << out_prefix << ".qjet\n";
    return 0;
}

int run_evaluate(const std::string& real_path, const std::string& gen_path) {
    const double value = fid(read_dataset(real_path), read_dataset(gen_path));
    std::printf("%.6f\n", value);
    return 0;
}

int run_plot(const std::string& metrics_path, const std::string& out) {
    write_metrics_plot(out, read_metrics_csv(metrics_path));
    std::cout << "wrote " << out << "\n";
    return 0;
}

int run_postprocess(const std::string& in_path, size_t k, const std::string& out) {
    std::vector<JetImage> images = read_dataset(in_path);
    for (JetImage& img : images) {
        img = prominence_filter(img, k);
    }
    write_dataset(out, images);
    std::cout << "wrote " << images.size() << " filtered images to " << out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jet-image diffusion sandbox: quantum-scrambled forward process, "
                 "classical/hybrid/quantum denoisers, FID evaluation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file (flags override it)");

    // gen-data
    SyntheticJetConfig synth_cfg;
    std::string gen_out = "data.qjet";
    CLI::App* gen = app.add_subcommand("gen-data", "generate a synthetic sparse-jet dataset");
    gen->add_option("--count", synth_cfg.count, "number of samples")
        ->default_val(256)->check(CLI::PositiveNumber);
    gen->add_option("--size", synth_cfg.size, "image side length (even)")
        ->default_val(16)->check(CLI::PositiveNumber);
    gen->add_option("--blobs-min", synth_cfg.blobs_min, "minimum blobs per image")
        ->default_val(1);
    gen->add_option("--blobs-max", synth_cfg.blobs_max, "maximum blobs per image")
        ->default_val(3);
    gen->add_option("--sigma", synth_cfg.sigma, "blob width in pixels")
        ->default_val(0.5)->check(CLI::PositiveNumber);
    gen->add_option("--rate", synth_cfg.peak_rate, "exponential rate for peak intensities")
        ->default_val(1.0)->check(CLI::PositiveNumber);
    gen->add_option("--seed", synth_cfg.seed, "generator seed")->default_val(1);
    gen->add_option("--out", gen_out, "output dataset path")->default_val("data.qjet");

    // train
    TrainConfig train_cfg;
    std::string checkpoint_path = "model.qdmw";
    std::string metrics_path = "metrics.csv";
    const std::map<std::string, ModelKind> kind_names{
        {"classical", ModelKind::Classical},
        {"hybrid", ModelKind::Hybrid},
        {"quantum", ModelKind::FullyQuantum}};
    const std::map<std::string, ForwardMode> forward_names{
        {"quantum", ForwardMode::Quantum}, {"classical", ForwardMode::Classical}};
    const std::map<std::string, ScrambleMode> scramble_names{
        {"single", ScrambleMode::Single}, {"fractional", ScrambleMode::Fractional}};
    CLI::App* train = app.add_subcommand("train", "train a denoiser on a dataset");
    train->add_option("--data", train_cfg.dataset_path, "dataset path")->required();
    train->add_option("--epochs", train_cfg.epochs)->default_val(50)->check(CLI::PositiveNumber);
    train->add_option("--batch-size", train_cfg.batch_size)
        ->default_val(32)->check(CLI::PositiveNumber);
    train->add_option("--lr", train_cfg.learning_rate)
        ->default_val(0.02)->check(CLI::PositiveNumber);
    train->add_option("--seed", train_cfg.seed)->default_val(1);
    train->add_option("--model", train_cfg.model_kind, "classical | hybrid | quantum")
        ->default_val("quantum")
        ->transform(CLI::CheckedTransformer(kind_names, CLI::ignore_case));
    train->add_option("--layers", train_cfg.vqc_layers, "VQC layer count")
        ->default_val(1)->check(CLI::PositiveNumber);
    train->add_flag("--per-channel-vqc", train_cfg.per_channel_vqc,
                    "independent VQC parameters per channel (fully quantum model)");
    train->add_option("--forward", train_cfg.forward, "quantum | classical noising")
        ->default_val("quantum")
        ->transform(CLI::CheckedTransformer(forward_names, CLI::ignore_case));
    train->add_option("--scramble", train_cfg.scramble, "single | fractional")
        ->default_val("single")
        ->transform(CLI::CheckedTransformer(scramble_names, CLI::ignore_case));
    train->add_option("--steps", train_cfg.schedule_steps, "classical schedule length")
        ->default_val(1000)->check(CLI::PositiveNumber);
    train->add_option("--beta-start", train_cfg.beta_start)->default_val(1e-4);
    train->add_option("--beta-end", train_cfg.beta_end)->default_val(0.02);
    train->add_option("--threads", train_cfg.threads, "worker threads (0 = all cores)")
        ->default_val(0);
    train->add_option("--checkpoint", checkpoint_path, "output checkpoint path")
        ->default_val("model.qdmw");
    train->add_option("--metrics", metrics_path, "output metrics CSV path")
        ->default_val("metrics.csv");

    // sample
    std::string sample_checkpoint;
    std::string sample_prefix = "sample";
    size_t sample_count = 16;
    uint64_t sample_seed = 1;
    size_t sample_size = 16;
    size_t sample_refine = 1;
    size_t sample_threads = 0;
    CLI::App* sample = app.add_subcommand("sample", "generate images from a checkpoint");
    sample->add_option("--checkpoint", sample_checkpoint, "model checkpoint")->required();
    sample->add_option("--count", sample_count)->default_val(16)->check(CLI::PositiveNumber);
    sample->add_option("--seed", sample_seed)->default_val(1);
    sample->add_option("--size", sample_size, "image side length (even)")->default_val(16);
    sample->add_option("--refine", sample_refine, "denoiser applications per sample")
        ->default_val(1)->check(CLI::PositiveNumber);
    sample->add_option("--threads", sample_threads)->default_val(0);
    sample->add_option("--out-prefix", sample_prefix, "prefix for PGM/dataset outputs")
        ->default_val("sample");

    // evaluate
    std::string eval_real, eval_gen;
    CLI::App* evaluate = app.add_subcommand("evaluate", "FID between two datasets");
    evaluate->add_option("real", eval_real, "reference dataset")->required();
    evaluate->add_option("generated", eval_gen, "dataset to score")->required();

    // plot
    std::string plot_in, plot_out = "metrics.svg";
    CLI::App* plot = app.add_subcommand("plot", "render loss/FID curves from a metrics CSV");
    plot->add_option("metrics", plot_in, "metrics CSV path")->required();
    plot->add_option("--out", plot_out, "output SVG path")->default_val("metrics.svg");

    // postprocess
    std::string post_in, post_out = "filtered.qjet";
    size_t post_k = 3;
    CLI::App* post = app.add_subcommand("postprocess",
                                        "keep only the k most prominent pixels per image");
    post->add_option("dataset", post_in, "input dataset")->required();
    post->add_option("--k", post_k, "pixels to keep")->default_val(3);
    post->add_option("--out", post_out, "output dataset path")->default_val("filtered.qjet");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) return run_gen_data(synth_cfg, gen_out);
        if (train->parsed()) return run_train(train_cfg, checkpoint_path, metrics_path);
        if (sample->parsed()) {
            return run_sample(sample_checkpoint, sample_count, sample_seed, sample_size,
                              sample_refine, sample_threads, sample_prefix);
        }
        if (evaluate->parsed()) return run_evaluate(eval_real, eval_gen);
        if (plot->parsed()) return run_plot(plot_in, plot_out);
        if (post->parsed()) return run_postprocess(post_in, post_k, post_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
