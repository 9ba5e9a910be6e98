#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mric/codec.hpp"
#include "mric/losses.hpp"
#include "mric/network.hpp"

namespace mric {

struct TrainConfig {
    ResolutionMode mode = ResolutionMode::Low;
    int quality_factor = 10;
    int outer_iterations = 3;
    int steps_per_subproblem = 240;
    int batch_size = 2;
    double initial_lr = 1e-4;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double lambda_content = 1.0;
    double lambda_gradient = 1.0;
    double lambda_ssim = 1.0;
    uint64_t seed = 1;
    int features = 128; // hidden width; reduced only in tests

    void validate() const;
};

// Staged decay: full rate below 3/5 of the total steps, half of it below
// 4/5, a quarter of it afterwards.
double lr_schedule(int64_t step, int64_t total, double initial_lr = 1e-4);

struct TrainLogRow {
    int outer = 0;
    std::string subproblem;
    int64_t step = 0;
    double lr = 0;
    double loss_total = 0;
    double loss_content = 0;
    double loss_gradient = 0;
    double loss_ssim = 0;
};

using LogSink = std::function<void(const TrainLogRow&)>;

// Interpolation bootstrap for the representation: half-size bilinear in
// LOW mode, identity in HIGH mode.
ImageGray bootstrap_representation(const ImageGray& x, ResolutionMode mode);

// Alternating sub-problem training. Each outer iteration trains the
// post-processing network, then the codec surrogate, then the description
// network, and finally regenerates + recompresses the representation for
// the next round.
class Trainer {
  public:
    Trainer(TrainConfig cfg, std::vector<ImageGray> train_patches,
            std::vector<ImageGray> holdout_patches, CodecCache* cache = nullptr,
            LogSink sink = {});

    ModelBundle alternate();

    // Individual sub-problems, exposed for tests and metrics probes. Each
    // runs cfg.steps_per_subproblem optimizer steps.
    void train_ppnn(int outer);
    void train_vcnn(int outer);
    void train_fdnn(int outer);

    // Y = f(X, alpha) for every patch, recompressed; drops cached
    // post-processing targets.
    void refresh_representation();

    const Network& fdnn() const { return fdnn_; }
    const Network& ppnn() const { return ppnn_; }
    const Network& vcnn() const { return vcnn_; }
    const TrainConfig& config() const { return cfg_; }

    // Held-out metrics against the current state.
    double holdout_vcnn_psnr();      // mean PSNR(v(Y), post-processed target)
    double holdout_vcnn_loss();      // content+gradient loss of v(Y) vs target
    double holdout_ppnn_psnr();      // mean PSNR(h(Z), X)
    double holdout_bilinear_psnr();  // mean PSNR(plain upsampled Z, X)

    ModelBundle bundle() const;

  private:
    struct PatchState {
        ImageGray x;                     // ground truth
        ImageGray y;                     // current representation
        ImageGray z;                     // decoded codec round-trip of y
        std::optional<ImageGray> target; // h(Z, gamma), fixed per round
    };

    void compress_all(std::vector<PatchState>& set);
    const ImageGray& target_for(PatchState& p);
    void log(const TrainLogRow& row);
    ImageGray s_of(const ImageGray& y) const; // linear upsampler (or identity)

    TrainConfig cfg_;
    CodecCache own_cache_;
    CodecCache* cache_;
    LogSink sink_;
    std::vector<PatchState> train_, holdout_;
    Network fdnn_, ppnn_, vcnn_;
    AdamOptimizer opt_fdnn_, opt_ppnn_, opt_vcnn_;
    int64_t step_ppnn_ = 0, step_vcnn_ = 0, step_fdnn_ = 0;
    uint64_t total_steps_taken_ = 0;
};

} // namespace mric
