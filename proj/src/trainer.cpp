#include "mric/trainer.hpp"

#include <cmath>

#include "mric/rng.hpp"

namespace mric {

void TrainConfig::validate() const {
    if (quality_factor < 1 || quality_factor > 100) {
        throw ValidationError("quality_factor must be in [1,100]");
    }
    // steps_per_subproblem = 0 is the degenerate no-op run.
    if (outer_iterations <= 0 || steps_per_subproblem < 0 || batch_size <= 0 ||
        features <= 0) {
        throw ValidationError("iteration, batch and feature counts must be positive");
    }
    if (!(initial_lr > 0)) throw ValidationError("initial_lr must be positive");
    if (!(adam_beta1 > 0 && adam_beta1 < 1) ||
        !(adam_beta2 > 0 && adam_beta2 < 1)) {
        throw ValidationError("Adam betas must lie in (0,1)");
    }
    if (lambda_content < 0 || lambda_gradient < 0 || lambda_ssim < 0) {
        throw ValidationError("loss weights must be non-negative");
    }
}

double lr_schedule(int64_t step, int64_t total, double initial_lr) {
    if (step < 0 || total <= 0 || step > total) {
        throw ValidationError("lr_schedule: need 0 <= step <= total");
    }
    if (5 * step < 3 * total) return initial_lr;
    if (5 * step < 4 * total) return initial_lr / 2.0;
    return initial_lr / 4.0;
}

ImageGray bootstrap_representation(const ImageGray& x, ResolutionMode mode) {
    if (mode == ResolutionMode::High) return x;
    return downsample_linear2(x);
}

// ---------------------------------------------------------------------------

namespace {

ImageGray tensor_image(const Tensor& t) { return to_image(t); }

void check_patch(const ImageGray& p, ResolutionMode mode) {
    if (p.h < 16 || p.w < 16) {
        throw ValidationError("patch smaller than 16x16");
    }
    if (mode == ResolutionMode::Low && (p.h % 2 != 0 || p.w % 2 != 0)) {
        throw ValidationError("low-resolution mode requires even patch dimensions");
    }
}

} // namespace

Trainer::Trainer(TrainConfig cfg, std::vector<ImageGray> train_patches,
                 std::vector<ImageGray> holdout_patches, CodecCache* cache,
                 LogSink sink)
    : cfg_(cfg),
      cache_(cache ? cache : &own_cache_),
      sink_(std::move(sink)),
      fdnn_(build_fdnn(cfg.mode, cfg.features)),
      ppnn_(build_ppnn(cfg.mode, cfg.features)),
      vcnn_(build_vcnn(cfg.mode, cfg.features)),
      opt_fdnn_(fdnn_, cfg.adam_beta1, cfg.adam_beta2),
      opt_ppnn_(ppnn_, cfg.adam_beta1, cfg.adam_beta2),
      opt_vcnn_(vcnn_, cfg.adam_beta1, cfg.adam_beta2) {
    cfg_.validate();
    if (train_patches.empty()) throw ValidationError("no training patches");

    Rng rng_f(derive_seed(cfg_.seed, 0x0f));
    Rng rng_p(derive_seed(cfg_.seed, 0x0b));
    Rng rng_v(derive_seed(cfg_.seed, 0x0c));
    fdnn_.init(rng_f, 0.5f); // start the representation at mid-gray
    ppnn_.init(rng_p, 0.5f);
    vcnn_.init(rng_v, 0.5f);

    auto ingest = [&](std::vector<ImageGray>& src, std::vector<PatchState>& dst) {
        dst.reserve(src.size());
        for (ImageGray& img : src) {
            check_patch(img, cfg_.mode);
            PatchState st;
            st.x = std::move(img);
            st.y = bootstrap_representation(st.x, cfg_.mode);
            dst.push_back(std::move(st));
        }
    };
    ingest(train_patches, train_);
    ingest(holdout_patches, holdout_);
    compress_all(train_);
    compress_all(holdout_);
}

void Trainer::compress_all(std::vector<PatchState>& set) {
    const CodecConfig cc{cfg_.quality_factor};
    for (PatchState& p : set) {
        p.z = cache_->roundtrip(quantize8(p.y), cc).decoded;
        p.target.reset();
    }
}

const ImageGray& Trainer::target_for(PatchState& p) {
    if (!p.target) {
        p.target = tensor_image(ppnn_.forward(to_tensor(p.z)));
    }
    return *p.target;
}

void Trainer::log(const TrainLogRow& row) {
    if (!std::isfinite(row.loss_total)) {
        throw TrainError("non-finite loss in " + row.subproblem + " at outer=" +
                         std::to_string(row.outer) + " step=" +
                         std::to_string(row.step) + " lr=" +
                         std::to_string(row.lr));
    }
    if (sink_) sink_(row);
}

ImageGray Trainer::s_of(const ImageGray& y) const {
    return cfg_.mode == ResolutionMode::Low ? upsample_linear(y) : y;
}

void Trainer::train_ppnn(int outer) {
    const int64_t total =
        static_cast<int64_t>(cfg_.outer_iterations) * cfg_.steps_per_subproblem;
    Rng rng(derive_seed(cfg_.seed, 0x100 + static_cast<uint64_t>(outer)));
    NetGrads grads = ppnn_.make_grads();
    for (int s = 0; s < cfg_.steps_per_subproblem; ++s) {
        const double lr = lr_schedule(step_ppnn_, total, cfg_.initial_lr);
        grads.zero();
        double lc = 0, lg = 0;
        for (int bi = 0; bi < cfg_.batch_size; ++bi) {
            PatchState& p = train_[rng.uniform_index(train_.size())];
            Network::Trace trace;
            const Tensor out = ppnn_.forward(to_tensor(p.z), trace);
            const ImageGray rec = tensor_image(out);
            lc += l1_content(rec, p.x);
            lg += l1_gradient(rec, p.x);
            ImageGray g(rec.h, rec.w);
            l1_content_grad(rec, p.x, cfg_.lambda_content, g);
            l1_gradient_grad(rec, p.x, cfg_.lambda_gradient, g);
            ppnn_.backward(trace, to_tensor(g), &grads);
        }
        grads.scale(1.f / static_cast<float>(cfg_.batch_size));
        lc /= cfg_.batch_size;
        lg /= cfg_.batch_size;
        opt_ppnn_.step(ppnn_, grads, lr);
        ++step_ppnn_;
        ++total_steps_taken_;
        log({outer, "ppnn", step_ppnn_, lr,
             cfg_.lambda_content * lc + cfg_.lambda_gradient * lg, lc, lg, 0.0});
    }
}

void Trainer::train_vcnn(int outer) {
    const int64_t total =
        static_cast<int64_t>(cfg_.outer_iterations) * cfg_.steps_per_subproblem;
    Rng rng(derive_seed(cfg_.seed, 0x200 + static_cast<uint64_t>(outer)));
    NetGrads grads = vcnn_.make_grads();
    for (int s = 0; s < cfg_.steps_per_subproblem; ++s) {
        const double lr = lr_schedule(step_vcnn_, total, cfg_.initial_lr);
        grads.zero();
        double lc = 0, lg = 0;
        for (int bi = 0; bi < cfg_.batch_size; ++bi) {
            PatchState& p = train_[rng.uniform_index(train_.size())];
            const ImageGray& target = target_for(p);
            Network::Trace trace;
            const Tensor out = vcnn_.forward(to_tensor(p.y), trace);
            const ImageGray pred = tensor_image(out);
            lc += l1_content(pred, target);
            lg += l1_gradient(pred, target);
            ImageGray g(pred.h, pred.w);
            l1_content_grad(pred, target, cfg_.lambda_content, g);
            l1_gradient_grad(pred, target, cfg_.lambda_gradient, g);
            vcnn_.backward(trace, to_tensor(g), &grads);
        }
        grads.scale(1.f / static_cast<float>(cfg_.batch_size));
        lc /= cfg_.batch_size;
        lg /= cfg_.batch_size;
        opt_vcnn_.step(vcnn_, grads, lr);
        ++step_vcnn_;
        ++total_steps_taken_;
        log({outer, "vcnn", step_vcnn_, lr,
             cfg_.lambda_content * lc + cfg_.lambda_gradient * lg, lc, lg, 0.0});
    }
}

void Trainer::train_fdnn(int outer) {
    const int64_t total =
        static_cast<int64_t>(cfg_.outer_iterations) * cfg_.steps_per_subproblem;
    Rng rng(derive_seed(cfg_.seed, 0x300 + static_cast<uint64_t>(outer)));
    NetGrads grads = fdnn_.make_grads();
    for (int s = 0; s < cfg_.steps_per_subproblem; ++s) {
        const double lr = lr_schedule(step_fdnn_, total, cfg_.initial_lr);
        grads.zero();
        double lc = 0, lg = 0, ls = 0;
        for (int bi = 0; bi < cfg_.batch_size; ++bi) {
            PatchState& p = train_[rng.uniform_index(train_.size())];
            Network::Trace ftrace;
            const Tensor yt = fdnn_.forward(to_tensor(p.x), ftrace);
            const ImageGray y = tensor_image(yt);

            // Surrogate branch: the frozen codec surrogate stands in for
            // codec + post-processing, carrying the data gradient back.
            Network::Trace vtrace;
            const Tensor pred_t = vcnn_.forward(yt, vtrace);
            const ImageGray pred = tensor_image(pred_t);
            lc += l1_content(p.x, pred);
            lg += l1_gradient(p.x, pred);
            ImageGray gpred(pred.h, pred.w);
            l1_content_grad(pred, p.x, cfg_.lambda_content, gpred);
            l1_gradient_grad(pred, p.x, cfg_.lambda_gradient, gpred);
            Tensor dy = vcnn_.backward(vtrace, to_tensor(gpred), nullptr);

            // Structural branch: keep the (upsampled) representation close
            // to the ground truth.
            if (cfg_.lambda_ssim > 0) {
                const ImageGray sy = s_of(y);
                ls += ssim_loss(sy, p.x);
                ImageGray gs(sy.h, sy.w);
                ssim_loss_grad(sy, p.x, SsimParams{}, cfg_.lambda_ssim, gs);
                if (cfg_.mode == ResolutionMode::Low) {
                    ImageGray gy(y.h, y.w);
                    upsample_linear_adjoint(gs, gy);
                    for (std::size_t i = 0; i < gy.size(); ++i) dy.v[i] += gy.v[i];
                } else {
                    for (std::size_t i = 0; i < gs.size(); ++i) dy.v[i] += gs.v[i];
                }
            }
            fdnn_.backward(ftrace, dy, &grads);
        }
        grads.scale(1.f / static_cast<float>(cfg_.batch_size));
        lc /= cfg_.batch_size;
        lg /= cfg_.batch_size;
        ls /= cfg_.batch_size;
        opt_fdnn_.step(fdnn_, grads, lr);
        ++step_fdnn_;
        ++total_steps_taken_;
        log({outer, "fdnn", step_fdnn_, lr,
             cfg_.lambda_content * lc + cfg_.lambda_gradient * lg +
                 cfg_.lambda_ssim * ls,
             lc, lg, ls});
    }
}

void Trainer::refresh_representation() {
    for (auto* set : {&train_, &holdout_}) {
        for (PatchState& p : *set) {
            p.y = tensor_image(fdnn_.forward(to_tensor(p.x)));
        }
        compress_all(*set);
    }
}

ModelBundle Trainer::alternate() {
    // Aborts surface as TrainError; log() stamps the outer-iteration index
    // into the message.
    for (int outer = 1; outer <= cfg_.outer_iterations; ++outer) {
        train_ppnn(outer);
        train_vcnn(outer);
        train_fdnn(outer);
        if (outer < cfg_.outer_iterations) refresh_representation();
    }
    return bundle();
}

ModelBundle Trainer::bundle() const {
    ModelBundle b;
    b.mode = cfg_.mode;
    b.quality_factor = cfg_.quality_factor;
    b.fdnn = fdnn_;
    b.ppnn = ppnn_;
    b.vcnn = vcnn_; // audit only; deployment reads fdnn/ppnn
    b.train_steps = total_steps_taken_;
    return b;
}

double Trainer::holdout_vcnn_psnr() {
    if (holdout_.empty()) throw ValidationError("no holdout patches");
    double sum = 0;
    for (PatchState& p : holdout_) {
        const ImageGray pred = tensor_image(vcnn_.forward(to_tensor(p.y)));
        sum += psnr(pred, target_for(p));
    }
    return sum / static_cast<double>(holdout_.size());
}

double Trainer::holdout_vcnn_loss() {
    if (holdout_.empty()) throw ValidationError("no holdout patches");
    double sum = 0;
    for (PatchState& p : holdout_) {
        const ImageGray pred = tensor_image(vcnn_.forward(to_tensor(p.y)));
        const ImageGray& target = target_for(p);
        sum += cfg_.lambda_content * l1_content(pred, target) +
               cfg_.lambda_gradient * l1_gradient(pred, target);
    }
    return sum / static_cast<double>(holdout_.size());
}

double Trainer::holdout_ppnn_psnr() {
    if (holdout_.empty()) throw ValidationError("no holdout patches");
    double sum = 0;
    for (PatchState& p : holdout_) {
        const ImageGray rec = tensor_image(ppnn_.forward(to_tensor(p.z)));
        sum += psnr(rec, p.x);
    }
    return sum / static_cast<double>(holdout_.size());
}

double Trainer::holdout_bilinear_psnr() {
    if (holdout_.empty()) throw ValidationError("no holdout patches");
    double sum = 0;
    for (PatchState& p : holdout_) {
        const ImageGray rec = s_of(p.z);
        sum += psnr(rec, p.x);
    }
    return sum / static_cast<double>(holdout_.size());
}

} // namespace mric
