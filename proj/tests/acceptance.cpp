// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavy training runs (criteria 6-8) cache their bundles under
// ./acceptance_cache keyed by the run configuration; set MRIC_ACCEPT_FRESH=1
// to retrain from scratch.

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "mric/codec.hpp"
#include "mric/evaluator.hpp"
#include "mric/image_io.hpp"
#include "mric/losses.hpp"
#include "mric/network.hpp"
#include "mric/patchset.hpp"
#include "mric/pipeline.hpp"
#include "mric/rng.hpp"
#include "mric/trainer.hpp"

using namespace mric;
namespace fs = std::filesystem;

namespace {

// ---- desk-run scale -------------------------------------------------------
// Thresholds below are fixed by the criteria; these knobs only size the
// desk experiment so it finishes on a workstation CPU (~40 min per
// quality factor on two cores).
constexpr int kDeskPatch = 64;
constexpr int kDeskTrainPatches = 128;
constexpr int kDeskHoldout = 8;
constexpr int kDeskSteps = 1000;
constexpr int kDeskBatch = 2;
constexpr int kDeskOuter = 3;
constexpr uint64_t kDeskSeed = 2024;

const std::vector<const char*> kTestImages = {"camera.png", "moon.png",
                                              "coins.png", "astronaut.png"};

ImageGray load_test_image(const char* name) {
    return load_image(fs::path(MRIC_DATA_DIR) / "test" / name);
}

ImageGray random_image(Rng& rng, int h, int w) {
    ImageGray img(h, w);
    for (float& v : img.v) v = rng.uniform01f();
    return img;
}

struct Failure {
    std::string detail;
};

using CheckFn = std::function<void(std::ostringstream&)>;

void expect(bool ok, const std::string& what) {
    if (!ok) throw Failure{what};
}

// ---- criterion 1: loss oracles -------------------------------------------

void criterion_loss_oracles(std::ostringstream& note) {
    ImageGray a12(1, 2), b12(1, 2);
    a12.v = {0.2f, 0.8f};
    b12.v = {0.5f, 0.4f};
    expect(std::abs(l1_content(a12, b12) - 0.35) < 1e-6, "content hand value");

    ImageGray zeros(6, 7, 0.f), ones(6, 7, 1.f);
    expect(std::abs(l1_content(zeros, ones) - 1.0) < 1e-6, "content constant");
    expect(std::abs(l1_content(zeros, zeros)) < 1e-6, "content identity");

    ImageGray ga(2, 2), gb(2, 2);
    ga.v = {0.f, 1.f, 0.f, 1.f};
    gb.v = {0.f, 0.f, 0.f, 0.f};
    expect(std::abs(l1_gradient(ga, gb) - 0.5) < 1e-6, "gradient hand value");
    expect(std::abs(l1_gradient(ga, ga)) < 1e-6, "gradient identity");

    Rng rng(1);
    const ImageGray x = random_image(rng, 16, 16);
    expect(std::abs(ssim_loss(x, x)) < 1e-6, "ssim identity");
    const SsimParams p;
    const ImageGray black(12, 12, 0.f), white(12, 12, 1.f);
    const double expected = 1.0 - p.c1 / (1.0 + p.c1);
    expect(std::abs(ssim_loss(black, white) - expected) < 1e-6,
           "ssim constant-vs-constant");
    note << "hand-derived values reproduced within 1e-6";
}

// ---- criterion 2: gradient checks ----------------------------------------

void fd_check(const std::function<double(const ImageGray&)>& loss,
              const ImageGray& grad, const ImageGray& a, int count,
              uint64_t seed, const std::function<bool(int, int)>& skip,
              const char* name) {
    const double h = 1e-4;
    Rng rng(seed);
    int checked = 0, attempts = 0;
    while (checked < count) {
        expect(++attempts < count * 100, std::string(name) + ": no usable coordinates");
        const int y = static_cast<int>(rng.uniform_index(a.h));
        const int x = static_cast<int>(rng.uniform_index(a.w));
        if (skip && skip(y, x)) continue;
        ImageGray ap = a, am = a;
        ap.at(y, x) += static_cast<float>(h);
        am.at(y, x) -= static_cast<float>(h);
        const double fd = (loss(ap) - loss(am)) / (2 * h);
        const double an = grad.at(y, x);
        const double denom = std::max({std::abs(fd), std::abs(an), 1e-8});
        expect(std::abs(fd - an) / denom <= 1e-3,
               std::string(name) + " mismatch at (" + std::to_string(y) + "," +
                   std::to_string(x) + ")");
        ++checked;
    }
}

void criterion_gradient_checks(std::ostringstream& note) {
    Rng rng(2);
    const ImageGray a = random_image(rng, 16, 16);
    const ImageGray b = random_image(rng, 16, 16);
    const double h = 1e-4;

    {
        ImageGray g(16, 16);
        l1_content_grad(a, b, 1.0, g);
        fd_check([&](const ImageGray& u) { return l1_content(u, b); }, g, a, 100,
                 21,
                 [&](int y, int x) {
                     return std::abs(a.at(y, x) - b.at(y, x)) < 4 * h;
                 },
                 "l1_content");
    }
    {
        ImageGray g(16, 16);
        l1_gradient_grad(a, b, 1.0, g);
        auto skip = [&](int y, int x) {
            for (const int dy : {-1, 0}) {
                for (const int dx : {-1, 0}) {
                    const int yy = y + dy, xx = x + dx;
                    if (yy < 0 || xx < 0) continue;
                    const int yn = std::min(yy + 1, a.h - 1);
                    const int xn = std::min(xx + 1, a.w - 1);
                    const double dh = (a.at(yy, xn) - a.at(yy, xx)) -
                                      (b.at(yy, xn) - b.at(yy, xx));
                    const double dv = (a.at(yn, xx) - a.at(yy, xx)) -
                                      (b.at(yn, xx) - b.at(yy, xx));
                    if (std::abs(dh) < 8 * h || std::abs(dv) < 8 * h) return true;
                }
            }
            return false;
        };
        fd_check([&](const ImageGray& u) { return l1_gradient(u, b); }, g, a, 100,
                 22, skip, "l1_gradient");
    }
    {
        ImageGray g(16, 16);
        ssim_loss_grad(a, b, SsimParams{}, 1.0, g);
        fd_check([&](const ImageGray& u) { return ssim_loss(u, b); }, g, a, 100,
                 23, nullptr, "ssim");
    }
    note << "central differences (step 1e-4) within relative 1e-3 at 100 coordinates each";
}

// ---- criterion 3: shape contracts ----------------------------------------

void criterion_shape_contracts(std::ostringstream& note) {
    Rng rng(3);
    std::vector<int> sizes = {32, 512};
    for (int i = 0; i < 4; ++i) {
        sizes.push_back(32 + 2 * static_cast<int>(rng.uniform_index(241)));
    }
    int combos = 0;
    for (const int h : sizes) {
        const int w = sizes[rng.uniform_index(sizes.size())];
        for (const ResolutionMode mode :
             {ResolutionMode::Low, ResolutionMode::High}) {
            Network fdnn(build_fdnn(mode));
            Network ppnn(build_ppnn(mode));
            Network vcnn(build_vcnn(mode));
            Rng ir(derive_seed(3, static_cast<uint64_t>(h * 1000 + w)));
            fdnn.init(ir, 0.5f);
            ppnn.init(ir);
            vcnn.init(ir);

            Tensor x(1, h, w);
            for (float& v : x.v) v = ir.uniform01f();
            const Tensor y = fdnn.forward(x);
            const int eh = mode == ResolutionMode::Low ? h / 2 : h;
            const int ew = mode == ResolutionMode::Low ? w / 2 : w;
            expect(y.h == eh && y.w == ew, "description net shape");
            const Tensor rec = ppnn.forward(y);
            expect(rec.h == h && rec.w == w, "composition shape");
            const Tensor sur = vcnn.forward(y);
            expect(sur.h == h && sur.w == w, "surrogate shape");
            ++combos;
        }
    }
    note << combos << " (size, mode) combinations from 32 to 512 hold the contracts";
}

// ---- criterion 4: learning-rate schedule ----------------------------------

void criterion_schedule(std::ostringstream& note) {
    const int64_t total = 100000;
    expect(lr_schedule(0, total) == 1e-4, "initial plateau");
    expect(lr_schedule(59999, total) == 1e-4, "below 3/5");
    expect(lr_schedule(60000, total) == 5e-5, "at 3/5");
    expect(lr_schedule(79999, total) == 5e-5, "below 4/5");
    expect(lr_schedule(80000, total) == 2.5e-5, "at 4/5");
    expect(lr_schedule(total, total) == 2.5e-5, "tail");
    double prev = 1e-4;
    int changes = 0;
    for (int64_t s = 0; s <= total; s += 37) {
        const double lr = lr_schedule(s, total);
        expect(lr <= prev, "non-increasing");
        if (lr != prev) ++changes;
        prev = lr;
    }
    expect(changes == 2, "exactly three plateaus");
    note << "plateaus {1e-4, 5e-5, 2.5e-5} with boundaries at 3/5 and 4/5";
}

// ---- criterion 5: codec bridge --------------------------------------------

void criterion_codec(std::ostringstream& note) {
    Rng rng(5);
    const ImageGray img = random_image(rng, 48, 64);
    const Image8 q = quantize8(img);
    const std::vector<uint8_t> p1 = jpeg_encode(q, 25);
    const std::vector<uint8_t> p2 = jpeg_encode(q, 25);
    expect(p1 == p2, "bit-exact payload");
    const RoundTripResult r1 = jpeg_roundtrip(q, CodecConfig{25});
    const RoundTripResult r2 = jpeg_roundtrip(q, CodecConfig{25});
    expect(r1.decoded.v == r2.decoded.v, "pixel-exact decode");

    expect(bpp(3200, 160, 160) == 1.0, "bpp exact arithmetic");
    expect(bpp(1600, 160, 160) == 0.5, "half-resolution accounting");
    expect(bpp(0, 64, 64) == 0.0, "zero payload");

    std::vector<Image8> images;
    for (const char* name : kTestImages) {
        images.push_back(quantize8(load_test_image(name)));
    }
    double prev = -1;
    for (const int qf : {5, 10, 20, 30, 40}) {
        double total = 0;
        for (const Image8& im : images) {
            total += static_cast<double>(jpeg_encode(im, qf).size());
        }
        const double mean = total / static_cast<double>(images.size());
        expect(mean >= prev, "mean payload non-decreasing at qf " + std::to_string(qf));
        prev = mean;
    }
    note << "deterministic round trip, exact bpp, monotone mean payload over {5,10,20,30,40}";
}

// ---- criteria 6-8: desk-scale training ------------------------------------

struct DeskMetrics {
    double vcnn_psnr_init = 0, vcnn_psnr_trained = 0;
    double vcnn_loss_init = 0, vcnn_loss_trained = 0;
    double ppnn_psnr = 0, bilinear_psnr = 0;
};

std::string desk_tag(int qf) {
    std::ostringstream tag;
    tag << "p" << kDeskPatch << "_n" << kDeskTrainPatches << "_h" << kDeskHoldout
        << "_s" << kDeskSteps << "_b" << kDeskBatch << "_o" << kDeskOuter
        << "_seed" << kDeskSeed << "_qf" << qf;
    return tag.str();
}

std::vector<ImageGray> load_train_sources() {
    std::vector<ImageGray> out;
    for (const auto& entry :
         fs::directory_iterator(fs::path(MRIC_DATA_DIR) / "train")) {
        if (entry.path().extension() == ".png") {
            out.push_back(load_image(entry.path()));
        }
    }
    expect(!out.empty(), "training sources present");
    return out;
}

// Trains one bundle at the desk scale, instrumenting the first outer
// iteration for the surrogate-fidelity and post-processing-gain criteria.
void desk_run(int qf, ModelBundle& bundle, DeskMetrics& metrics) {
    TrainConfig cfg;
    cfg.mode = ResolutionMode::Low;
    cfg.quality_factor = qf;
    cfg.outer_iterations = kDeskOuter;
    cfg.steps_per_subproblem = kDeskSteps;
    cfg.batch_size = kDeskBatch;
    cfg.seed = kDeskSeed;

    const auto sources = load_train_sources();
    PatchSet set = build_patchset(sources, kDeskPatch,
                                  kDeskTrainPatches + kDeskHoldout, cfg.seed);
    std::vector<ImageGray> train(set.patches.begin(),
                                 set.patches.end() - kDeskHoldout);
    std::vector<ImageGray> holdout(set.patches.end() - kDeskHoldout,
                                   set.patches.end());

    CodecCache cache;
    Trainer tr(cfg, std::move(train), std::move(holdout), &cache);

    tr.train_ppnn(1);
    metrics.vcnn_psnr_init = tr.holdout_vcnn_psnr();
    metrics.vcnn_loss_init = tr.holdout_vcnn_loss();
    tr.train_vcnn(1);
    metrics.vcnn_psnr_trained = tr.holdout_vcnn_psnr();
    metrics.vcnn_loss_trained = tr.holdout_vcnn_loss();
    tr.train_fdnn(1);
    for (int outer = 2; outer <= cfg.outer_iterations; ++outer) {
        tr.refresh_representation();
        tr.train_ppnn(outer);
        tr.train_vcnn(outer);
        tr.train_fdnn(outer);
    }
    // Post-processing gain is judged on the fully trained networks, over
    // the same decoded representations both reconstruction paths consume.
    metrics.ppnn_psnr = tr.holdout_ppnn_psnr();
    metrics.bilinear_psnr = tr.holdout_bilinear_psnr();
    bundle = tr.bundle();
}

fs::path cache_dir() { return fs::path("acceptance_cache"); }

bool load_desk(int qf, ModelBundle& bundle, DeskMetrics& m) {
    if (std::getenv("MRIC_ACCEPT_FRESH")) return false;
    const fs::path ck = cache_dir() / ("desk_" + desk_tag(qf) + ".mrck");
    const fs::path mt = cache_dir() / ("desk_" + desk_tag(qf) + ".metrics");
    if (!fs::exists(ck) || !fs::exists(mt)) return false;
    try {
        bundle = load_checkpoint(ck);
        std::ifstream in(mt);
        in >> m.vcnn_psnr_init >> m.vcnn_psnr_trained >> m.vcnn_loss_init >>
            m.vcnn_loss_trained >> m.ppnn_psnr >> m.bilinear_psnr;
        return static_cast<bool>(in);
    } catch (const std::exception&) {
        return false;
    }
}

void store_desk(int qf, const ModelBundle& bundle, const DeskMetrics& m) {
    fs::create_directories(cache_dir());
    save_checkpoint(bundle, cache_dir() / ("desk_" + desk_tag(qf) + ".mrck"));
    std::ofstream out(cache_dir() / ("desk_" + desk_tag(qf) + ".metrics"));
    out.precision(17);
    out << m.vcnn_psnr_init << ' ' << m.vcnn_psnr_trained << ' '
        << m.vcnn_loss_init << ' ' << m.vcnn_loss_trained << ' ' << m.ppnn_psnr
        << ' ' << m.bilinear_psnr << '\n';
}

std::map<int, std::pair<ModelBundle, DeskMetrics>>& desk_results() {
    static std::map<int, std::pair<ModelBundle, DeskMetrics>> results;
    return results;
}

const std::pair<ModelBundle, DeskMetrics>& desk_result(int qf) {
    auto& results = desk_results();
    auto it = results.find(qf);
    if (it != results.end()) return it->second;
    ModelBundle bundle;
    DeskMetrics metrics;
    if (!load_desk(qf, bundle, metrics)) {
        std::cerr << "  [desk run] training low/qf" << qf << " ("
                  << desk_tag(qf) << ")...\n";
        desk_run(qf, bundle, metrics);
        store_desk(qf, bundle, metrics);
    }
    return results.emplace(qf, std::make_pair(std::move(bundle), metrics))
        .first->second;
}

void criterion_surrogate_fidelity(std::ostringstream& note) {
    const auto& [bundle, m] = desk_result(10);
    (void)bundle;
    expect(m.vcnn_psnr_trained - m.vcnn_psnr_init >= 3.0,
           "surrogate gain " + std::to_string(m.vcnn_psnr_trained - m.vcnn_psnr_init) +
               " dB < 3 dB");
    expect(m.vcnn_loss_trained <= 0.5 * m.vcnn_loss_init,
           "validation loss fell only to " +
               std::to_string(m.vcnn_loss_trained / m.vcnn_loss_init) +
               " of step 0");
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "surrogate PSNR %.2f -> %.2f dB (gain %.2f), holdout loss %.4f -> %.4f",
                  m.vcnn_psnr_init, m.vcnn_psnr_trained,
                  m.vcnn_psnr_trained - m.vcnn_psnr_init, m.vcnn_loss_init,
                  m.vcnn_loss_trained);
    note << buf;
}

void criterion_postprocessing_gain(std::ostringstream& note) {
    const auto& [bundle, m] = desk_result(10);
    (void)bundle;
    expect(m.ppnn_psnr > m.bilinear_psnr,
           "post-processing " + std::to_string(m.ppnn_psnr) +
               " dB does not beat plain upsampling " +
               std::to_string(m.bilinear_psnr) + " dB");
    char buf[120];
    std::snprintf(buf, sizeof(buf), "post-processed %.2f dB vs bilinear %.2f dB",
                  m.ppnn_psnr, m.bilinear_psnr);
    note << buf;
}

void criterion_rd_dominance(std::ostringstream& note) {
    const std::vector<int> baseline_sweep = {2, 3, 4, 5, 10, 15, 20, 25, 30};
    std::ostringstream detail;
    std::vector<RDPoint> all_points;
    for (const int qf : {5, 10, 20}) {
        const auto& [bundle, metrics] = desk_result(qf);
        (void)metrics;
        int wins = 0;
        for (const char* name : kTestImages) {
            const ImageGray x = load_test_image(name);
            std::vector<RDPoint> curve;
            for (const int bqf : baseline_sweep) {
                curve.push_back(eval_jpeg_baseline(x, bqf, name));
            }
            const RDPoint pt = eval_pipeline(bundle, x, name);
            const double base = interpolate_psnr(curve, pt.bpp);
            const bool win = pt.psnr_db > base;
            wins += win ? 1 : 0;
            char buf[160];
            std::snprintf(buf, sizeof(buf), "\n    qf%02d %-10s %.4f bpp: %.2f dB vs jpeg %.2f dB %s",
                          qf, name, pt.bpp, pt.psnr_db, base, win ? "(win)" : "(loss)");
            detail << buf;
            all_points.push_back(pt);
            for (const RDPoint& c : curve) all_points.push_back(c);
        }
        expect(wins >= 3, "qf " + std::to_string(qf) + ": pipeline above-left on only " +
                              std::to_string(wins) + "/4 test images");
    }
    emit_report(all_points, cache_dir() / "rd_report");
    note << "pipeline above-left of the JPEG curve on >= 3/4 images per qf" << detail.str();
}

// ---- criterion 9: isolation & determinism ----------------------------------

std::vector<ImageGray> tiny_patches(int count, int n, uint64_t seed) {
    Rng rng(seed);
    std::vector<ImageGray> out;
    for (int i = 0; i < count; ++i) out.push_back(random_image(rng, n, n));
    return out;
}

void criterion_isolation_determinism(std::ostringstream& note) {
    TrainConfig cfg;
    cfg.mode = ResolutionMode::Low;
    cfg.quality_factor = 10;
    cfg.outer_iterations = 1;
    cfg.steps_per_subproblem = 10;
    cfg.batch_size = 1;
    cfg.features = 4;
    cfg.seed = 31;

    auto patches = tiny_patches(6, 32, 77);
    {
        Trainer tr(cfg, patches, {});
        const uint64_t a0 = tr.fdnn().param_checksum();
        const uint64_t t0 = tr.vcnn().param_checksum();
        tr.train_ppnn(1);
        expect(tr.fdnn().param_checksum() == a0 && tr.vcnn().param_checksum() == t0,
               "ppnn sub-problem leaked into other parameter sets");
        const uint64_t g1 = tr.ppnn().param_checksum();
        tr.train_vcnn(1);
        expect(tr.fdnn().param_checksum() == a0 && tr.ppnn().param_checksum() == g1,
               "vcnn sub-problem leaked into other parameter sets");
        const uint64_t t1 = tr.vcnn().param_checksum();
        tr.train_fdnn(1);
        expect(tr.ppnn().param_checksum() == g1 && tr.vcnn().param_checksum() == t1,
               "fdnn sub-problem leaked into other parameter sets");
    }

    auto losses_of_run = [&]() {
        std::vector<double> losses;
        Trainer tr(cfg, patches, {},
                   nullptr, [&](const TrainLogRow& r) { losses.push_back(r.loss_total); });
        tr.train_ppnn(1);
        return losses;
    };
    const auto l1 = losses_of_run();
    const auto l2 = losses_of_run();
    expect(l1.size() == 10 && l2.size() == 10, "log rows");
    const double rel = std::abs(l1[9] - l2[9]) / std::max(std::abs(l1[9]), 1e-12);
    expect(rel <= 1e-5, "losses at step 10 differ by relative " + std::to_string(rel));
    note << "sub-problems isolated (checksums); seeded rerun loss at step 10 agrees (rel "
         << rel << ")";
}

// ---- criterion 10: artifact format ----------------------------------------

void criterion_artifact_format(std::ostringstream& note) {
    Rng rng(10);
    ModelBundle bundle;
    bundle.mode = ResolutionMode::Low;
    bundle.quality_factor = 10;
    bundle.fdnn = Network(build_fdnn(bundle.mode, 4));
    bundle.ppnn = Network(build_ppnn(bundle.mode, 4));
    bundle.vcnn = Network(build_vcnn(bundle.mode, 4));
    Rng ir(11);
    bundle.fdnn.init(ir, 0.5f);
    bundle.ppnn.init(ir, 0.5f);
    bundle.vcnn.init(ir, 0.5f);

    const ImageGray x = random_image(rng, 48, 32);
    const std::vector<uint8_t> a1 = compress_image(bundle, x);
    const std::vector<uint8_t> a2 = compress_image(bundle, x);
    expect(a1 == a2, "compression not deterministic");
    const ImageGray rec = decompress_artifact(bundle, a1);
    expect(rec.h == 48 && rec.w == 32, "round trip dimensions");

    int graceful = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<uint8_t> bad = a1;
        const int flips = 1 + static_cast<int>(rng.uniform_index(4));
        for (int f = 0; f < flips; ++f) {
            bad[rng.uniform_index(kArtifactHeaderSize)] =
                static_cast<uint8_t>(rng.uniform_index(256));
        }
        try {
            (void)decompress_artifact(bundle, bad);
        } catch (const FormatError&) {
        } catch (const ValidationError&) {
        }
        ++graceful;
    }
    expect(graceful == 10000, "fuzz crash");
    note << "round trip preserves dimensions; 10000 header mutations handled gracefully";
}

struct Criterion {
    int id;
    const char* name;
    CheckFn fn;
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[i + 1]);
        }
    }

    const std::vector<Criterion> criteria = {
        {1, "loss oracles", criterion_loss_oracles},
        {2, "gradient checks", criterion_gradient_checks},
        {3, "shape contracts", criterion_shape_contracts},
        {4, "learning-rate schedule", criterion_schedule},
        {5, "codec bridge", criterion_codec},
        {6, "surrogate fidelity (desk scale)", criterion_surrogate_fidelity},
        {7, "post-processing gain (desk scale)", criterion_postprocessing_gain},
        {8, "end-to-end rate-distortion (desk scale)", criterion_rd_dominance},
        {9, "parameter isolation & determinism", criterion_isolation_determinism},
        {10, "artifact format", criterion_artifact_format},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (only != 0 && c.id != only) continue;
        std::ostringstream note;
        try {
            c.fn(note);
            std::cout << "[PASS] criterion " << c.id << ": " << c.name << " — "
                      << note.str() << "\n";
        } catch (const Failure& f) {
            ++failures;
            std::cout << "[FAIL] criterion " << c.id << ": " << c.name << " — "
                      << f.detail << "\n";
        } catch (const std::exception& e) {
            ++failures;
            std::cout << "[FAIL] criterion " << c.id << ": " << c.name
                      << " — unexpected error: " << e.what() << "\n";
        }
        std::cout.flush();
    }
    return failures == 0 ? 0 : 1;
}
