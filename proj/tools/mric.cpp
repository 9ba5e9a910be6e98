#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>

#include "mric/codec.hpp"
#include "mric/config.hpp"
#include "mric/evaluator.hpp"
#include "mric/image_io.hpp"
#include "mric/patchset.hpp"
#include "mric/pipeline.hpp"
#include "mric/trainer.hpp"

namespace fs = std::filesystem;
using namespace mric;

namespace {

std::vector<uint8_t> read_binary(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
}

void write_binary(const fs::path& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<fs::path> list_images(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw ValidationError("not a directory: " + dir.string());
    }
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto ext = entry.path().extension().string();
        if (ext == ".png" || ext == ".bmp" || ext == ".jpg" || ext == ".jpeg") {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    if (out.empty()) throw ValidationError("no images in " + dir.string());
    return out;
}

const std::set<std::string> kTrainKeys = {
    "mode",           "quality_factor",       "dataset_dir",
    "output_dir",     "outer_iterations",     "steps_per_subproblem",
    "batch_size",     "initial_lr",           "adam_beta1",
    "adam_beta2",     "lambda_content",       "lambda_gradient",
    "lambda_ssim",    "seed",                 "features",
    "patch_size",     "patch_count",          "holdout_count",
    "cache_dir",
};

int cmd_train(const fs::path& config_path, int64_t seed_override) {
    const auto cfg_map = parse_config_file(config_path);
    for (const auto& [key, _] : cfg_map) {
        if (!kTrainKeys.count(key)) {
            throw ValidationError("unknown config key: " + key);
        }
    }

    TrainConfig cfg;
    cfg.mode = parse_mode(require_string(cfg_map, "mode"));
    cfg.quality_factor = static_cast<int>(require_int(cfg_map, "quality_factor"));
    cfg.outer_iterations = static_cast<int>(get_int(cfg_map, "outer_iterations", cfg.outer_iterations));
    cfg.steps_per_subproblem = static_cast<int>(get_int(cfg_map, "steps_per_subproblem", cfg.steps_per_subproblem));
    cfg.batch_size = static_cast<int>(get_int(cfg_map, "batch_size", cfg.batch_size));
    cfg.initial_lr = get_double(cfg_map, "initial_lr", cfg.initial_lr);
    cfg.adam_beta1 = get_double(cfg_map, "adam_beta1", cfg.adam_beta1);
    cfg.adam_beta2 = get_double(cfg_map, "adam_beta2", cfg.adam_beta2);
    cfg.lambda_content = get_double(cfg_map, "lambda_content", cfg.lambda_content);
    cfg.lambda_gradient = get_double(cfg_map, "lambda_gradient", cfg.lambda_gradient);
    cfg.lambda_ssim = get_double(cfg_map, "lambda_ssim", cfg.lambda_ssim);
    cfg.seed = static_cast<uint64_t>(get_int(cfg_map, "seed", 1));
    cfg.features = static_cast<int>(get_int(cfg_map, "features", cfg.features));
    if (seed_override >= 0) cfg.seed = static_cast<uint64_t>(seed_override);
    cfg.validate();

    const fs::path dataset_dir = require_string(cfg_map, "dataset_dir");
    const fs::path output_dir = require_string(cfg_map, "output_dir");
    const int patch_size = static_cast<int>(get_int(cfg_map, "patch_size", 160));
    const int patch_count = static_cast<int>(get_int(cfg_map, "patch_count", 256));
    const int holdout_count = static_cast<int>(get_int(cfg_map, "holdout_count", 16));
    if (patch_count <= 0 || holdout_count < 0) {
        throw ValidationError("patch_count must be positive, holdout_count non-negative");
    }

    std::vector<ImageGray> sources;
    for (const fs::path& p : list_images(dataset_dir)) {
        sources.push_back(load_image(p));
    }
    PatchSet set = build_patchset(sources, patch_size,
                                  patch_count + holdout_count, cfg.seed);
    std::vector<ImageGray> train_patches(set.patches.begin(),
                                         set.patches.end() - holdout_count);
    std::vector<ImageGray> holdout_patches(set.patches.end() - holdout_count,
                                           set.patches.end());

    fs::create_directories(output_dir);
    std::ofstream log(output_dir / "train_log.csv", std::ios::trunc);
    if (!log) throw IoError("cannot write training log");
    LogSink sink = [&log](const TrainLogRow& r) {
        log << r.outer << ',' << r.subproblem << ',' << r.step << ',' << r.lr
            << ',' << r.loss_total << ',' << r.loss_content << ','
            << r.loss_gradient << ',' << r.loss_ssim << '\n';
    };

    CodecCache cache = cfg_map.count("cache_dir")
                           ? CodecCache(get_string(cfg_map, "cache_dir", ""))
                           : CodecCache::from_env();
    Trainer trainer(cfg, std::move(train_patches), std::move(holdout_patches),
                    &cache, sink);
    const ModelBundle bundle = trainer.alternate();

    char name[64];
    std::snprintf(name, sizeof(name), "bundle_%s_qf%02d.mrck",
                  to_string(bundle.mode), bundle.quality_factor);
    const fs::path ckpt = output_dir / name;
    save_checkpoint(bundle, ckpt);
    std::cout << "checkpoint: " << ckpt.string() << "\n";
    return 0;
}

int cmd_compress(const fs::path& bundle_path, const fs::path& in_path,
                 const fs::path& out_path) {
    const ModelBundle bundle = load_checkpoint(bundle_path);
    const ImageGray x = load_image(in_path);
    double rate = 0;
    const std::vector<uint8_t> artifact = compress_image(bundle, x, &rate);
    write_binary(out_path, artifact);
    std::cout << "bpp: " << rate << "\n";
    return 0;
}

int cmd_decompress(const fs::path& bundle_path, const fs::path& in_path,
                   const fs::path& out_path) {
    const ModelBundle bundle = load_checkpoint(bundle_path);
    const std::vector<uint8_t> bytes = read_binary(in_path);
    const ImageGray rec = decompress_artifact(bundle, bytes);
    save_png_gray8(out_path, quantize8(rec));
    return 0;
}

int cmd_eval(const std::vector<fs::path>& bundle_paths, const fs::path& image_dir,
             std::vector<int> qfs, const fs::path& out_dir) {
    std::vector<ModelBundle> bundles;
    for (const fs::path& p : bundle_paths) bundles.push_back(load_checkpoint(p));
    if (qfs.empty()) {
        for (const ModelBundle& b : bundles) qfs.push_back(b.quality_factor);
    }
    std::vector<RDPoint> points;
    for (const fs::path& path : list_images(image_dir)) {
        const ImageGray x = load_image(path);
        const std::string id = path.stem().string();
        for (const ModelBundle& b : bundles) {
            points.push_back(eval_pipeline(b, x, id));
        }
        for (const int qf : qfs) {
            points.push_back(eval_jpeg_baseline(x, qf, id));
        }
    }
    emit_report(points, out_dir);
    std::cout << "report: " << (out_dir / "report.csv").string() << "\n";
    return 0;
}

int cmd_report(const fs::path& csv_path, const fs::path& out_dir) {
    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot open CSV: " + csv_path.string());
    std::vector<RDPoint> points;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        RDPoint p;
        char method[64], image[128];
        if (std::sscanf(line.c_str(), "%63[^,],%127[^,],%d,%lf,%lf,%lf", method,
                        image, &p.qf, &p.bpp, &p.psnr_db, &p.ssim) != 6) {
            throw FormatError("bad CSV row: " + line);
        }
        p.method = method;
        p.image = image;
        points.push_back(p);
    }
    emit_report(points, out_dir);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixed-resolution learned image compression"};
    app.require_subcommand(1);

    std::string config, bundle, in_path, out_path;
    std::vector<std::string> bundles;
    std::vector<int> qfs;
    int64_t seed = -1;

    CLI::App* train = app.add_subcommand("train", "train a model bundle from a config file");
    train->add_option("--config", config, "key = value config file")->required();
    train->add_option("--seed", seed, "override the config seed");

    CLI::App* compress = app.add_subcommand("compress", "compress one image into an artifact");
    compress->add_option("--bundle", bundle, "checkpoint file")->required();
    compress->add_option("--in", in_path, "input image")->required();
    compress->add_option("--out", out_path, "output artifact")->required();

    CLI::App* decompress = app.add_subcommand("decompress", "reconstruct an image from an artifact");
    decompress->add_option("--bundle", bundle, "checkpoint file")->required();
    decompress->add_option("--in", in_path, "input artifact")->required();
    decompress->add_option("--out", out_path, "output PNG")->required();

    CLI::App* eval = app.add_subcommand("eval", "rate-distortion report over an image directory");
    eval->add_option("--bundle", bundles, "checkpoint file(s)")->required();
    eval->add_option("--in", in_path, "image directory")->required();
    eval->add_option("--qf", qfs, "baseline quality factors");
    eval->add_option("--out", out_path, "output directory")->required();

    CLI::App* report = app.add_subcommand("report", "re-render CSV + plots from an existing report");
    report->add_option("--in", in_path, "report CSV")->required();
    report->add_option("--out", out_path, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) return cmd_train(config, seed);
        if (compress->parsed()) return cmd_compress(bundle, in_path, out_path);
        if (decompress->parsed()) return cmd_decompress(bundle, in_path, out_path);
        if (eval->parsed()) {
            std::vector<fs::path> paths(bundles.begin(), bundles.end());
            return cmd_eval(paths, in_path, qfs, out_path);
        }
        if (report->parsed()) return cmd_report(in_path, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
