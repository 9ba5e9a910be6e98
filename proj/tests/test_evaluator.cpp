#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mric/evaluator.hpp"
#include "mric/codec.hpp"
#include "mric/image_io.hpp"
#include "test_util.hpp"

using namespace mric;
namespace fs = std::filesystem;

namespace {

ImageGray load_test_image(const char* name) {
    return load_image(fs::path(MRIC_DATA_DIR) / "test" / name);
}

} // namespace

TEST_CASE("near-lossless degenerate pipeline scores high fidelity") {
    const ModelBundle bundle = testutil::passthrough_bundle(ResolutionMode::High, 100);
    const ImageGray x = load_test_image("camera.png");
    const RDPoint pt = eval_pipeline(bundle, x, "camera");
    CHECK(pt.psnr_db >= 40.0);
    CHECK(pt.bpp > 0.0);
    CHECK(pt.method == "pipeline");
}

TEST_CASE("half-resolution representation spends fewer bits at equal quality") {
    const ModelBundle low = testutil::passthrough_bundle(ResolutionMode::Low, 10);
    const ModelBundle high = testutil::passthrough_bundle(ResolutionMode::High, 10);
    const ImageGray x = load_test_image("camera.png");
    const RDPoint p_low = eval_pipeline(low, x, "camera");
    const RDPoint p_high = eval_pipeline(high, x, "camera");
    CHECK(p_low.bpp < p_high.bpp);
}

TEST_CASE("reconstruction matches the source dimensions") {
    Rng rng(1);
    const ModelBundle low = testutil::passthrough_bundle(ResolutionMode::Low, 20);
    const ImageGray x = testutil::random_image(rng, 64, 48);
    const RDPoint pt = eval_pipeline(low, x, "synthetic");
    CHECK(pt.qf == 20);
    CHECK(pt.bpp > 0.0);
    CHECK_THROWS_AS(eval_pipeline(low, testutil::random_image(rng, 63, 48), "odd"),
                    ValidationError);
}

TEST_CASE("baseline sweep produces one point per quality factor") {
    const ImageGray x = load_test_image("coins.png");
    const std::vector<int> sweep = {2, 3, 4, 5, 10, 15, 20, 25, 30};
    std::vector<RDPoint> points;
    for (const int qf : sweep) {
        points.push_back(eval_jpeg_baseline(x, qf, "coins"));
    }
    CHECK(points.size() == 9);
    for (const RDPoint& p : points) {
        const std::vector<uint8_t> payload = jpeg_encode(quantize8(x), p.qf);
        CHECK(p.bpp == doctest::Approx(8.0 * payload.size() / (x.h * x.w)));
    }
    // PSNR rises with quality on each test image
    CHECK(points.back().psnr_db > points[3].psnr_db); // qf30 > qf5
}

TEST_CASE("baseline is monotone over the documented sweep per image") {
    for (const char* name : {"camera.png", "moon.png", "coins.png", "astronaut.png"}) {
        const ImageGray x = load_test_image(name);
        double prev = -1;
        for (const int qf : {5, 10, 20, 30, 40}) {
            const RDPoint p = eval_jpeg_baseline(x, qf, name);
            CHECK(p.psnr_db >= prev);
            prev = p.psnr_db;
        }
    }
}

TEST_CASE("report CSV layout, sorting and determinism") {
    std::vector<RDPoint> points;
    Rng rng(2);
    const ImageGray x = testutil::random_image(rng, 32, 32);
    const ModelBundle low = testutil::passthrough_bundle(ResolutionMode::Low, 10);
    for (const int qf : {20, 5, 10}) {
        points.push_back(eval_jpeg_baseline(x, qf, "synthetic"));
    }
    ModelBundle b = low;
    for (const int qf : {20, 5, 10}) {
        b.quality_factor = qf;
        points.push_back(eval_pipeline(b, x, "synthetic"));
    }

    const std::string csv = render_csv(points);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "method,image,qf,bpp,psnr_db,ssim");
    std::vector<std::string> rows;
    while (std::getline(in, line)) {
        if (!line.empty()) rows.push_back(line);
    }
    CHECK(rows.size() == 6);
    // sorted by (method, image, qf): jpeg rows first, ascending qf
    CHECK(rows[0].rfind("jpeg,synthetic,5,", 0) == 0);
    CHECK(rows[1].rfind("jpeg,synthetic,10,", 0) == 0);
    CHECK(rows[2].rfind("jpeg,synthetic,20,", 0) == 0);
    CHECK(rows[3].rfind("pipeline,synthetic,5,", 0) == 0);

    CHECK(render_csv(points) == csv);

    const fs::path dir = fs::temp_directory_path() / "mric_test_report";
    fs::remove_all(dir);
    emit_report(points, dir);
    CHECK(fs::exists(dir / "report.csv"));
    CHECK(fs::exists(dir / "rd_synthetic.svg"));
    std::ifstream csv_file(dir / "report.csv");
    std::stringstream buf;
    buf << csv_file.rdbuf();
    CHECK(buf.str() == csv);
    CHECK_THROWS_AS(emit_report({}, dir), ValidationError);
    fs::remove_all(dir);
}

TEST_CASE("stored PSNR reproduces exactly from the evaluated pair") {
    // Full-precision formatting must round-trip the double bit for bit.
    Rng rng(3);
    const ImageGray x = testutil::random_image(rng, 32, 32);
    const RDPoint p = eval_jpeg_baseline(x, 15, "synthetic");
    const std::string csv = render_csv({p});
    const auto line = csv.substr(csv.find('\n') + 1);
    std::istringstream row(line);
    std::string field;
    for (int i = 0; i < 4; ++i) std::getline(row, field, ',');
    CHECK(std::stod(field) == p.bpp);
    std::getline(row, field, ',');
    CHECK(std::stod(field) == p.psnr_db);

    // deterministic re-evaluation gives the identical value
    const RDPoint again = eval_jpeg_baseline(x, 15, "synthetic");
    CHECK(again.psnr_db == p.psnr_db);
    CHECK(again.ssim == p.ssim);
}

TEST_CASE("baseline curve interpolation") {
    std::vector<RDPoint> curve;
    for (const auto& [b, p] : {std::pair{0.2, 25.0}, {0.4, 30.0}, {0.8, 35.0}}) {
        RDPoint pt;
        pt.bpp = b;
        pt.psnr_db = p;
        curve.push_back(pt);
    }
    CHECK(interpolate_psnr(curve, 0.3) == doctest::Approx(27.5));
    CHECK(interpolate_psnr(curve, 0.6) == doctest::Approx(32.5));
    CHECK(interpolate_psnr(curve, 0.1) == doctest::Approx(25.0)); // clamped left
    CHECK(interpolate_psnr(curve, 1.0) == doctest::Approx(35.0)); // clamped right
}
