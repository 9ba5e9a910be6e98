#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "mric/patchset.hpp"
#include "mric/codec.hpp"
#include "mric/rng.hpp"
#include "test_util.hpp"

using namespace mric;
namespace fs = std::filesystem;

namespace {

std::vector<ImageGray> synthetic_sources(int count, int h, int w,
                                         uint64_t seed) {
    // 8-bit-representable values so the PNG cache round-trips exactly.
    Rng rng(seed);
    std::vector<ImageGray> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        ImageGray img(h, w);
        for (float& v : img.v) {
            v = static_cast<float>(rng.uniform_index(256)) / 255.f;
        }
        out.push_back(std::move(img));
    }
    return out;
}

} // namespace

TEST_CASE("400 sources of 180x180 yield 3200 patches of 160x160") {
    const auto sources = synthetic_sources(400, 180, 180, 11);
    const PatchSet set = build_patchset(sources, 160, 3200, 42);
    CHECK(set.patches.size() == 3200);
    CHECK(set.manifest.size() == 3200);
    for (std::size_t i = 0; i < set.patches.size(); i += 157) {
        CHECK(set.patches[i].h == 160);
        CHECK(set.patches[i].w == 160);
    }
}

TEST_CASE("identity augmentation returns the image itself") {
    const auto sources = synthetic_sources(1, 160, 160, 3);
    const PatchRecord rec{0, 0, 0, 0, false};
    const ImageGray patch = apply_patch_record(sources[0], rec, 160);
    CHECK(patch.v == sources[0].v);
}

TEST_CASE("rotation permutes pixel values") {
    const auto sources = synthetic_sources(1, 64, 64, 5);
    const PatchRecord plain{0, 8, 4, 0, false};
    const PatchRecord rotated{0, 8, 4, 90, false};
    ImageGray a = apply_patch_record(sources[0], plain, 32);
    ImageGray b = apply_patch_record(sources[0], rotated, 32);
    std::sort(a.v.begin(), a.v.end());
    std::sort(b.v.begin(), b.v.end());
    CHECK(a.v == b.v);
}

TEST_CASE("construction is deterministic in the seed") {
    const auto sources = synthetic_sources(5, 48, 72, 9);
    const PatchSet s1 = build_patchset(sources, 32, 40, 1234);
    const PatchSet s2 = build_patchset(sources, 32, 40, 1234);
    const PatchSet s3 = build_patchset(sources, 32, 40, 1235);
    REQUIRE(s1.patches.size() == s2.patches.size());
    for (std::size_t i = 0; i < s1.patches.size(); ++i) {
        CHECK(s1.patches[i].v == s2.patches[i].v);
    }
    bool any_difference = false;
    for (std::size_t i = 0; i < s1.patches.size(); ++i) {
        if (s1.patches[i].v != s3.patches[i].v) any_difference = true;
    }
    CHECK(any_difference);
}

TEST_CASE("manifest entries reproduce their patches") {
    const auto sources = synthetic_sources(4, 50, 40, 21);
    const PatchSet set = build_patchset(sources, 24, 30, 77);
    for (std::size_t i = 0; i < set.patches.size(); ++i) {
        const ImageGray rebuilt =
            apply_patch_record(sources[set.manifest[i].source_id],
                               set.manifest[i], set.patch);
        CHECK(rebuilt.v == set.patches[i].v);
    }
}

TEST_CASE("patch values stay in unit range") {
    const auto sources = synthetic_sources(3, 40, 40, 31);
    const PatchSet set = build_patchset(sources, 24, 20, 5);
    for (const ImageGray& p : set.patches) {
        for (const float v : p.v) {
            CHECK(v >= 0.f);
            CHECK(v <= 1.f);
        }
    }
}

TEST_CASE("undersized source image is rejected by name") {
    auto sources = synthetic_sources(3, 64, 64, 13);
    sources[1] = ImageGray(20, 64, 0.5f);
    try {
        build_patchset(sources, 32, 10, 0);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("image 1") != std::string::npos);
    }
}

TEST_CASE("target_count below the image count is rejected") {
    const auto sources = synthetic_sources(8, 40, 40, 17);
    CHECK_THROWS_AS(build_patchset(sources, 24, 4, 0), ValidationError);
}

TEST_CASE("disk cache round-trips patches exactly") {
    const auto sources = synthetic_sources(3, 48, 48, 19);
    const PatchSet set = build_patchset(sources, 32, 12, 3);
    const fs::path dir = fs::temp_directory_path() / "mric_test_patchset";
    fs::remove_all(dir);
    save_patchset(set, dir);
    const PatchSet loaded = load_patchset(dir);
    REQUIRE(loaded.patches.size() == set.patches.size());
    CHECK(loaded.patch == set.patch);
    for (std::size_t i = 0; i < set.patches.size(); ++i) {
        CHECK(loaded.patches[i].v == set.patches[i].v);
        CHECK(loaded.manifest[i].source_id == set.manifest[i].source_id);
        CHECK(loaded.manifest[i].x == set.manifest[i].x);
        CHECK(loaded.manifest[i].y == set.manifest[i].y);
        CHECK(loaded.manifest[i].rot_deg == set.manifest[i].rot_deg);
        CHECK(loaded.manifest[i].flip == set.manifest[i].flip);
    }
    fs::remove_all(dir);
}
