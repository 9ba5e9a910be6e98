#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mric/image_io.hpp"
#include "mric/codec.hpp"

using namespace mric;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "mric_test_image";
    fs::create_directories(dir);
    return dir;
}

// Hand-assembled uncompressed 24-bit BMP filled with one color.
void write_bmp24(const fs::path& path, int w, int h, uint8_t r, uint8_t g,
                 uint8_t b) {
    const int stride = (w * 3 + 3) & ~3;
    const uint32_t pixel_bytes = stride * h;
    const uint32_t file_size = 54 + pixel_bytes;
    std::vector<uint8_t> bytes(file_size, 0);
    bytes[0] = 'B';
    bytes[1] = 'M';
    auto wr32 = [&](std::size_t off, uint32_t v) {
        bytes[off] = v & 0xff;
        bytes[off + 1] = (v >> 8) & 0xff;
        bytes[off + 2] = (v >> 16) & 0xff;
        bytes[off + 3] = (v >> 24) & 0xff;
    };
    wr32(2, file_size);
    wr32(10, 54);
    wr32(14, 40);
    wr32(18, static_cast<uint32_t>(w));
    wr32(22, static_cast<uint32_t>(h));
    bytes[26] = 1; // planes
    bytes[28] = 24;
    wr32(34, pixel_bytes);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t off = 54 + static_cast<std::size_t>(y) * stride + 3 * x;
            bytes[off] = b;
            bytes[off + 1] = g;
            bytes[off + 2] = r;
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

} // namespace

TEST_CASE("grayscale PNG endpoints map to 0.0 and 1.0") {
    const fs::path dir = temp_dir();
    for (const int value : {0, 255}) {
        Image8 img(20, 17);
        std::fill(img.v.begin(), img.v.end(), static_cast<uint8_t>(value));
        const fs::path path = dir / ("const_" + std::to_string(value) + ".png");
        save_png_gray8(path, img);
        const ImageGray loaded = load_image(path);
        CHECK(loaded.h == 20);
        CHECK(loaded.w == 17);
        for (const float v : loaded.v) {
            CHECK(v == doctest::Approx(value / 255.0));
        }
    }
}

TEST_CASE("pure red converts with the BT.601 weight") {
    const fs::path dir = temp_dir();
    const fs::path path = dir / "red.bmp";
    write_bmp24(path, 9, 5, 255, 0, 0);
    const ImageGray img = load_image(path);
    CHECK(img.h == 5);
    CHECK(img.w == 9);
    for (const float v : img.v) {
        CHECK(std::abs(v - 0.299) <= 1.0 / 255);
    }
}

TEST_CASE("unreadable file raises an I/O error") {
    CHECK_THROWS_AS(load_image("/nonexistent/nowhere.png"), IoError);
}

TEST_CASE("zero-dimension BMP raises a validation error") {
    const fs::path dir = temp_dir();
    const fs::path path = dir / "zero.bmp";
    write_bmp24(path, 4, 1, 1, 1, 1);
    // corrupt the width field to zero
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(18);
    const char zeros[4] = {0, 0, 0, 0};
    f.write(zeros, 4);
    f.close();
    CHECK_THROWS_AS(load_image(path), ValidationError);
}

TEST_CASE("PNG save/load round trip is exact for 8-bit data") {
    const fs::path dir = temp_dir();
    Image8 img(13, 29);
    for (std::size_t i = 0; i < img.v.size(); ++i) {
        img.v[i] = static_cast<uint8_t>((i * 37) & 0xff);
    }
    const fs::path path = dir / "roundtrip.png";
    save_png_gray8(path, img);
    const ImageGray loaded = load_image(path);
    const Image8 back = quantize8(loaded);
    CHECK(back.v == img.v);
}

TEST_CASE("JPEG rasters load through the same entry point") {
    Image8 img(24, 24);
    for (std::size_t i = 0; i < img.v.size(); ++i) {
        img.v[i] = static_cast<uint8_t>(i % 200);
    }
    const std::vector<uint8_t> payload = jpeg_encode(img, 90);
    const fs::path path = temp_dir() / "sample.jpg";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    out.close();
    const ImageGray loaded = load_image(path);
    CHECK(loaded.h == 24);
    CHECK(loaded.w == 24);
}
