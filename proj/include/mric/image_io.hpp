#pragma once

#include <filesystem>

#include "mric/image.hpp"

namespace mric {

// Decodes a PNG, BMP or JPEG raster (detected by magic bytes). Color
// inputs are reduced to luma with BT.601 weights, then scaled to [0,1].
ImageGray load_image(const std::filesystem::path& path);

// 8-bit grayscale PNG.
void save_png_gray8(const std::filesystem::path& path, const Image8& img);

} // namespace mric
