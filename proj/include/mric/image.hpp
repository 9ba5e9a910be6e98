#pragma once

#include <cstdint>
#include <vector>

#include "mric/errors.hpp"

namespace mric {

// Single-channel image, unit-range values, row-major. `h` is the number
// of rows (M), `w` the number of columns (N).
struct ImageGray {
    int h = 0;
    int w = 0;
    std::vector<float> v;

    ImageGray() = default;
    ImageGray(int height, int width, float fill = 0.f)
        : h(height), w(width),
          v(static_cast<std::size_t>(height) * width, fill) {}

    float& at(int y, int x) { return v[static_cast<std::size_t>(y) * w + x]; }
    float at(int y, int x) const {
        return v[static_cast<std::size_t>(y) * w + x];
    }
    const float* row(int y) const { return v.data() + static_cast<std::size_t>(y) * w; }
    float* row(int y) { return v.data() + static_cast<std::size_t>(y) * w; }
    std::size_t size() const { return v.size(); }
    bool same_shape(const ImageGray& o) const { return h == o.h && w == o.w; }
};

// 8-bit image as consumed/produced by the codec.
struct Image8 {
    int h = 0;
    int w = 0;
    std::vector<uint8_t> v;

    Image8() = default;
    Image8(int height, int width)
        : h(height), w(width), v(static_cast<std::size_t>(height) * width, 0) {}
    std::size_t size() const { return v.size(); }
};

inline void require_same_shape(const ImageGray& a, const ImageGray& b,
                               const char* what) {
    if (!a.same_shape(b)) {
        throw ValidationError(std::string(what) + ": dimension mismatch (" +
                              std::to_string(a.h) + "x" + std::to_string(a.w) +
                              " vs " + std::to_string(b.h) + "x" +
                              std::to_string(b.w) + ")");
    }
}

} // namespace mric
