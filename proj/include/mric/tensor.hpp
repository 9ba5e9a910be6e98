#pragma once

#include <cstddef>
#include <vector>

#include "mric/image.hpp"

namespace mric {

// CHW float tensor (single sample; batching is a loop one level up).
struct Tensor {
    int c = 0;
    int h = 0;
    int w = 0;
    std::vector<float> v;

    Tensor() = default;
    Tensor(int channels, int height, int width, float fill = 0.f)
        : c(channels), h(height), w(width),
          v(static_cast<std::size_t>(channels) * height * width, fill) {}

    std::size_t plane_size() const { return static_cast<std::size_t>(h) * w; }
    std::size_t size() const { return v.size(); }
    float* plane(int ci) { return v.data() + plane_size() * ci; }
    const float* plane(int ci) const { return v.data() + plane_size() * ci; }
};

inline Tensor to_tensor(const ImageGray& img) {
    Tensor t(1, img.h, img.w);
    t.v = img.v;
    return t;
}

inline ImageGray to_image(const Tensor& t) {
    if (t.c != 1) throw ValidationError("to_image expects a 1-channel tensor");
    ImageGray img(t.h, t.w);
    img.v = t.v;
    return img;
}

} // namespace mric
