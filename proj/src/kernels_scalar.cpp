#include "mric/kernels.hpp"

#include <cmath>

namespace mric::kernels {
namespace scalar {

void conv_rows(float* out, std::size_t out_stride, std::size_t rows,
               const float* in, std::size_t in_stride, std::size_t in_row_step,
               const float* w, int k, std::size_t n) {
    for (std::size_t r = 0; r < rows; ++r) {
        float* orow = out + r * out_stride;
        const float* irow = in + r * in_row_step;
        for (std::size_t j = 0; j < n; ++j) {
            float acc = orow[j];
            const float* wp = w;
            const float* row = irow + j;
            for (int ky = 0; ky < k; ++ky, row += in_stride) {
                for (int kx = 0; kx < k; ++kx) acc += *wp++ * row[kx];
            }
            orow[j] = acc;
        }
    }
}

void conv_rows_s2(float* out, std::size_t out_stride, std::size_t rows,
                  const float* in, std::size_t in_stride,
                  std::size_t in_row_step, const float* w, int k,
                  std::size_t n) {
    for (std::size_t r = 0; r < rows; ++r) {
        float* orow = out + r * out_stride;
        const float* irow = in + r * in_row_step;
        for (std::size_t j = 0; j < n; ++j) {
            float acc = orow[j];
            const float* wp = w;
            const float* row = irow + 2 * j;
            for (int ky = 0; ky < k; ++ky, row += in_stride) {
                for (int kx = 0; kx < k; ++kx) acc += *wp++ * row[kx];
            }
            orow[j] = acc;
        }
    }
}

double dot2d(const float* a, std::size_t sa, const float* b, std::size_t sb,
             std::size_t rows, std::size_t n) {
    double total = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        float acc = 0.f;
        const float* ar = a + r * sa;
        const float* br = b + r * sb;
        for (std::size_t j = 0; j < n; ++j) acc += ar[j] * br[j];
        total += acc;
    }
    return total;
}

double dot2d_s2(const float* a, std::size_t sa, const float* b, std::size_t sb,
                std::size_t rows, std::size_t n) {
    double total = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        float acc = 0.f;
        const float* ar = a + r * sa;
        const float* br = b + r * sb;
        for (std::size_t j = 0; j < n; ++j) acc += ar[2 * j] * br[j];
        total += acc;
    }
    return total;
}

void wgrad3(const float* g, std::size_t sg, const float* in, std::size_t si,
            std::size_t in_row_step, std::size_t rows, std::size_t n,
            double* dw) {
    for (std::size_t r = 0; r < rows; ++r) {
        const float* grow = g + r * sg;
        const float* irow = in + r * in_row_step;
        float acc[9] = {};
        for (std::size_t j = 0; j < n; ++j) {
            const float gv = grow[j];
            const float* p = irow + j;
            for (int ty = 0; ty < 3; ++ty) {
                acc[ty * 3 + 0] += gv * p[ty * si + 0];
                acc[ty * 3 + 1] += gv * p[ty * si + 1];
                acc[ty * 3 + 2] += gv * p[ty * si + 2];
            }
        }
        for (int t = 0; t < 9; ++t) dw[t] += acc[t];
    }
}

void wgrad3_s2(const float* g, std::size_t sg, const float* in, std::size_t si,
               std::size_t in_row_step, std::size_t rows, std::size_t n,
               double* dw) {
    for (std::size_t r = 0; r < rows; ++r) {
        const float* grow = g + r * sg;
        const float* irow = in + r * in_row_step;
        float acc[9] = {};
        for (std::size_t j = 0; j < n; ++j) {
            const float gv = grow[j];
            const float* p = irow + 2 * j;
            for (int ty = 0; ty < 3; ++ty) {
                acc[ty * 3 + 0] += gv * p[ty * si + 0];
                acc[ty * 3 + 1] += gv * p[ty * si + 1];
                acc[ty * 3 + 2] += gv * p[ty * si + 2];
            }
        }
        for (int t = 0; t < 9; ++t) dw[t] += acc[t];
    }
}

void relu(const float* x, float* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] > 0.f ? x[i] : 0.f;
}

void relu_bwd(const float* post, const float* g, float* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = post[i] > 0.f ? g[i] : 0.f;
}

void clamp01(const float* x, float* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        float v = x[i];
        if (v < 0.f) v = 0.f;
        if (v > 1.f) v = 1.f;
        y[i] = v;
    }
}

void clamp01_bwd(const float* pre, const float* g, float* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (pre[i] >= 0.f && pre[i] <= 1.f) ? g[i] : 0.f;
    }
}

double sum(const float* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += static_cast<double>(x[i]);
    return acc;
}

double abs_diff_sum(const float* a, const float* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
    }
    return acc;
}

void sign_diff(const float* a, const float* b, float s, float* out,
               std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const float d = a[i] - b[i];
        out[i] = d > 0.f ? s : (d < 0.f ? -s : 0.f);
    }
}

void adam_step(float* w, float* m, float* v, const float* g, std::size_t n,
               float lr, float b1, float b2, float eps, float inv_bc1,
               float inv_bc2) {
    for (std::size_t i = 0; i < n; ++i) {
        const float gi = g[i];
        m[i] = b1 * m[i] + (1.f - b1) * gi;
        v[i] = b2 * v[i] + (1.f - b2) * gi * gi;
        const float mhat = m[i] * inv_bc1;
        const float vhat = v[i] * inv_bc2;
        w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

} // namespace scalar

const Ops& scalar_ops() {
    static const Ops table = {
        "scalar",
        scalar::conv_rows,
        scalar::conv_rows_s2,
        scalar::dot2d,
        scalar::dot2d_s2,
        scalar::wgrad3,
        scalar::wgrad3_s2,
        scalar::relu,
        scalar::relu_bwd,
        scalar::clamp01,
        scalar::clamp01_bwd,
        scalar::sum,
        scalar::abs_diff_sum,
        scalar::sign_diff,
        scalar::adam_step,
    };
    return table;
}

} // namespace mric::kernels
