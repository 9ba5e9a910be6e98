#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops behind the convolution, loss, and optimizer
// code. Each operation exists as a scalar reference kernel and, on x86
// hosts with AVX2+FMA, as a vectorized variant; the active table is
// picked once at startup. MRIC_KERNELS=scalar forces the reference path.

namespace mric::kernels {

struct Ops {
    const char* name;

    // For each of `rows` output rows r and j in [0, n):
    //   out[r*out_stride + j] +=
    //       sum_{ky,kx} w[ky*k+kx] * in[r*in_row_step + ky*in_stride + j + kx]
    // `in` points at the first window's top-left corner inside a padded
    // plane of row pitch in_stride; in_row_step advances one output row
    // (in_stride for unit stride, 2*in_stride for stride 2).
    void (*conv_rows)(float* out, std::size_t out_stride, std::size_t rows,
                      const float* in, std::size_t in_stride,
                      std::size_t in_row_step, const float* w, int k,
                      std::size_t n);

    // Stride-2 variant: the in-row index is 2*j + kx.
    void (*conv_rows_s2)(float* out, std::size_t out_stride, std::size_t rows,
                         const float* in, std::size_t in_stride,
                         std::size_t in_row_step, const float* w, int k,
                         std::size_t n);

    // sum_{r<rows} sum_{j<n} a[r*sa + j] * b[r*sb + j]
    double (*dot2d)(const float* a, std::size_t sa, const float* b,
                    std::size_t sb, std::size_t rows, std::size_t n);

    // `a` sampled with step 2 along the row: a[r*sa + 2*j].
    double (*dot2d_s2)(const float* a, std::size_t sa, const float* b,
                       std::size_t sb, std::size_t rows, std::size_t n);

    // All nine 3x3 weight-gradient taps in one pass:
    //   dw[ty*3+tx] += sum_{r,j} g[r*sg + j] * in[r*in_row_step + ty*si + j + tx]
    // (stride-2 variant: in index 2*j + tx). dw accumulates in double.
    void (*wgrad3)(const float* g, std::size_t sg, const float* in,
                   std::size_t si, std::size_t in_row_step, std::size_t rows,
                   std::size_t n, double* dw);
    void (*wgrad3_s2)(const float* g, std::size_t sg, const float* in,
                      std::size_t si, std::size_t in_row_step, std::size_t rows,
                      std::size_t n, double* dw);

    void (*relu)(const float* x, float* y, std::size_t n);

    // out[i] = g[i] if post[i] > 0 else 0, where post is the stored
    // post-activation value.
    void (*relu_bwd)(const float* post, const float* g, float* out,
                     std::size_t n);

    void (*clamp01)(const float* x, float* y, std::size_t n);

    // Pass-through gradient inside the open interval, zero outside:
    // out[i] = g[i] if 0 <= pre[i] <= 1 else 0. `pre` is the pre-clamp
    // value.
    void (*clamp01_bwd)(const float* pre, const float* g, float* out,
                        std::size_t n);

    double (*sum)(const float* x, std::size_t n);

    double (*abs_diff_sum)(const float* a, const float* b, std::size_t n);

    // out[i] = s * sign(a[i] - b[i]), sign(0) = 0.
    void (*sign_diff)(const float* a, const float* b, float s, float* out,
                      std::size_t n);

    // Adam update over one parameter block. inv_bc1/inv_bc2 are the
    // 1/(1-beta^t) bias corrections for the current step.
    void (*adam_step)(float* w, float* m, float* v, const float* g,
                      std::size_t n, float lr, float b1, float b2, float eps,
                      float inv_bc1, float inv_bc2);
};

const Ops& scalar_ops();

// AVX2+FMA table, or nullptr when not compiled in or the CPU lacks it.
const Ops* avx2_ops();

// Active table: AVX2 when available unless MRIC_KERNELS=scalar.
const Ops& ops();

bool cpu_has_avx2();

} // namespace mric::kernels
