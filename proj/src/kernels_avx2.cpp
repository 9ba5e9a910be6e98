// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma on x86-64 and is only entered after a runtime CPUID
// check; see kernels.cpp.

#include "mric/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <cmath>
#include <immintrin.h>

namespace mric::kernels {
namespace avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

// Even-index elements p[0], p[2], ..., p[14] packed into one vector.
inline __m256 load_even8(const float* p) {
    const __m256 a = _mm256_loadu_ps(p);
    const __m256 b = _mm256_loadu_ps(p + 8);
    const __m256 t = _mm256_shuffle_ps(a, b, _MM_SHUFFLE(2, 0, 2, 0));
    return _mm256_castpd_ps(
        _mm256_permute4x64_pd(_mm256_castps_pd(t), 0xD8));
}

} // namespace

// Two output rows x two vectors per iteration: four independent
// accumulators keep the FMA pipeline full (a single running accumulator
// serializes on its 4-5 cycle latency), and the second row reuses each
// broadcast weight.
void conv_rows(float* out, std::size_t out_stride, std::size_t rows,
               const float* in, std::size_t in_stride, std::size_t in_row_step,
               const float* w, int k, std::size_t n) {
    std::size_t r = 0;
    for (; r + 2 <= rows; r += 2) {
        float* o0 = out + r * out_stride;
        float* o1 = o0 + out_stride;
        const float* i0 = in + r * in_row_step;
        const float* i1 = i0 + in_row_step;
        std::size_t j = 0;
        for (; j + 16 <= n; j += 16) {
            __m256 a00 = _mm256_loadu_ps(o0 + j);
            __m256 a01 = _mm256_loadu_ps(o0 + j + 8);
            __m256 a10 = _mm256_loadu_ps(o1 + j);
            __m256 a11 = _mm256_loadu_ps(o1 + j + 8);
            const float* wp = w;
            const float* r0 = i0 + j;
            const float* r1 = i1 + j;
            for (int ky = 0; ky < k; ++ky, r0 += in_stride, r1 += in_stride) {
                for (int kx = 0; kx < k; ++kx) {
                    const __m256 wv = _mm256_set1_ps(*wp++);
                    a00 = _mm256_fmadd_ps(wv, _mm256_loadu_ps(r0 + kx), a00);
                    a01 = _mm256_fmadd_ps(wv, _mm256_loadu_ps(r0 + kx + 8), a01);
                    a10 = _mm256_fmadd_ps(wv, _mm256_loadu_ps(r1 + kx), a10);
                    a11 = _mm256_fmadd_ps(wv, _mm256_loadu_ps(r1 + kx + 8), a11);
                }
            }
            _mm256_storeu_ps(o0 + j, a00);
            _mm256_storeu_ps(o0 + j + 8, a01);
            _mm256_storeu_ps(o1 + j, a10);
            _mm256_storeu_ps(o1 + j + 8, a11);
        }
        for (; j + 8 <= n; j += 8) {
            __m256 a0 = _mm256_loadu_ps(o0 + j);
            __m256 a1 = _mm256_loadu_ps(o1 + j);
            const float* wp = w;
            const float* r0 = i0 + j;
            const float* r1 = i1 + j;
            for (int ky = 0; ky < k; ++ky, r0 += in_stride, r1 += in_stride) {
                for (int kx = 0; kx < k; ++kx) {
                    const __m256 wv = _mm256_set1_ps(*wp++);
                    a0 = _mm256_fmadd_ps(wv, _mm256_loadu_ps(r0 + kx), a0);
                    a1 = _mm256_fmadd_ps(wv, _mm256_loadu_ps(r1 + kx), a1);
                }
            }
            _mm256_storeu_ps(o0 + j, a0);
            _mm256_storeu_ps(o1 + j, a1);
        }
        for (; j < n; ++j) {
            float acc0 = o0[j], acc1 = o1[j];
            const float* wp = w;
            const float* r0 = i0 + j;
            const float* r1 = i1 + j;
            for (int ky = 0; ky < k; ++ky, r0 += in_stride, r1 += in_stride) {
                for (int kx = 0; kx < k; ++kx) {
                    acc0 += *wp * r0[kx];
                    acc1 += *wp * r1[kx];
                    ++wp;
                }
            }
            o0[j] = acc0;
            o1[j] = acc1;
        }
    }
    for (; r < rows; ++r) {
        float* orow = out + r * out_stride;
        const float* irow = in + r * in_row_step;
        std::size_t j = 0;
        for (; j + 16 <= n; j += 16) {
            __m256 a0 = _mm256_loadu_ps(orow + j);
            __m256 a1 = _mm256_loadu_ps(orow + j + 8);
            const float* wp = w;
            const float* row = irow + j;
            for (int ky = 0; ky < k; ++ky, row += in_stride) {
                for (int kx = 0; kx < k; ++kx) {
                    const __m256 wv = _mm256_set1_ps(*wp++);
                    a0 = _mm256_fmadd_ps(wv, _mm256_loadu_ps(row + kx), a0);
                    a1 = _mm256_fmadd_ps(wv, _mm256_loadu_ps(row + kx + 8), a1);
                }
            }
            _mm256_storeu_ps(orow + j, a0);
            _mm256_storeu_ps(orow + j + 8, a1);
        }
        for (; j + 8 <= n; j += 8) {
            __m256 acc = _mm256_loadu_ps(orow + j);
            const float* wp = w;
            const float* row = irow + j;
            for (int ky = 0; ky < k; ++ky, row += in_stride) {
                for (int kx = 0; kx < k; ++kx) {
                    acc = _mm256_fmadd_ps(_mm256_set1_ps(*wp++),
                                          _mm256_loadu_ps(row + kx), acc);
                }
            }
            _mm256_storeu_ps(orow + j, acc);
        }
        for (; j < n; ++j) {
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
        std::size_t j = 0;
        for (; j + 16 <= n; j += 16) {
            __m256 a0 = _mm256_loadu_ps(orow + j);
            __m256 a1 = _mm256_loadu_ps(orow + j + 8);
            const float* wp = w;
            const float* row = irow + 2 * j;
            for (int ky = 0; ky < k; ++ky, row += in_stride) {
                for (int kx = 0; kx < k; ++kx) {
                    const __m256 wv = _mm256_set1_ps(*wp++);
                    a0 = _mm256_fmadd_ps(wv, load_even8(row + kx), a0);
                    a1 = _mm256_fmadd_ps(wv, load_even8(row + kx + 16), a1);
                }
            }
            _mm256_storeu_ps(orow + j, a0);
            _mm256_storeu_ps(orow + j + 8, a1);
        }
        for (; j + 8 <= n; j += 8) {
            __m256 acc = _mm256_loadu_ps(orow + j);
            const float* wp = w;
            const float* row = irow + 2 * j;
            for (int ky = 0; ky < k; ++ky, row += in_stride) {
                for (int kx = 0; kx < k; ++kx) {
                    acc = _mm256_fmadd_ps(_mm256_set1_ps(*wp++),
                                          load_even8(row + kx), acc);
                }
            }
            _mm256_storeu_ps(orow + j, acc);
        }
        for (; j < n; ++j) {
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

// Row sums accumulate in float lanes, cross-row in double, mirroring the
// scalar reference so both variants agree to rounding noise.
double dot2d(const float* a, std::size_t sa, const float* b, std::size_t sb,
             std::size_t rows, std::size_t n) {
    __m256d total = _mm256_setzero_pd();
    double tail_total = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const float* ar = a + r * sa;
        const float* br = b + r * sb;
        __m256 acc0 = _mm256_setzero_ps();
        __m256 acc1 = _mm256_setzero_ps();
        std::size_t j = 0;
        for (; j + 16 <= n; j += 16) {
            acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(ar + j),
                                   _mm256_loadu_ps(br + j), acc0);
            acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(ar + j + 8),
                                   _mm256_loadu_ps(br + j + 8), acc1);
        }
        for (; j + 8 <= n; j += 8) {
            acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(ar + j),
                                   _mm256_loadu_ps(br + j), acc0);
        }
        float tail = 0.f;
        for (; j < n; ++j) tail += ar[j] * br[j];
        const __m256 acc = _mm256_add_ps(acc0, acc1);
        total = _mm256_add_pd(total, _mm256_cvtps_pd(_mm256_castps256_ps128(acc)));
        total = _mm256_add_pd(total, _mm256_cvtps_pd(_mm256_extractf128_ps(acc, 1)));
        tail_total += tail;
    }
    return hsum(total) + tail_total;
}

double dot2d_s2(const float* a, std::size_t sa, const float* b, std::size_t sb,
                std::size_t rows, std::size_t n) {
    __m256d total = _mm256_setzero_pd();
    double tail_total = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const float* ar = a + r * sa;
        const float* br = b + r * sb;
        __m256 acc = _mm256_setzero_ps();
        std::size_t j = 0;
        for (; j + 8 <= n; j += 8) {
            acc = _mm256_fmadd_ps(load_even8(ar + 2 * j),
                                  _mm256_loadu_ps(br + j), acc);
        }
        float tail = 0.f;
        for (; j < n; ++j) tail += ar[2 * j] * br[j];
        total = _mm256_add_pd(total, _mm256_cvtps_pd(_mm256_castps256_ps128(acc)));
        total = _mm256_add_pd(total, _mm256_cvtps_pd(_mm256_extractf128_ps(acc, 1)));
        tail_total += tail;
    }
    return hsum(total) + tail_total;
}

// Nine independent accumulator chains, one per tap; folded to double per
// row so long planes keep full precision.
void wgrad3(const float* g, std::size_t sg, const float* in, std::size_t si,
            std::size_t in_row_step, std::size_t rows, std::size_t n,
            double* dw) {
    for (std::size_t r = 0; r < rows; ++r) {
        const float* grow = g + r * sg;
        const float* irow = in + r * in_row_step;
        __m256 acc[9];
        for (auto& a : acc) a = _mm256_setzero_ps();
        std::size_t j = 0;
        for (; j + 8 <= n; j += 8) {
            const __m256 gv = _mm256_loadu_ps(grow + j);
            const float* p = irow + j;
            for (int ty = 0; ty < 3; ++ty) {
                acc[ty * 3 + 0] = _mm256_fmadd_ps(gv, _mm256_loadu_ps(p + ty * si + 0), acc[ty * 3 + 0]);
                acc[ty * 3 + 1] = _mm256_fmadd_ps(gv, _mm256_loadu_ps(p + ty * si + 1), acc[ty * 3 + 1]);
                acc[ty * 3 + 2] = _mm256_fmadd_ps(gv, _mm256_loadu_ps(p + ty * si + 2), acc[ty * 3 + 2]);
            }
        }
        float tail[9] = {};
        for (; j < n; ++j) {
            const float gv = grow[j];
            const float* p = irow + j;
            for (int ty = 0; ty < 3; ++ty) {
                tail[ty * 3 + 0] += gv * p[ty * si + 0];
                tail[ty * 3 + 1] += gv * p[ty * si + 1];
                tail[ty * 3 + 2] += gv * p[ty * si + 2];
            }
        }
        for (int t = 0; t < 9; ++t) {
            __m128 lo = _mm256_castps256_ps128(acc[t]);
            __m128 hi = _mm256_extractf128_ps(acc[t], 1);
            lo = _mm_add_ps(lo, hi);
            lo = _mm_add_ps(lo, _mm_movehl_ps(lo, lo));
            lo = _mm_add_ss(lo, _mm_shuffle_ps(lo, lo, 1));
            dw[t] += static_cast<double>(_mm_cvtss_f32(lo)) + tail[t];
        }
    }
}

void wgrad3_s2(const float* g, std::size_t sg, const float* in, std::size_t si,
               std::size_t in_row_step, std::size_t rows, std::size_t n,
               double* dw) {
    for (std::size_t r = 0; r < rows; ++r) {
        const float* grow = g + r * sg;
        const float* irow = in + r * in_row_step;
        __m256 acc[9];
        for (auto& a : acc) a = _mm256_setzero_ps();
        std::size_t j = 0;
        for (; j + 8 <= n; j += 8) {
            const __m256 gv = _mm256_loadu_ps(grow + j);
            const float* p = irow + 2 * j;
            for (int ty = 0; ty < 3; ++ty) {
                acc[ty * 3 + 0] = _mm256_fmadd_ps(gv, load_even8(p + ty * si + 0), acc[ty * 3 + 0]);
                acc[ty * 3 + 1] = _mm256_fmadd_ps(gv, load_even8(p + ty * si + 1), acc[ty * 3 + 1]);
                acc[ty * 3 + 2] = _mm256_fmadd_ps(gv, load_even8(p + ty * si + 2), acc[ty * 3 + 2]);
            }
        }
        float tail[9] = {};
        for (; j < n; ++j) {
            const float gv = grow[j];
            const float* p = irow + 2 * j;
            for (int ty = 0; ty < 3; ++ty) {
                tail[ty * 3 + 0] += gv * p[ty * si + 0];
                tail[ty * 3 + 1] += gv * p[ty * si + 1];
                tail[ty * 3 + 2] += gv * p[ty * si + 2];
            }
        }
        for (int t = 0; t < 9; ++t) {
            __m128 lo = _mm256_castps256_ps128(acc[t]);
            __m128 hi = _mm256_extractf128_ps(acc[t], 1);
            lo = _mm_add_ps(lo, hi);
            lo = _mm_add_ps(lo, _mm_movehl_ps(lo, lo));
            lo = _mm_add_ss(lo, _mm_shuffle_ps(lo, lo, 1));
            dw[t] += static_cast<double>(_mm_cvtss_f32(lo)) + tail[t];
        }
    }
}

void relu(const float* x, float* y, std::size_t n) {
    const __m256 zero = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_ps(y + i, _mm256_max_ps(_mm256_loadu_ps(x + i), zero));
    }
    for (; i < n; ++i) y[i] = x[i] > 0.f ? x[i] : 0.f;
}

void relu_bwd(const float* post, const float* g, float* out, std::size_t n) {
    const __m256 zero = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 mask = _mm256_cmp_ps(_mm256_loadu_ps(post + i), zero, _CMP_GT_OQ);
        _mm256_storeu_ps(out + i, _mm256_and_ps(_mm256_loadu_ps(g + i), mask));
    }
    for (; i < n; ++i) out[i] = post[i] > 0.f ? g[i] : 0.f;
}

void clamp01(const float* x, float* y, std::size_t n) {
    const __m256 zero = _mm256_setzero_ps();
    const __m256 one = _mm256_set1_ps(1.f);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_ps(
            y + i, _mm256_min_ps(_mm256_max_ps(_mm256_loadu_ps(x + i), zero), one));
    }
    for (; i < n; ++i) {
        float v = x[i];
        if (v < 0.f) v = 0.f;
        if (v > 1.f) v = 1.f;
        y[i] = v;
    }
}

void clamp01_bwd(const float* pre, const float* g, float* out, std::size_t n) {
    const __m256 zero = _mm256_setzero_ps();
    const __m256 one = _mm256_set1_ps(1.f);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 p = _mm256_loadu_ps(pre + i);
        const __m256 mask = _mm256_and_ps(_mm256_cmp_ps(p, zero, _CMP_GE_OQ),
                                          _mm256_cmp_ps(p, one, _CMP_LE_OQ));
        _mm256_storeu_ps(out + i, _mm256_and_ps(_mm256_loadu_ps(g + i), mask));
    }
    for (; i < n; ++i) {
        out[i] = (pre[i] >= 0.f && pre[i] <= 1.f) ? g[i] : 0.f;
    }
}

// Loss reductions accumulate in double lanes; these feed finite-difference
// checked quantities, so rounding must match the scalar reference closely.
double sum(const float* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_cvtps_pd(_mm_loadu_ps(x + i)));
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += static_cast<double>(x[i]);
    return hsum(acc) + tail;
}

double abs_diff_sum(const float* a, const float* b, std::size_t n) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_cvtps_pd(_mm_loadu_ps(a + i)),
                                        _mm256_cvtps_pd(_mm_loadu_ps(b + i)));
        acc = _mm256_add_pd(acc, _mm256_andnot_pd(signmask, d));
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        tail += std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
    }
    return hsum(acc) + tail;
}

void sign_diff(const float* a, const float* b, float s, float* out,
               std::size_t n) {
    const __m256 pos = _mm256_set1_ps(s);
    const __m256 neg = _mm256_set1_ps(-s);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 av = _mm256_loadu_ps(a + i);
        const __m256 bv = _mm256_loadu_ps(b + i);
        const __m256 gt = _mm256_cmp_ps(av, bv, _CMP_GT_OQ);
        const __m256 lt = _mm256_cmp_ps(av, bv, _CMP_LT_OQ);
        _mm256_storeu_ps(out + i, _mm256_or_ps(_mm256_and_ps(gt, pos),
                                               _mm256_and_ps(lt, neg)));
    }
    for (; i < n; ++i) {
        const float d = a[i] - b[i];
        out[i] = d > 0.f ? s : (d < 0.f ? -s : 0.f);
    }
}

void adam_step(float* w, float* m, float* v, const float* g, std::size_t n,
               float lr, float b1, float b2, float eps, float inv_bc1,
               float inv_bc2) {
    const __m256 vb1 = _mm256_set1_ps(b1);
    const __m256 vb2 = _mm256_set1_ps(b2);
    const __m256 vomb1 = _mm256_set1_ps(1.f - b1);
    const __m256 vomb2 = _mm256_set1_ps(1.f - b2);
    const __m256 vlr = _mm256_set1_ps(lr);
    const __m256 veps = _mm256_set1_ps(eps);
    const __m256 vbc1 = _mm256_set1_ps(inv_bc1);
    const __m256 vbc2 = _mm256_set1_ps(inv_bc2);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 gi = _mm256_loadu_ps(g + i);
        __m256 mi = _mm256_loadu_ps(m + i);
        __m256 vi = _mm256_loadu_ps(v + i);
        mi = _mm256_fmadd_ps(vb1, mi, _mm256_mul_ps(vomb1, gi));
        vi = _mm256_fmadd_ps(vb2, vi, _mm256_mul_ps(vomb2, _mm256_mul_ps(gi, gi)));
        _mm256_storeu_ps(m + i, mi);
        _mm256_storeu_ps(v + i, vi);
        const __m256 mhat = _mm256_mul_ps(mi, vbc1);
        const __m256 vhat = _mm256_mul_ps(vi, vbc2);
        const __m256 denom = _mm256_add_ps(_mm256_sqrt_ps(vhat), veps);
        const __m256 upd = _mm256_div_ps(_mm256_mul_ps(vlr, mhat), denom);
        _mm256_storeu_ps(w + i, _mm256_sub_ps(_mm256_loadu_ps(w + i), upd));
    }
    for (; i < n; ++i) {
        const float gi = g[i];
        m[i] = b1 * m[i] + (1.f - b1) * gi;
        v[i] = b2 * v[i] + (1.f - b2) * gi * gi;
        const float mhat = m[i] * inv_bc1;
        const float vhat = v[i] * inv_bc2;
        w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

} // namespace avx2

const Ops* avx2_ops_table() {
    static const Ops table = {
        "avx2",
        avx2::conv_rows,
        avx2::conv_rows_s2,
        avx2::dot2d,
        avx2::dot2d_s2,
        avx2::wgrad3,
        avx2::wgrad3_s2,
        avx2::relu,
        avx2::relu_bwd,
        avx2::clamp01,
        avx2::clamp01_bwd,
        avx2::sum,
        avx2::abs_diff_sum,
        avx2::sign_diff,
        avx2::adam_step,
    };
    return &table;
}

} // namespace mric::kernels

#else

namespace mric::kernels {
const Ops* avx2_ops_table() { return nullptr; }
} // namespace mric::kernels

#endif
