#include "mric/losses.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "mric/codec.hpp"
#include "mric/kernels.hpp"

namespace mric {

double l1_content(const ImageGray& a, const ImageGray& b) {
    require_same_shape(a, b, "l1_content");
    const double sum = kernels::ops().abs_diff_sum(a.v.data(), b.v.data(), a.size());
    return sum / static_cast<double>(a.size());
}

void l1_content_grad(const ImageGray& a, const ImageGray& b, double weight,
                     ImageGray& grad) {
    require_same_shape(a, b, "l1_content_grad");
    require_same_shape(a, grad, "l1_content_grad");
    const float s = static_cast<float>(weight / static_cast<double>(a.size()));
    std::vector<float> g(a.size());
    kernels::ops().sign_diff(a.v.data(), b.v.data(), s, g.data(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i) grad.v[i] += g[i];
}

namespace {

inline double fwd_diff_h(const ImageGray& img, int y, int x) {
    const int xn = x + 1 < img.w ? x + 1 : img.w - 1;
    return static_cast<double>(img.at(y, xn)) - static_cast<double>(img.at(y, x));
}

inline double fwd_diff_v(const ImageGray& img, int y, int x) {
    const int yn = y + 1 < img.h ? y + 1 : img.h - 1;
    return static_cast<double>(img.at(yn, x)) - static_cast<double>(img.at(y, x));
}

} // namespace

double l1_gradient(const ImageGray& a, const ImageGray& b) {
    require_same_shape(a, b, "l1_gradient");
    double sum = 0.0;
    for (int y = 0; y < a.h; ++y) {
        for (int x = 0; x < a.w; ++x) {
            sum += std::abs(fwd_diff_h(a, y, x) - fwd_diff_h(b, y, x));
            sum += std::abs(fwd_diff_v(a, y, x) - fwd_diff_v(b, y, x));
        }
    }
    return sum / static_cast<double>(a.size());
}

void l1_gradient_grad(const ImageGray& a, const ImageGray& b, double weight,
                      ImageGray& grad) {
    require_same_shape(a, b, "l1_gradient_grad");
    require_same_shape(a, grad, "l1_gradient_grad");
    const double scale = weight / static_cast<double>(a.size());
    // Replicated edge differences are identically zero and carry no
    // gradient; only interior forward differences contribute.
    for (int y = 0; y < a.h; ++y) {
        for (int x = 0; x + 1 < a.w; ++x) {
            const double d = fwd_diff_h(a, y, x) - fwd_diff_h(b, y, x);
            if (d == 0.0) continue;
            const float s = static_cast<float>(d > 0 ? scale : -scale);
            grad.at(y, x + 1) += s;
            grad.at(y, x) -= s;
        }
    }
    for (int y = 0; y + 1 < a.h; ++y) {
        for (int x = 0; x < a.w; ++x) {
            const double d = fwd_diff_v(a, y, x) - fwd_diff_v(b, y, x);
            if (d == 0.0) continue;
            const float s = static_cast<float>(d > 0 ? scale : -scale);
            grad.at(y + 1, x) += s;
            grad.at(y, x) -= s;
        }
    }
}

// ---------------------------------------------------------------------------
// SSIM

namespace {

std::vector<double> gaussian_window(int size, double sigma) {
    std::vector<double> g(static_cast<std::size_t>(size) * size);
    const int r = size / 2;
    double sum = 0.0;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double dy = y - r, dx = x - r;
            const double v = std::exp(-(dy * dy + dx * dx) / (2.0 * sigma * sigma));
            g[static_cast<std::size_t>(y) * size + x] = v;
            sum += v;
        }
    }
    for (double& v : g) v /= sum;
    return g;
}

// Window mean with replicate padding; src indexed through a clamp.
std::vector<double> blur_replicate(const std::vector<double>& src, int h,
                                   int w, const std::vector<double>& win,
                                   int size) {
    const int r = size / 2;
    const int ph = h + 2 * r, pw = w + 2 * r;
    std::vector<double> pad(static_cast<std::size_t>(ph) * pw);
    for (int y = 0; y < ph; ++y) {
        int sy = y - r;
        if (sy < 0) sy = 0;
        if (sy >= h) sy = h - 1;
        for (int x = 0; x < pw; ++x) {
            int sx = x - r;
            if (sx < 0) sx = 0;
            if (sx >= w) sx = w - 1;
            pad[static_cast<std::size_t>(y) * pw + x] =
                src[static_cast<std::size_t>(sy) * w + sx];
        }
    }
    std::vector<double> out(static_cast<std::size_t>(h) * w, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            const double* wp = win.data();
            for (int ty = 0; ty < size; ++ty) {
                const double* prow = pad.data() + static_cast<std::size_t>(y + ty) * pw + x;
                for (int tx = 0; tx < size; ++tx) acc += *wp++ * prow[tx];
            }
            out[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    return out;
}

// Adjoint of blur_replicate: full correlation into the padded domain,
// then folding padded cells back onto their clamped source pixels.
std::vector<double> blur_replicate_adjoint(const std::vector<double>& up,
                                           int h, int w,
                                           const std::vector<double>& win,
                                           int size) {
    const int r = size / 2;
    const int ph = h + 2 * r, pw = w + 2 * r;
    std::vector<double> pad(static_cast<std::size_t>(ph) * pw, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double u = up[static_cast<std::size_t>(y) * w + x];
            if (u == 0.0) continue;
            const double* wp = win.data();
            for (int ty = 0; ty < size; ++ty) {
                double* prow = pad.data() + static_cast<std::size_t>(y + ty) * pw + x;
                for (int tx = 0; tx < size; ++tx) prow[tx] += *wp++ * u;
            }
        }
    }
    std::vector<double> out(static_cast<std::size_t>(h) * w, 0.0);
    for (int y = 0; y < ph; ++y) {
        int sy = y - r;
        if (sy < 0) sy = 0;
        if (sy >= h) sy = h - 1;
        for (int x = 0; x < pw; ++x) {
            int sx = x - r;
            if (sx < 0) sx = 0;
            if (sx >= w) sx = w - 1;
            out[static_cast<std::size_t>(sy) * w + sx] +=
                pad[static_cast<std::size_t>(y) * pw + x];
        }
    }
    return out;
}

std::vector<double> to_double(const ImageGray& img) {
    return std::vector<double>(img.v.begin(), img.v.end());
}

struct SsimFields {
    std::vector<double> ua, ub, pa, pb, pab;
};

SsimFields ssim_fields(const ImageGray& a, const ImageGray& b,
                       const SsimParams& p) {
    const std::vector<double> win = gaussian_window(p.window, p.sigma);
    const std::vector<double> av = to_double(a);
    const std::vector<double> bv = to_double(b);
    std::vector<double> a2(av.size()), b2(av.size()), ab(av.size());
    for (std::size_t i = 0; i < av.size(); ++i) {
        a2[i] = av[i] * av[i];
        b2[i] = bv[i] * bv[i];
        ab[i] = av[i] * bv[i];
    }
    SsimFields f;
    f.ua = blur_replicate(av, a.h, a.w, win, p.window);
    f.ub = blur_replicate(bv, a.h, a.w, win, p.window);
    f.pa = blur_replicate(a2, a.h, a.w, win, p.window);
    f.pb = blur_replicate(b2, a.h, a.w, win, p.window);
    f.pab = blur_replicate(ab, a.h, a.w, win, p.window);
    return f;
}

} // namespace

double ssim_loss(const ImageGray& a, const ImageGray& b, const SsimParams& p) {
    require_same_shape(a, b, "ssim_loss");
    const SsimFields f = ssim_fields(a, b, p);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ua = f.ua[i], ub = f.ub[i];
        const double sa = f.pa[i] - ua * ua;
        const double sb = f.pb[i] - ub * ub;
        const double sab = f.pab[i] - ua * ub;
        const double a1 = 2.0 * ua * ub + p.c1;
        const double a2 = 2.0 * sab + p.c2;
        const double b1 = ua * ua + ub * ub + p.c1;
        const double b2 = sa + sb + p.c2;
        sum += (a1 * a2) / (b1 * b2);
    }
    return 1.0 - sum / static_cast<double>(a.size());
}

void ssim_loss_grad(const ImageGray& a, const ImageGray& b,
                    const SsimParams& p, double weight, ImageGray& grad) {
    require_same_shape(a, b, "ssim_loss_grad");
    require_same_shape(a, grad, "ssim_loss_grad");
    const SsimFields f = ssim_fields(a, b, p);
    const std::size_t n = a.size();
    // loss = 1 - mean(S); push -weight/MN through S's window statistics.
    const double coef = -weight / static_cast<double>(n);
    std::vector<double> d_ua(n), d_pa(n), d_pab(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ua = f.ua[i], ub = f.ub[i];
        const double sa = f.pa[i] - ua * ua;
        const double sb = f.pb[i] - ub * ub;
        const double sab = f.pab[i] - ua * ub;
        const double a1 = 2.0 * ua * ub + p.c1;
        const double a2 = 2.0 * sab + p.c2;
        const double b1 = ua * ua + ub * ub + p.c1;
        const double b2 = sa + sb + p.c2;
        const double inv = 1.0 / (b1 * b2);
        const double s = a1 * a2 * inv;
        // dS/dua includes the -2ub term from sab and the -2ua term from sa.
        d_ua[i] = coef * (2.0 * ub * (a2 - a1) * inv - 2.0 * ua * s * (1.0 / b1 - 1.0 / b2));
        d_pa[i] = coef * (-s / b2);
        d_pab[i] = coef * (2.0 * a1 * inv);
    }
    const std::vector<double> win = gaussian_window(p.window, p.sigma);
    const std::vector<double> g_ua = blur_replicate_adjoint(d_ua, a.h, a.w, win, p.window);
    const std::vector<double> g_pa = blur_replicate_adjoint(d_pa, a.h, a.w, win, p.window);
    const std::vector<double> g_pab = blur_replicate_adjoint(d_pab, a.h, a.w, win, p.window);
    for (std::size_t i = 0; i < n; ++i) {
        grad.v[i] += static_cast<float>(g_ua[i] +
                                        2.0 * static_cast<double>(a.v[i]) * g_pa[i] +
                                        static_cast<double>(b.v[i]) * g_pab[i]);
    }
}

// ---------------------------------------------------------------------------
// Resampling

ImageGray upsample_linear(const ImageGray& y, int factor) {
    if (factor != 2) {
        throw ValidationError("upsample_linear supports factor 2 only");
    }
    const int H = 2 * y.h, W = 2 * y.w;
    ImageGray out(H, W);
    for (int oy = 0; oy < H; ++oy) {
        const double sy = (oy + 0.5) / 2.0 - 0.5;
        int y0 = static_cast<int>(std::floor(sy));
        const double fy = sy - y0;
        const int y0c = y0 < 0 ? 0 : (y0 >= y.h ? y.h - 1 : y0);
        int y1 = y0 + 1;
        const int y1c = y1 < 0 ? 0 : (y1 >= y.h ? y.h - 1 : y1);
        for (int ox = 0; ox < W; ++ox) {
            const double sx = (ox + 0.5) / 2.0 - 0.5;
            int x0 = static_cast<int>(std::floor(sx));
            const double fx = sx - x0;
            const int x0c = x0 < 0 ? 0 : (x0 >= y.w ? y.w - 1 : x0);
            int x1 = x0 + 1;
            const int x1c = x1 < 0 ? 0 : (x1 >= y.w ? y.w - 1 : x1);
            const double v = (1 - fy) * ((1 - fx) * y.at(y0c, x0c) + fx * y.at(y0c, x1c)) +
                             fy * ((1 - fx) * y.at(y1c, x0c) + fx * y.at(y1c, x1c));
            out.at(oy, ox) = static_cast<float>(v);
        }
    }
    return out;
}

void upsample_linear_adjoint(const ImageGray& grad_out, ImageGray& grad_in) {
    if (grad_out.h != 2 * grad_in.h || grad_out.w != 2 * grad_in.w) {
        throw ValidationError("upsample_linear_adjoint: shape mismatch");
    }
    const int h = grad_in.h, w = grad_in.w;
    for (int oy = 0; oy < grad_out.h; ++oy) {
        const double sy = (oy + 0.5) / 2.0 - 0.5;
        const int y0 = static_cast<int>(std::floor(sy));
        const double fy = sy - y0;
        const int y0c = y0 < 0 ? 0 : (y0 >= h ? h - 1 : y0);
        const int y1c = y0 + 1 < 0 ? 0 : (y0 + 1 >= h ? h - 1 : y0 + 1);
        for (int ox = 0; ox < grad_out.w; ++ox) {
            const double sx = (ox + 0.5) / 2.0 - 0.5;
            const int x0 = static_cast<int>(std::floor(sx));
            const double fx = sx - x0;
            const int x0c = x0 < 0 ? 0 : (x0 >= w ? w - 1 : x0);
            const int x1c = x0 + 1 < 0 ? 0 : (x0 + 1 >= w ? w - 1 : x0 + 1);
            const double g = grad_out.at(oy, ox);
            grad_in.at(y0c, x0c) += static_cast<float>((1 - fy) * (1 - fx) * g);
            grad_in.at(y0c, x1c) += static_cast<float>((1 - fy) * fx * g);
            grad_in.at(y1c, x0c) += static_cast<float>(fy * (1 - fx) * g);
            grad_in.at(y1c, x1c) += static_cast<float>(fy * fx * g);
        }
    }
}

ImageGray downsample_linear2(const ImageGray& x) {
    if (x.h % 2 != 0 || x.w % 2 != 0) {
        throw ValidationError("downsample requires even dimensions, got " +
                              std::to_string(x.h) + "x" + std::to_string(x.w));
    }
    ImageGray out(x.h / 2, x.w / 2);
    for (int y = 0; y < out.h; ++y) {
        for (int xx = 0; xx < out.w; ++xx) {
            const double v = 0.25 * (static_cast<double>(x.at(2 * y, 2 * xx)) +
                                     x.at(2 * y, 2 * xx + 1) +
                                     x.at(2 * y + 1, 2 * xx) +
                                     x.at(2 * y + 1, 2 * xx + 1));
            out.at(y, xx) = static_cast<float>(v);
        }
    }
    return out;
}

double psnr(const ImageGray& a, const ImageGray& b) {
    require_same_shape(a, b, "psnr");
    const Image8 qa = quantize8(a);
    const Image8 qb = quantize8(b);
    uint64_t sq = 0;
    for (std::size_t i = 0; i < qa.size(); ++i) {
        const int d = static_cast<int>(qa.v[i]) - static_cast<int>(qb.v[i]);
        sq += static_cast<uint64_t>(d * d);
    }
    if (sq == 0) return std::numeric_limits<double>::infinity();
    const double mse = static_cast<double>(sq) / static_cast<double>(qa.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

} // namespace mric
