#pragma once

#include "mric/image.hpp"

namespace mric {

// Window constants and shape for the structural-similarity term. c1/c2
// match unit-range inputs ((0.01)^2 and (0.03)^2).
struct SsimParams {
    double c1 = 0.0001;
    double c2 = 0.0009;
    int window = 11;
    double sigma = 1.5;
};

// Mean absolute difference: (1/(M*N)) * sum_i |A_i - B_i|.
double l1_content(const ImageGray& a, const ImageGray& b);

// d(l1_content)/dA, scaled by `weight`, accumulated into grad (same shape
// as a).
void l1_content_grad(const ImageGray& a, const ImageGray& b, double weight,
                     ImageGray& grad);

// Mean absolute difference of forward differences, horizontal and
// vertical, with replicate-edge handling so all M*N positions contribute
// (edge differences are zero for both inputs and cancel).
double l1_gradient(const ImageGray& a, const ImageGray& b);

void l1_gradient_grad(const ImageGray& a, const ImageGray& b, double weight,
                      ImageGray& grad);

// 1 - mean per-pixel SSIM over Gaussian windows (replicate-padded).
double ssim_loss(const ImageGray& a, const ImageGray& b,
                 const SsimParams& p = {});

// d(ssim_loss)/dA. Exact adjoint of the replicate-padded window blur, so
// finite differences match at the borders too.
void ssim_loss_grad(const ImageGray& a, const ImageGray& b,
                    const SsimParams& p, double weight, ImageGray& grad);

// Bilinear x2 with a half-pixel-aligned sampling grid, edge-clamped.
// Only factor 2 is supported.
ImageGray upsample_linear(const ImageGray& y, int factor = 2);

// Adjoint of upsample_linear (factor 2): scatters the output gradient
// back through the interpolation weights.
void upsample_linear_adjoint(const ImageGray& grad_out, ImageGray& grad_in);

// Bilinear half-size reduction (2x2 mean); used to bootstrap the
// low-resolution representation.
ImageGray downsample_linear2(const ImageGray& x);

// Peak signal-to-noise ratio over 8-bit quantized values with peak 255.
// Returns +infinity when the quantized images are identical.
double psnr(const ImageGray& a, const ImageGray& b);

} // namespace mric
