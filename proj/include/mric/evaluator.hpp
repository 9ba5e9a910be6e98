#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mric/losses.hpp"
#include "mric/network.hpp"

namespace mric {

struct RDPoint {
    std::string method;
    std::string image;
    int qf = 0;
    double bpp = 0;
    double psnr_db = 0;
    double ssim = 0;
};

// Mean SSIM index (1 - ssim_loss) over 8-bit quantized values, with the
// same window parameters as the training loss.
double ssim_index(const ImageGray& a, const ImageGray& b);

// Full pipeline: Y = f(X), JPEG at the bundle's quality factor, h(Z);
// rate charged against X's own dimensions.
RDPoint eval_pipeline(const ModelBundle& bundle, const ImageGray& x,
                      const std::string& image_id);

// Plain JPEG round-trip of quantize8(X) at qf.
RDPoint eval_jpeg_baseline(const ImageGray& x, int qf,
                           const std::string& image_id);

// Writes report.csv (`method,image,qf,bpp,psnr_db,ssim`, rows sorted by
// (method, image, qf), full precision) and one SVG rate-distortion plot
// per image under out_dir.
void emit_report(std::vector<RDPoint> points,
                 const std::filesystem::path& out_dir);

std::string render_csv(std::vector<RDPoint> points);

// PSNR of the baseline curve linearly interpolated at rate `bpp`;
// clamped to the endpoint values outside the sampled range. The curve
// must be non-empty.
double interpolate_psnr(std::vector<RDPoint> curve, double bpp);

} // namespace mric
