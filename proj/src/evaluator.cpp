#include "mric/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "mric/codec.hpp"
#include "mric/tensor.hpp"

namespace mric {

double ssim_index(const ImageGray& a, const ImageGray& b) {
    return 1.0 - ssim_loss(dequantize8(quantize8(a)), dequantize8(quantize8(b)));
}

RDPoint eval_pipeline(const ModelBundle& bundle, const ImageGray& x,
                      const std::string& image_id) {
    if (bundle.mode == ResolutionMode::Low && (x.h % 2 != 0 || x.w % 2 != 0)) {
        throw ValidationError("low-resolution mode requires even dimensions");
    }
    const Tensor y = bundle.fdnn.forward(to_tensor(x));
    const Image8 y8 = quantize8(to_image(y));
    const std::vector<uint8_t> payload = jpeg_encode(y8, bundle.quality_factor);
    const ImageGray z = dequantize8(jpeg_decode(payload));
    const ImageGray rec = to_image(bundle.ppnn.forward(to_tensor(z)));
    if (rec.h != x.h || rec.w != x.w) {
        throw ValidationError("reconstruction shape mismatch");
    }
    RDPoint pt;
    pt.method = "pipeline";
    pt.image = image_id;
    pt.qf = bundle.quality_factor;
    pt.bpp = bpp(payload.size(), x.h, x.w);
    pt.psnr_db = psnr(rec, x);
    pt.ssim = ssim_index(rec, x);
    return pt;
}

RDPoint eval_jpeg_baseline(const ImageGray& x, int qf,
                           const std::string& image_id) {
    const RoundTripResult rt = jpeg_roundtrip(quantize8(x), CodecConfig{qf});
    RDPoint pt;
    pt.method = "jpeg";
    pt.image = image_id;
    pt.qf = qf;
    pt.bpp = bpp(rt.payload_bytes, x.h, x.w);
    pt.psnr_db = psnr(rt.decoded, x);
    pt.ssim = ssim_index(rt.decoded, x);
    return pt;
}

namespace {

void sort_points(std::vector<RDPoint>& points) {
    std::sort(points.begin(), points.end(),
              [](const RDPoint& a, const RDPoint& b) {
                  return std::tie(a.method, a.image, a.qf) <
                         std::tie(b.method, b.image, b.qf);
              });
}

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Minimal SVG scatter/line plot, one polyline per method.
std::string render_svg(const std::string& image_id,
                       const std::vector<RDPoint>& points) {
    const int W = 640, H = 480, ml = 60, mr = 20, mt = 30, mb = 50;
    double min_bpp = 1e30, max_bpp = -1e30, min_psnr = 1e30, max_psnr = -1e30;
    for (const RDPoint& p : points) {
        if (std::isinf(p.psnr_db)) continue;
        min_bpp = std::min(min_bpp, p.bpp);
        max_bpp = std::max(max_bpp, p.bpp);
        min_psnr = std::min(min_psnr, p.psnr_db);
        max_psnr = std::max(max_psnr, p.psnr_db);
    }
    if (min_bpp > max_bpp) {
        min_bpp = 0;
        max_bpp = 1;
        min_psnr = 0;
        max_psnr = 50;
    }
    const double pad_b = std::max(0.05 * (max_bpp - min_bpp), 0.01);
    const double pad_p = std::max(0.05 * (max_psnr - min_psnr), 0.5);
    min_bpp = std::max(0.0, min_bpp - pad_b);
    max_bpp += pad_b;
    min_psnr -= pad_p;
    max_psnr += pad_p;

    auto sx = [&](double b) {
        return ml + (b - min_bpp) / (max_bpp - min_bpp) * (W - ml - mr);
    };
    auto sy = [&](double p) {
        return H - mb - (p - min_psnr) / (max_psnr - min_psnr) * (H - mt - mb);
    };

    std::map<std::string, std::vector<const RDPoint*>> by_method;
    for (const RDPoint& p : points) by_method[p.method].push_back(&p);

    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                            "#ff7f0e"};
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
        << "\" height=\"" << H << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"14\">"
        << image_id << "</text>\n";
    // axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr
        << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
        << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">bpp</text>\n";
    svg << "<text x=\"18\" y=\"" << (mt + H - mb) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\" transform=\"rotate(-90 18 "
        << (mt + H - mb) / 2 << ")\">PSNR (dB)</text>\n";
    // tick labels at the extremes
    for (const double b : {min_bpp, max_bpp}) {
        svg << "<text x=\"" << sx(b) << "\" y=\"" << H - mb + 16
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"10\">";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", b);
        svg << buf << "</text>\n";
    }
    for (const double p : {min_psnr, max_psnr}) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.1f", p);
        svg << "<text x=\"" << ml - 6 << "\" y=\"" << sy(p) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"10\">"
            << buf << "</text>\n";
    }

    int ci = 0;
    int legend_y = mt + 12;
    for (auto& [method, pts] : by_method) {
        std::vector<const RDPoint*> sorted = pts;
        std::sort(sorted.begin(), sorted.end(),
                  [](const RDPoint* a, const RDPoint* b) { return a->bpp < b->bpp; });
        const char* color = colors[ci % 5];
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (const RDPoint* p : sorted) {
            if (std::isinf(p->psnr_db)) continue;
            svg << sx(p->bpp) << ',' << sy(p->psnr_db) << ' ';
        }
        svg << "\"/>\n";
        for (const RDPoint* p : sorted) {
            if (std::isinf(p->psnr_db)) continue;
            svg << "<circle cx=\"" << sx(p->bpp) << "\" cy=\"" << sy(p->psnr_db)
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        svg << "<rect x=\"" << W - mr - 120 << "\" y=\"" << legend_y - 8
            << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
        svg << "<text x=\"" << W - mr - 105 << "\" y=\"" << legend_y
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << method
            << "</text>\n";
        legend_y += 16;
        ++ci;
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace

std::string render_csv(std::vector<RDPoint> points) {
    sort_points(points);
    std::ostringstream out;
    out << "method,image,qf,bpp,psnr_db,ssim\n";
    for (const RDPoint& p : points) {
        out << p.method << ',' << p.image << ',' << p.qf << ','
            << fmt_double(p.bpp) << ',' << fmt_double(p.psnr_db) << ','
            << fmt_double(p.ssim) << '\n';
    }
    return out.str();
}

void emit_report(std::vector<RDPoint> points,
                 const std::filesystem::path& out_dir) {
    if (points.empty()) throw ValidationError("no rate-distortion points");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    sort_points(points);
    {
        std::ofstream csv(out_dir / "report.csv", std::ios::trunc);
        if (!csv) throw IoError("cannot write report: " + out_dir.string());
        csv << render_csv(points);
        if (!csv) throw IoError("write failed: " + out_dir.string());
    }
    std::map<std::string, std::vector<RDPoint>> by_image;
    for (const RDPoint& p : points) by_image[p.image].push_back(p);
    for (const auto& [image, pts] : by_image) {
        std::ofstream svg(out_dir / ("rd_" + image + ".svg"), std::ios::trunc);
        if (!svg) throw IoError("cannot write plot: " + out_dir.string());
        svg << render_svg(image, pts);
    }
}

double interpolate_psnr(std::vector<RDPoint> curve, double target_bpp) {
    if (curve.empty()) throw ValidationError("empty baseline curve");
    std::sort(curve.begin(), curve.end(),
              [](const RDPoint& a, const RDPoint& b) { return a.bpp < b.bpp; });
    if (target_bpp <= curve.front().bpp) return curve.front().psnr_db;
    if (target_bpp >= curve.back().bpp) return curve.back().psnr_db;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (target_bpp <= curve[i].bpp) {
            const double t = (target_bpp - curve[i - 1].bpp) /
                             (curve[i].bpp - curve[i - 1].bpp);
            return curve[i - 1].psnr_db +
                   t * (curve[i].psnr_db - curve[i - 1].psnr_db);
        }
    }
    return curve.back().psnr_db;
}

} // namespace mric
