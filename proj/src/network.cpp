#include "mric/network.hpp"

#include <cstring>
#include <fstream>

#include "mric/kernels.hpp"
#include "mric/parallel.hpp"

namespace mric {

const char* to_string(ResolutionMode mode) {
    return mode == ResolutionMode::Low ? "low" : "high";
}

ResolutionMode parse_mode(const std::string& s) {
    if (s == "low" || s == "LOW") return ResolutionMode::Low;
    if (s == "high" || s == "HIGH") return ResolutionMode::High;
    throw ValidationError("unknown resolution mode: " + s);
}

std::size_t NetworkSpec::param_count() const {
    std::size_t n = 0;
    for (const LayerDef& l : layers) n += l.weight_count() + l.out_ch;
    return n;
}

void NetworkSpec::validate() const {
    if (layers.empty()) throw ValidationError("network has no layers");
    for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
        if (layers[i].out_ch != layers[i + 1].in_ch) {
            throw ValidationError("channel mismatch between layers " +
                                  std::to_string(i) + " and " +
                                  std::to_string(i + 1));
        }
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const bool last = i + 1 == layers.size();
        if (layers[i].relu == last) {
            throw ValidationError(
                "exactly the last layer must have no activation");
        }
        if (layers[i].kernel % 2 == 0) {
            throw ValidationError("kernel sizes must be odd");
        }
    }
}

NetworkSpec build_fdnn(ResolutionMode mode, int features) {
    NetworkSpec spec;
    spec.clamp_output = true;
    spec.layers.push_back({LayerKind::Conv, 9, 1, 1, features, true});
    const int second_stride = mode == ResolutionMode::Low ? 2 : 1;
    spec.layers.push_back({LayerKind::Conv, 3, second_stride, features, features, true});
    for (int i = 0; i < 5; ++i) {
        spec.layers.push_back({LayerKind::Conv, 3, 1, features, features, true});
    }
    spec.layers.push_back({LayerKind::Conv, 9, 1, features, 1, false});
    spec.validate();
    return spec;
}

NetworkSpec build_ppnn(ResolutionMode mode, int features) {
    NetworkSpec spec;
    spec.layers.push_back({LayerKind::Conv, 9, 1, 1, features, true});
    for (int i = 0; i < 6; ++i) {
        spec.layers.push_back({LayerKind::Conv, 3, 1, features, features, true});
    }
    if (mode == ResolutionMode::Low) {
        spec.layers.push_back({LayerKind::TransposedConv, 9, 2, features, 1, false});
    } else {
        spec.layers.push_back({LayerKind::Conv, 9, 1, features, 1, false});
    }
    spec.validate();
    return spec;
}

NetworkSpec build_vcnn(ResolutionMode mode, int features) {
    // Same structure as the post-processing network; parameters are an
    // independent set.
    return build_ppnn(mode, features);
}

// ---------------------------------------------------------------------------
// Plane helpers

namespace {

using kernels::Ops;

void pad_plane_zero(const float* src, int h, int w, int p, float* dst) {
    const int pw = w + 2 * p;
    std::fill(dst, dst + static_cast<std::size_t>(p) * pw, 0.f);
    float* row = dst + static_cast<std::size_t>(p) * pw;
    for (int y = 0; y < h; ++y, row += pw) {
        std::fill(row, row + p, 0.f);
        std::memcpy(row + p, src + static_cast<std::size_t>(y) * w,
                    static_cast<std::size_t>(w) * sizeof(float));
        std::fill(row + p + w, row + pw, 0.f);
    }
    std::fill(dst + static_cast<std::size_t>(p + h) * pw,
              dst + static_cast<std::size_t>(h + 2 * p) * pw, 0.f);
}

// dst (hs x ws), zeroed, with dst(2y+off, 2x+off) = src(y, x).
void stuff_plane2(const float* src, int h, int w, float* dst, int hs, int ws,
                  int off) {
    std::fill(dst, dst + static_cast<std::size_t>(hs) * ws, 0.f);
    for (int y = 0; y < h; ++y) {
        float* drow = dst + static_cast<std::size_t>(2 * y + off) * ws + off;
        const float* srow = src + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) drow[2 * x] = srow[x];
    }
}

std::vector<float> pad_all(const Tensor& t, int p) {
    const int ph = t.h + 2 * p;
    const int pw = t.w + 2 * p;
    std::vector<float> buf(static_cast<std::size_t>(t.c) * ph * pw);
    for (int ci = 0; ci < t.c; ++ci) {
        pad_plane_zero(t.plane(ci), t.h, t.w, p,
                       buf.data() + static_cast<std::size_t>(ci) * ph * pw);
    }
    return buf;
}

} // namespace

// ---------------------------------------------------------------------------
// Network

Network::Network(NetworkSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    layers_.resize(spec_.layers.size());
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        layers_[i].def = spec_.layers[i];
        layers_[i].w.assign(spec_.layers[i].weight_count(), 0.f);
        layers_[i].b.assign(spec_.layers[i].out_ch, 0.f);
    }
}

void Network::init(Rng& rng, float output_bias) {
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        Layer& l = layers_[i];
        const double fan_in =
            static_cast<double>(l.def.in_ch) * l.def.kernel * l.def.kernel;
        const double std = std::sqrt(2.0 / fan_in);
        for (float& w : l.w) w = static_cast<float>(rng.normal() * std);
        // Center each filter: with non-negative ReLU inputs, a filter whose
        // coefficient sum is far negative never fires and its parameters
        // would receive no gradient.
        const std::size_t kk =
            static_cast<std::size_t>(l.def.kernel) * l.def.kernel;
        const std::size_t fan = static_cast<std::size_t>(l.def.in_ch) * kk;
        const std::size_t filters = l.w.size() / fan;
        for (std::size_t f = 0; f < filters; ++f) {
            float* wf = l.w.data() + f * fan;
            double mean = 0.0;
            for (std::size_t j = 0; j < fan; ++j) mean += wf[j];
            mean /= static_cast<double>(fan);
            for (std::size_t j = 0; j < fan; ++j) {
                wf[j] = static_cast<float>(wf[j] - mean);
            }
        }
        std::fill(l.b.begin(), l.b.end(), 0.f);
        if (i + 1 == layers_.size()) {
            std::fill(l.b.begin(), l.b.end(), output_bias);
        }
    }
}

void Network::validate_input(const Tensor& in) const {
    if (in.c != spec_.layers.front().in_ch) {
        throw ValidationError("input has " + std::to_string(in.c) +
                              " channels, network expects " +
                              std::to_string(spec_.layers.front().in_ch));
    }
    if (in.h < 1 || in.w < 1) throw ValidationError("empty input tensor");
    int h = in.h, w = in.w;
    for (const LayerDef& l : spec_.layers) {
        if (l.kind == LayerKind::Conv && l.stride == 2) {
            if (h % 2 != 0 || w % 2 != 0) {
                throw ValidationError(
                    "half-resolution path requires even dimensions, got " +
                    std::to_string(h) + "x" + std::to_string(w));
            }
            h /= 2;
            w /= 2;
        } else if (l.kind == LayerKind::TransposedConv) {
            h *= 2;
            w *= 2;
        }
    }
}

namespace {

// Forward of one layer; out must be sized already. Weight layouts:
// Conv W[oc][ic][k*k], TransposedConv W[ic][oc][k*k].
void layer_forward(const LayerDef& def, const std::vector<float>& W,
                   const std::vector<float>& B, const Tensor& in, Tensor& out) {
    const Ops& K = kernels::ops();
    const int k = def.kernel;
    const int p = k / 2;
    const std::size_t kk = static_cast<std::size_t>(k) * k;

    if (def.kind == LayerKind::Conv) {
        const std::vector<float> pad = pad_all(in, p);
        const int pw = in.w + 2 * p;
        const std::size_t pplane = static_cast<std::size_t>(in.h + 2 * p) * pw;
        const int s = def.stride;
        parallel_for(0, static_cast<std::size_t>(def.out_ch), [&](std::size_t oc) {
            float* op = out.plane(static_cast<int>(oc));
            std::fill(op, op + out.plane_size(), B[oc]);
            for (int ic = 0; ic < def.in_ch; ++ic) {
                const float* ip = pad.data() + pplane * ic;
                const float* wk = W.data() + (oc * def.in_ch + ic) * kk;
                if (s == 1) {
                    K.conv_rows(op, out.w, out.h, ip, pw, pw, wk, k, out.w);
                } else {
                    K.conv_rows_s2(op, out.w, out.h, ip, pw, 2 * pw, wk, k,
                                   out.w);
                }
            }
        });
        return;
    }

    // Transposed conv, stride 2, output exactly 2x: equivalent to a
    // stride-1 correlation of the zero-stuffed input with the flipped
    // kernel. Offset L places the stuffed samples so that input pixel i
    // lands on output pixels 2i + t - p.
    const int L = k - 1 - p;
    const int hs = 2 * in.h + k - 1;
    const int ws = 2 * in.w + k - 1;
    std::vector<float> stuffed(static_cast<std::size_t>(in.c) * hs * ws);
    parallel_for(0, static_cast<std::size_t>(in.c), [&](std::size_t ic) {
        stuff_plane2(in.plane(static_cast<int>(ic)), in.h, in.w,
                     stuffed.data() + static_cast<std::size_t>(ic) * hs * ws, hs,
                     ws, L);
    });
    std::vector<float> wflip(W.size());
    for (int ic = 0; ic < def.in_ch; ++ic) {
        for (int oc = 0; oc < def.out_ch; ++oc) {
            const float* src = W.data() + (static_cast<std::size_t>(ic) * def.out_ch + oc) * kk;
            float* dst = wflip.data() + (static_cast<std::size_t>(ic) * def.out_ch + oc) * kk;
            for (std::size_t t = 0; t < kk; ++t) dst[t] = src[kk - 1 - t];
        }
    }
    parallel_for(0, static_cast<std::size_t>(def.out_ch), [&](std::size_t oc) {
        float* op = out.plane(static_cast<int>(oc));
        std::fill(op, op + out.plane_size(), B[oc]);
        for (int ic = 0; ic < def.in_ch; ++ic) {
            const float* sp = stuffed.data() + static_cast<std::size_t>(ic) * hs * ws;
            const float* wk = wflip.data() + (static_cast<std::size_t>(ic) * def.out_ch + oc) * kk;
            K.conv_rows(op, out.w, out.h, sp, ws, ws, wk, k, out.w);
        }
    });
}

void layer_out_shape(const LayerDef& def, int h, int w, int& oh, int& ow) {
    if (def.kind == LayerKind::TransposedConv) {
        oh = 2 * h;
        ow = 2 * w;
    } else if (def.stride == 2) {
        oh = h / 2;
        ow = w / 2;
    } else {
        oh = h;
        ow = w;
    }
}

// Gradient w.r.t. the layer input.
Tensor layer_backward_data(const LayerDef& def, const std::vector<float>& W,
                           const Tensor& dout, int in_h, int in_w) {
    const Ops& K = kernels::ops();
    const int k = def.kernel;
    const int p = k / 2;
    const std::size_t kk = static_cast<std::size_t>(k) * k;
    Tensor din(def.in_ch, in_h, in_w);

    if (def.kind == LayerKind::Conv && def.stride == 1) {
        // Correlation of the p-padded output gradient with the flipped,
        // channel-transposed kernel.
        const std::vector<float> pad = pad_all(dout, p);
        const int pw = dout.w + 2 * p;
        const std::size_t pplane = static_cast<std::size_t>(dout.h + 2 * p) * pw;
        std::vector<float> wt(W.size());
        for (int oc = 0; oc < def.out_ch; ++oc) {
            for (int ic = 0; ic < def.in_ch; ++ic) {
                const float* src = W.data() + (static_cast<std::size_t>(oc) * def.in_ch + ic) * kk;
                float* dst = wt.data() + (static_cast<std::size_t>(ic) * def.out_ch + oc) * kk;
                for (std::size_t t = 0; t < kk; ++t) dst[t] = src[kk - 1 - t];
            }
        }
        parallel_for(0, static_cast<std::size_t>(def.in_ch), [&](std::size_t ic) {
            float* dp = din.plane(static_cast<int>(ic));
            for (int oc = 0; oc < def.out_ch; ++oc) {
                const float* gp = pad.data() + pplane * oc;
                const float* wk = wt.data() + (ic * def.out_ch + oc) * kk;
                K.conv_rows(dp, in_w, in_h, gp, pw, pw, wk, k, in_w);
            }
        });
        return din;
    }

    if (def.kind == LayerKind::Conv) { // stride 2
        const int L = k - 1 - p;
        const int hs = in_h + k - 1;
        const int ws = in_w + k - 1;
        std::vector<float> stuffed(static_cast<std::size_t>(def.out_ch) * hs * ws);
        parallel_for(0, static_cast<std::size_t>(def.out_ch), [&](std::size_t oc) {
            stuff_plane2(dout.plane(static_cast<int>(oc)), dout.h, dout.w,
                         stuffed.data() + static_cast<std::size_t>(oc) * hs * ws,
                         hs, ws, L);
        });
        std::vector<float> wt(W.size());
        for (int oc = 0; oc < def.out_ch; ++oc) {
            for (int ic = 0; ic < def.in_ch; ++ic) {
                const float* src = W.data() + (static_cast<std::size_t>(oc) * def.in_ch + ic) * kk;
                float* dst = wt.data() + (static_cast<std::size_t>(ic) * def.out_ch + oc) * kk;
                for (std::size_t t = 0; t < kk; ++t) dst[t] = src[kk - 1 - t];
            }
        }
        parallel_for(0, static_cast<std::size_t>(def.in_ch), [&](std::size_t ic) {
            float* dp = din.plane(static_cast<int>(ic));
            for (int oc = 0; oc < def.out_ch; ++oc) {
                const float* sp = stuffed.data() + static_cast<std::size_t>(oc) * hs * ws;
                const float* wk = wt.data() + (ic * def.out_ch + oc) * kk;
                K.conv_rows(dp, in_w, in_h, sp, ws, ws, wk, k, in_w);
            }
        });
        return din;
    }

    // Transposed conv: the data gradient is a plain stride-2 correlation
    // of the p-padded output gradient with the unflipped kernel.
    const std::vector<float> pad = pad_all(dout, p);
    const int pw = dout.w + 2 * p;
    const std::size_t pplane = static_cast<std::size_t>(dout.h + 2 * p) * pw;
    parallel_for(0, static_cast<std::size_t>(def.in_ch), [&](std::size_t ic) {
        float* dp = din.plane(static_cast<int>(ic));
        for (int oc = 0; oc < def.out_ch; ++oc) {
            const float* gp = pad.data() + pplane * oc;
            const float* wk = W.data() + (ic * def.out_ch + oc) * kk;
            K.conv_rows_s2(dp, in_w, in_h, gp, pw, 2 * static_cast<std::size_t>(pw), wk, k, in_w);
        }
    });
    return din;
}

void layer_backward_params(const LayerDef& def, const Tensor& in,
                           const Tensor& dout, float* gw, float* gb) {
    const Ops& K = kernels::ops();
    const int k = def.kernel;
    const int p = k / 2;
    const std::size_t kk = static_cast<std::size_t>(k) * k;

    if (def.kind == LayerKind::Conv) {
        const std::vector<float> pad = pad_all(in, p);
        const int pw = in.w + 2 * p;
        const std::size_t pplane = static_cast<std::size_t>(in.h + 2 * p) * pw;
        const int s = def.stride;
        parallel_for(0, static_cast<std::size_t>(def.out_ch), [&](std::size_t oc) {
            const float* gp = dout.plane(static_cast<int>(oc));
            gb[oc] += static_cast<float>(K.sum(gp, dout.plane_size()));
            for (int ic = 0; ic < def.in_ch; ++ic) {
                const float* ip = pad.data() + pplane * ic;
                float* wk = gw + (oc * def.in_ch + ic) * kk;
                if (k == 3) {
                    double dw[9] = {};
                    if (s == 1) {
                        K.wgrad3(gp, dout.w, ip, pw, pw, dout.h, dout.w, dw);
                    } else {
                        K.wgrad3_s2(gp, dout.w, ip, pw,
                                    2 * static_cast<std::size_t>(pw), dout.h,
                                    dout.w, dw);
                    }
                    for (int t = 0; t < 9; ++t) {
                        wk[t] += static_cast<float>(dw[t]);
                    }
                    continue;
                }
                for (int ky = 0; ky < k; ++ky) {
                    for (int kx = 0; kx < k; ++kx) {
                        const float* a = ip + static_cast<std::size_t>(ky) * pw + kx;
                        double g;
                        if (s == 1) {
                            g = K.dot2d(a, pw, gp, dout.w, dout.h, dout.w);
                        } else {
                            g = K.dot2d_s2(a, 2 * static_cast<std::size_t>(pw),
                                           gp, dout.w, dout.h, dout.w);
                        }
                        wk[ky * k + kx] += static_cast<float>(g);
                    }
                }
            }
        });
        return;
    }

    // Transposed conv: gw[ic][oc][t] = sum_i in(i) * dout_pad(2i + t).
    const std::vector<float> pad = pad_all(dout, p);
    const int pw = dout.w + 2 * p;
    const std::size_t pplane = static_cast<std::size_t>(dout.h + 2 * p) * pw;
    for (int oc = 0; oc < def.out_ch; ++oc) {
        gb[oc] += static_cast<float>(
            K.sum(dout.plane(oc), dout.plane_size()));
    }
    parallel_for(0, static_cast<std::size_t>(def.in_ch), [&](std::size_t ic) {
        const float* ip = in.plane(static_cast<int>(ic));
        for (int oc = 0; oc < def.out_ch; ++oc) {
            const float* gp = pad.data() + pplane * oc;
            float* wk = gw + (ic * def.out_ch + oc) * kk;
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    const float* a = gp + static_cast<std::size_t>(ky) * pw + kx;
                    wk[ky * k + kx] += static_cast<float>(
                        K.dot2d_s2(a, 2 * static_cast<std::size_t>(pw), ip,
                                   in.w, in.h, in.w));
                }
            }
        }
    });
}

} // namespace

Tensor Network::forward(const Tensor& in) const {
    validate_input(in);
    const Ops& K = kernels::ops();
    Tensor cur = in;
    for (const Layer& l : layers_) {
        int oh = 0, ow = 0;
        layer_out_shape(l.def, cur.h, cur.w, oh, ow);
        Tensor next(l.def.out_ch, oh, ow);
        layer_forward(l.def, l.w, l.b, cur, next);
        if (l.def.relu) K.relu(next.v.data(), next.v.data(), next.size());
        cur = std::move(next);
    }
    if (spec_.clamp_output) {
        K.clamp01(cur.v.data(), cur.v.data(), cur.size());
    }
    return cur;
}

Tensor Network::forward(const Tensor& in, Trace& trace) const {
    validate_input(in);
    const Ops& K = kernels::ops();
    trace.act.clear();
    trace.act.reserve(layers_.size() + 1);
    trace.act.push_back(in);
    for (const Layer& l : layers_) {
        const Tensor& cur = trace.act.back();
        int oh = 0, ow = 0;
        layer_out_shape(l.def, cur.h, cur.w, oh, ow);
        Tensor next(l.def.out_ch, oh, ow);
        layer_forward(l.def, l.w, l.b, cur, next);
        if (l.def.relu) K.relu(next.v.data(), next.v.data(), next.size());
        trace.act.push_back(std::move(next));
    }
    Tensor out = trace.act.back();
    if (spec_.clamp_output) {
        trace.preclamp = out;
        K.clamp01(out.v.data(), out.v.data(), out.size());
    }
    return out;
}

Tensor Network::backward(const Trace& trace, const Tensor& dout,
                         NetGrads* grads) const {
    const Ops& K = kernels::ops();
    Tensor d = dout;
    if (spec_.clamp_output) {
        K.clamp01_bwd(trace.preclamp.v.data(), d.v.data(), d.v.data(), d.size());
    }
    for (int i = static_cast<int>(layers_.size()) - 1; i >= 0; --i) {
        const Layer& l = layers_[i];
        const Tensor& input = trace.act[i];
        if (l.def.relu) {
            const Tensor& post = trace.act[i + 1];
            K.relu_bwd(post.v.data(), d.v.data(), d.v.data(), d.size());
        }
        if (grads) {
            layer_backward_params(l.def, input, d,
                                  grads->blocks[2 * i].data(),
                                  grads->blocks[2 * i + 1].data());
        }
        d = layer_backward_data(l.def, l.w, d, input.h, input.w);
    }
    return d;
}

NetGrads Network::make_grads() const {
    NetGrads g;
    g.blocks.reserve(layers_.size() * 2);
    for (const Layer& l : layers_) {
        g.blocks.emplace_back(l.w.size(), 0.f);
        g.blocks.emplace_back(l.b.size(), 0.f);
    }
    return g;
}

void NetGrads::zero() {
    for (auto& b : blocks) std::fill(b.begin(), b.end(), 0.f);
}

void NetGrads::add(const NetGrads& other) {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for (std::size_t j = 0; j < blocks[i].size(); ++j) {
            blocks[i][j] += other.blocks[i][j];
        }
    }
}

void NetGrads::scale(float s) {
    for (auto& b : blocks) {
        for (float& x : b) x *= s;
    }
}

std::vector<ParamBlock> Network::param_blocks() {
    std::vector<ParamBlock> out;
    out.reserve(layers_.size() * 2);
    for (Layer& l : layers_) {
        out.push_back({l.w.data(), l.w.size()});
        out.push_back({l.b.data(), l.b.size()});
    }
    return out;
}

std::vector<ParamBlock> Network::param_blocks() const {
    auto* self = const_cast<Network*>(this);
    return self->param_blocks();
}

std::size_t Network::param_count() const { return spec_.param_count(); }

uint64_t Network::param_checksum() const {
    uint64_t h = 0xcbf29ce484222325ull;
    for (const Layer& l : layers_) {
        for (const auto* vec : {&l.w, &l.b}) {
            const auto* bytes = reinterpret_cast<const uint8_t*>(vec->data());
            const std::size_t n = vec->size() * sizeof(float);
            for (std::size_t i = 0; i < n; ++i) {
                h ^= bytes[i];
                h *= 0x100000001b3ull;
            }
        }
    }
    return h;
}

// ---------------------------------------------------------------------------
// Adam

AdamOptimizer::AdamOptimizer(Network& net, double beta1, double beta2,
                             double eps)
    : beta1_(beta1), beta2_(beta2), eps_(eps) {
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) {
        throw ValidationError("Adam betas must lie in (0,1)");
    }
    for (const ParamBlock& b : net.param_blocks()) {
        m_.emplace_back(b.n, 0.f);
        v_.emplace_back(b.n, 0.f);
    }
}

void AdamOptimizer::step(Network& net, const NetGrads& grads, double lr) {
    const kernels::Ops& K = kernels::ops();
    ++t_;
    const float inv_bc1 =
        static_cast<float>(1.0 / (1.0 - std::pow(beta1_, static_cast<double>(t_))));
    const float inv_bc2 =
        static_cast<float>(1.0 / (1.0 - std::pow(beta2_, static_cast<double>(t_))));
    auto blocks = net.param_blocks();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        K.adam_step(blocks[i].data, m_[i].data(), v_[i].data(),
                    grads.blocks[i].data(), blocks[i].n,
                    static_cast<float>(lr), static_cast<float>(beta1_),
                    static_cast<float>(beta2_), static_cast<float>(eps_),
                    inv_bc1, inv_bc2);
    }
}

// ---------------------------------------------------------------------------
// Checkpoint container

namespace {

constexpr char kMagic[4] = {'M', 'R', 'C', 'K'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& out, uint32_t v) {
    uint8_t b[4] = {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8),
                    static_cast<uint8_t>(v >> 16), static_cast<uint8_t>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, uint64_t v) {
    put_u32(out, static_cast<uint32_t>(v));
    put_u32(out, static_cast<uint32_t>(v >> 32));
}

uint32_t get_u32(std::istream& in) {
    uint8_t b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw FormatError("truncated checkpoint");
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) |
           (static_cast<uint32_t>(b[3]) << 24);
}

uint64_t get_u64(std::istream& in) {
    const uint64_t lo = get_u32(in);
    const uint64_t hi = get_u32(in);
    return lo | (hi << 32);
}

void write_network(std::ostream& out, const Network& net) {
    const NetworkSpec& spec = net.spec();
    put_u32(out, static_cast<uint32_t>(spec.layers.size()));
    out.put(spec.clamp_output ? 1 : 0);
    for (const LayerDef& l : spec.layers) {
        out.put(static_cast<char>(l.kind));
        out.put(l.relu ? 1 : 0);
        put_u32(out, static_cast<uint32_t>(l.kernel));
        put_u32(out, static_cast<uint32_t>(l.stride));
        put_u32(out, static_cast<uint32_t>(l.in_ch));
        put_u32(out, static_cast<uint32_t>(l.out_ch));
    }
    for (const ParamBlock& b : net.param_blocks()) {
        put_u64(out, b.n);
        static_assert(sizeof(float) == 4);
        out.write(reinterpret_cast<const char*>(b.data),
                  static_cast<std::streamsize>(b.n * sizeof(float)));
    }
}

Network read_network(std::istream& in) {
    const uint32_t layer_count = get_u32(in);
    if (layer_count == 0 || layer_count > 64) {
        throw FormatError("implausible layer count in checkpoint");
    }
    NetworkSpec spec;
    spec.clamp_output = in.get() == 1;
    for (uint32_t i = 0; i < layer_count; ++i) {
        LayerDef l;
        l.kind = static_cast<LayerKind>(in.get());
        l.relu = in.get() == 1;
        l.kernel = static_cast<int>(get_u32(in));
        l.stride = static_cast<int>(get_u32(in));
        l.in_ch = static_cast<int>(get_u32(in));
        l.out_ch = static_cast<int>(get_u32(in));
        spec.layers.push_back(l);
    }
    Network net(spec);
    for (ParamBlock& b : net.param_blocks()) {
        const uint64_t n = get_u64(in);
        if (n != b.n) throw FormatError("parameter block size mismatch");
        in.read(reinterpret_cast<char*>(b.data),
                static_cast<std::streamsize>(n * sizeof(float)));
        if (!in) throw FormatError("truncated checkpoint");
    }
    return net;
}

} // namespace

void save_checkpoint(const ModelBundle& bundle,
                     const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint: " + path.string());
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    out.put(static_cast<char>(bundle.mode));
    out.put(static_cast<char>(bundle.quality_factor));
    put_u64(out, bundle.train_steps);
    write_network(out, bundle.fdnn);
    write_network(out, bundle.ppnn);
    write_network(out, bundle.vcnn);
    if (!out) throw IoError("write failed: " + path.string());
}

ModelBundle load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read checkpoint: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw FormatError("not a checkpoint file: " + path.string());
    }
    const uint32_t version = get_u32(in);
    if (version != kVersion) {
        throw FormatError("unsupported checkpoint version " +
                          std::to_string(version) + " (expected " +
                          std::to_string(kVersion) + ")");
    }
    ModelBundle bundle;
    const int mode = in.get();
    if (mode != 0 && mode != 1) throw FormatError("bad mode byte");
    bundle.mode = static_cast<ResolutionMode>(mode);
    bundle.quality_factor = in.get();
    bundle.train_steps = get_u64(in);
    bundle.fdnn = read_network(in);
    bundle.ppnn = read_network(in);
    bundle.vcnn = read_network(in);
    return bundle;
}

} // namespace mric
