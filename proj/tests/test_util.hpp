#pragma once

#include <algorithm>
#include <vector>

#include "mric/network.hpp"
#include "mric/rng.hpp"

namespace mric::testutil {

// Overwrites a network's parameters with a channel-0 passthrough: every
// layer forwards its (center-tap) input on channel 0 and zeroes the rest.
// Stride-2 conv layers become nearest-neighbor downsamplers, transposed
// conv layers nearest-neighbor upsamplers. Inputs in [0,1] pass ReLU
// stacks unchanged, so the whole network computes an identity /
// down- / up-sampling map.
inline void make_passthrough(Network& net) {
    auto blocks = net.param_blocks();
    const auto& layers = net.spec().layers;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const LayerDef& def = layers[i];
        float* w = blocks[2 * i].data;
        float* b = blocks[2 * i + 1].data;
        std::fill(w, w + blocks[2 * i].n, 0.f);
        std::fill(b, b + blocks[2 * i + 1].n, 0.f);
        const int k = def.kernel;
        const int kk = k * k;
        if (def.kind == LayerKind::Conv) {
            // out channel 0 <- in channel 0, center tap
            w[(k / 2) * k + k / 2] = 1.f;
        } else {
            // duplicate each input pixel into its 2x2 block
            const int p = k / 2;
            for (int ty = p; ty <= p + 1 && ty < k; ++ty) {
                for (int tx = p; tx <= p + 1 && tx < k; ++tx) {
                    w[ty * k + tx] = 1.f;
                }
            }
            (void)kk;
        }
    }
}

inline ModelBundle passthrough_bundle(ResolutionMode mode, int qf,
                                      int features = 4) {
    ModelBundle b;
    b.mode = mode;
    b.quality_factor = qf;
    b.fdnn = Network(build_fdnn(mode, features));
    b.ppnn = Network(build_ppnn(mode, features));
    b.vcnn = Network(build_vcnn(mode, features));
    make_passthrough(b.fdnn);
    make_passthrough(b.ppnn);
    make_passthrough(b.vcnn);
    return b;
}

inline ImageGray random_image(Rng& rng, int h, int w) {
    ImageGray img(h, w);
    for (float& v : img.v) v = rng.uniform01f();
    return img;
}

} // namespace mric::testutil
