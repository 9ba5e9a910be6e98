#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mric/rng.hpp"
#include "mric/tensor.hpp"

namespace mric {

// LOW: the description network halves the spatial size and the
// restoration networks double it; HIGH: everything is size-preserving.
enum class ResolutionMode : uint8_t { Low = 0, High = 1 };

const char* to_string(ResolutionMode mode);
ResolutionMode parse_mode(const std::string& s);

enum class LayerKind : uint8_t { Conv = 0, TransposedConv = 1 };

struct LayerDef {
    LayerKind kind = LayerKind::Conv;
    int kernel = 3;
    int stride = 1;
    int in_ch = 1;
    int out_ch = 1;
    bool relu = true;

    std::size_t weight_count() const {
        return static_cast<std::size_t>(in_ch) * out_ch * kernel * kernel;
    }
};

struct NetworkSpec {
    std::vector<LayerDef> layers;
    bool clamp_output = false; // unit-range clamp after the last layer

    std::size_t param_count() const;
    void validate() const; // channel chaining, activation placement
};

// The three architectures. `features` is the hidden width; tests shrink
// it, production uses the default.
NetworkSpec build_fdnn(ResolutionMode mode, int features = 128);
NetworkSpec build_ppnn(ResolutionMode mode, int features = 128);
NetworkSpec build_vcnn(ResolutionMode mode, int features = 128);

// Mutable view over one parameter array (a layer's weights or biases).
struct ParamBlock {
    float* data;
    std::size_t n;
};

// Per-parameter-block gradient buffers, laid out like Network::param_blocks().
struct NetGrads {
    std::vector<std::vector<float>> blocks;

    void zero();
    void add(const NetGrads& other);
    void scale(float s);
};

class Network {
  public:
    Network() = default;
    explicit Network(NetworkSpec spec);

    // Fan-in-scaled normal weights, zero biases. `output_bias` seeds the
    // last layer's bias (mid-gray start for image-emitting heads).
    void init(Rng& rng, float output_bias = 0.f);

    const NetworkSpec& spec() const { return spec_; }

    // Inference path; keeps only rolling activations.
    Tensor forward(const Tensor& in) const;

    // Training path: records per-layer activations for backward().
    struct Trace {
        std::vector<Tensor> act; // act[0] = input, act[i+1] = layer i output
        Tensor preclamp;         // valid when spec.clamp_output
    };
    Tensor forward(const Tensor& in, Trace& trace) const;

    // dout is the gradient w.r.t. the forward output. Returns the gradient
    // w.r.t. the input; accumulates parameter gradients into *grads unless
    // it is null (frozen network, data gradient only).
    Tensor backward(const Trace& trace, const Tensor& dout,
                    NetGrads* grads) const;

    NetGrads make_grads() const;
    std::vector<ParamBlock> param_blocks();
    std::vector<ParamBlock> param_blocks() const; // const data, for hashing/serialization
    std::size_t param_count() const;
    uint64_t param_checksum() const;

  private:
    struct Layer {
        LayerDef def;
        std::vector<float> w; // conv: [oc][ic][k*k]; deconv: [ic][oc][k*k]
        std::vector<float> b; // [oc]
    };

    void validate_input(const Tensor& in) const;

    NetworkSpec spec_;
    std::vector<Layer> layers_;
};

// Adam with per-block first/second moment state.
class AdamOptimizer {
  public:
    AdamOptimizer(Network& net, double beta1, double beta2, double eps = 1e-8);

    void step(Network& net, const NetGrads& grads, double lr);
    int64_t steps_taken() const { return t_; }

  private:
    std::vector<std::vector<float>> m_, v_;
    double beta1_, beta2_, eps_;
    int64_t t_ = 0;
};

// Trained parameter sets plus the regime they were trained for. The
// surrogate network is kept for audit; deployment only touches the
// description and post-processing networks.
struct ModelBundle {
    ResolutionMode mode = ResolutionMode::Low;
    int quality_factor = 10;
    Network fdnn, ppnn, vcnn;
    uint64_t train_steps = 0;
};

// Versioned binary container; round-trips bit-exactly and refuses to load
// any other format version.
void save_checkpoint(const ModelBundle& bundle,
                     const std::filesystem::path& path);
ModelBundle load_checkpoint(const std::filesystem::path& path);

} // namespace mric
