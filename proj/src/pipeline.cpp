#include "mric/pipeline.hpp"

#include "mric/codec.hpp"
#include "mric/tensor.hpp"

namespace mric {

namespace {

constexpr uint8_t kMagic[4] = {'M', 'R', 'I', 'C'};

void put_u16be(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

void put_u32be(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

uint16_t get_u16be(const uint8_t* p) {
    return static_cast<uint16_t>((p[0] << 8) | p[1]);
}

uint32_t get_u32be(const uint8_t* p) {
    return (static_cast<uint32_t>(p[0]) << 24) |
           (static_cast<uint32_t>(p[1]) << 16) |
           (static_cast<uint32_t>(p[2]) << 8) | static_cast<uint32_t>(p[3]);
}

void validate_pipeline_input(const ModelBundle& bundle, const ImageGray& x) {
    if (x.h < 16 || x.w < 16) {
        throw ValidationError("image must be at least 16x16, got " +
                              std::to_string(x.h) + "x" + std::to_string(x.w));
    }
    if (x.h > 0xFFFF || x.w > 0xFFFF) {
        throw ValidationError("image dimensions exceed the container's 16-bit fields");
    }
    if (bundle.mode == ResolutionMode::Low && (x.h % 2 != 0 || x.w % 2 != 0)) {
        throw ValidationError("low-resolution mode requires even dimensions, got " +
                              std::to_string(x.h) + "x" + std::to_string(x.w));
    }
}

} // namespace

std::vector<uint8_t> write_artifact(const ArtifactHeader& header,
                                    std::span<const uint8_t> payload) {
    if (header.quality_factor < 1 || header.quality_factor > 100) {
        throw ValidationError("artifact quality factor out of range");
    }
    if (header.M < 1 || header.M > 0xFFFF || header.N < 1 || header.N > 0xFFFF) {
        throw ValidationError("artifact dimensions out of range");
    }
    if (payload.size() != header.payload_len) {
        throw ValidationError("payload length field disagrees with payload");
    }
    std::vector<uint8_t> out;
    out.reserve(kArtifactHeaderSize + payload.size());
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(header.version);
    out.push_back(static_cast<uint8_t>(header.mode));
    out.push_back(static_cast<uint8_t>(header.quality_factor));
    put_u16be(out, static_cast<uint16_t>(header.M));
    put_u16be(out, static_cast<uint16_t>(header.N));
    put_u32be(out, header.payload_len);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

ArtifactHeader parse_artifact_header(std::span<const uint8_t> bytes) {
    if (bytes.size() < kArtifactHeaderSize) {
        throw FormatError("artifact truncated before header end");
    }
    if (!std::equal(kMagic, kMagic + 4, bytes.begin())) {
        throw FormatError("bad artifact magic");
    }
    ArtifactHeader h;
    h.version = bytes[4];
    if (h.version != kArtifactVersion) {
        throw FormatError("unsupported artifact version " +
                          std::to_string(h.version));
    }
    const uint8_t mode = bytes[5];
    if (mode > 1) throw FormatError("bad mode byte " + std::to_string(mode));
    h.mode = static_cast<ResolutionMode>(mode);
    h.quality_factor = bytes[6];
    if (h.quality_factor < 1 || h.quality_factor > 100) {
        throw FormatError("quality factor out of range: " +
                          std::to_string(h.quality_factor));
    }
    h.M = get_u16be(bytes.data() + 7);
    h.N = get_u16be(bytes.data() + 9);
    if (h.M < 1 || h.N < 1) throw FormatError("zero artifact dimensions");
    if (h.mode == ResolutionMode::Low && (h.M % 2 != 0 || h.N % 2 != 0)) {
        throw FormatError("odd dimensions in a half-resolution artifact");
    }
    h.payload_len = get_u32be(bytes.data() + 11);
    if (h.payload_len != bytes.size() - kArtifactHeaderSize) {
        throw FormatError("payload length field disagrees with byte count");
    }
    return h;
}

std::span<const uint8_t> artifact_payload(std::span<const uint8_t> bytes) {
    parse_artifact_header(bytes);
    return bytes.subspan(kArtifactHeaderSize);
}

std::vector<uint8_t> compress_image(const ModelBundle& bundle,
                                    const ImageGray& x, double* bpp_out) {
    validate_pipeline_input(bundle, x);
    const Tensor y = bundle.fdnn.forward(to_tensor(x));
    const Image8 y8 = quantize8(to_image(y));
    const std::vector<uint8_t> payload = jpeg_encode(y8, bundle.quality_factor);

    ArtifactHeader header;
    header.version = kArtifactVersion;
    header.mode = bundle.mode;
    header.quality_factor = bundle.quality_factor;
    header.M = x.h;
    header.N = x.w;
    header.payload_len = static_cast<uint32_t>(payload.size());
    if (bpp_out) *bpp_out = bpp(payload.size(), x.h, x.w);
    return write_artifact(header, payload);
}

ImageGray decompress_artifact(const ModelBundle& bundle,
                              std::span<const uint8_t> bytes) {
    const ArtifactHeader header = parse_artifact_header(bytes);
    if (header.mode != bundle.mode) {
        throw ValidationError(
            std::string("artifact regime mismatch: artifact is ") +
            to_string(header.mode) + "-resolution, bundle is " +
            to_string(bundle.mode) + "-resolution");
    }
    if (header.quality_factor != bundle.quality_factor) {
        throw ValidationError(
            "artifact regime mismatch: artifact quality factor " +
            std::to_string(header.quality_factor) + ", bundle " +
            std::to_string(bundle.quality_factor));
    }
    const auto payload = bytes.subspan(kArtifactHeaderSize);
    Image8 decoded;
    try {
        decoded = jpeg_decode(std::vector<uint8_t>(payload.begin(), payload.end()));
    } catch (const CodecError& e) {
        throw FormatError(std::string("artifact payload does not decode: ") +
                          e.what());
    }
    const int expect_h =
        bundle.mode == ResolutionMode::Low ? header.M / 2 : header.M;
    const int expect_w =
        bundle.mode == ResolutionMode::Low ? header.N / 2 : header.N;
    if (decoded.h != expect_h || decoded.w != expect_w) {
        throw FormatError("payload resolution disagrees with header dimensions");
    }
    const Tensor rec = bundle.ppnn.forward(to_tensor(dequantize8(decoded)));
    ImageGray out = to_image(rec);
    if (out.h != header.M || out.w != header.N) {
        throw FormatError("reconstruction does not match header dimensions");
    }
    return out;
}

} // namespace mric
