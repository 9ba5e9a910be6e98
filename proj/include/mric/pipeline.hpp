#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mric/network.hpp"

namespace mric {

// Self-describing bitstream: "MRIC" | version | mode | quality factor |
// ground-truth M,N (big-endian u16) | payload length (big-endian u32) |
// JPEG payload. 15-byte header, bit-exact.
struct ArtifactHeader {
    uint8_t version = 1;
    ResolutionMode mode = ResolutionMode::Low;
    int quality_factor = 10;
    int M = 0; // ground-truth rows
    int N = 0; // ground-truth cols
    uint32_t payload_len = 0;
};

constexpr std::size_t kArtifactHeaderSize = 15;
constexpr uint8_t kArtifactVersion = 1;

std::vector<uint8_t> write_artifact(const ArtifactHeader& header,
                                    std::span<const uint8_t> payload);

// Throws FormatError on bad magic/version/field values or a payload length
// that disagrees with the remaining byte count.
ArtifactHeader parse_artifact_header(std::span<const uint8_t> bytes);

std::span<const uint8_t> artifact_payload(std::span<const uint8_t> bytes);

// f(X) -> quantize -> JPEG, wrapped in the container. bpp (charged against
// X's dimensions) is returned through *bpp_out when non-null.
std::vector<uint8_t> compress_image(const ModelBundle& bundle,
                                    const ImageGray& x,
                                    double* bpp_out = nullptr);

// Container -> JPEG decode -> h(Z). Validates the bundle regime against
// the header.
ImageGray decompress_artifact(const ModelBundle& bundle,
                              std::span<const uint8_t> bytes);

} // namespace mric
