#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "mric/image.hpp"

namespace mric {

struct CodecConfig {
    int quality_factor = 75; // JPEG quality, [1,100]; single-channel only

    void validate() const {
        if (quality_factor < 1 || quality_factor > 100) {
            throw ValidationError("quality_factor must be in [1,100], got " +
                                  std::to_string(quality_factor));
        }
    }
};

struct RoundTripResult {
    ImageGray decoded;
    std::size_t payload_bytes = 0;
};

// round(clamp(v,0,1) * 255), half away from zero.
Image8 quantize8(const ImageGray& img);

ImageGray dequantize8(const Image8& img);

// Baseline single-channel JPEG. Deterministic: identical input and
// quality give a byte-identical stream.
std::vector<uint8_t> jpeg_encode(const Image8& img, int quality_factor);

Image8 jpeg_decode(const std::vector<uint8_t>& payload);

RoundTripResult jpeg_roundtrip(const Image8& img, const CodecConfig& cfg);

// 8 * payload_bytes / (M * N). Rate is always charged against the
// ground-truth resolution, which may exceed the encoded image's own.
double bpp(std::size_t payload_bytes, int M, int N);

uint64_t content_hash(const Image8& img);

// Round-trip cache keyed by (content hash, quality factor). Always memoizes
// in memory; when a directory is set (explicitly or via MRIC_CACHE_DIR),
// payloads are persisted as `<hash>_<qf>.jpg` plus a sidecar
// `<hash>_<qf>.meta` holding the line `hash,qf,bytes`.
class CodecCache {
  public:
    CodecCache() = default;
    explicit CodecCache(std::filesystem::path dir);

    // Reads MRIC_CACHE_DIR; empty when unset.
    static CodecCache from_env();

    RoundTripResult roundtrip(const Image8& img, const CodecConfig& cfg);

    std::size_t memory_entries() const;

  private:
    std::optional<std::vector<uint8_t>> load_disk(uint64_t hash, int qf) const;
    void store_disk(uint64_t hash, int qf,
                    const std::vector<uint8_t>& payload) const;

    std::filesystem::path dir_;
    mutable std::mutex mutex_;
    std::map<std::pair<uint64_t, int>, std::vector<uint8_t>> entries_;
};

} // namespace mric
