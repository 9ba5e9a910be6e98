#include "mric/codec.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include <jpeglib.h>

namespace mric {

Image8 quantize8(const ImageGray& img) {
    Image8 out(img.h, img.w);
    for (std::size_t i = 0; i < img.size(); ++i) {
        float v = img.v[i];
        if (v < 0.f) v = 0.f;
        if (v > 1.f) v = 1.f;
        // Half away from zero; v is non-negative after the clamp.
        out.v[i] = static_cast<uint8_t>(v * 255.f + 0.5f);
    }
    return out;
}

ImageGray dequantize8(const Image8& img) {
    ImageGray out(img.h, img.w);
    for (std::size_t i = 0; i < img.size(); ++i) {
        out.v[i] = static_cast<float>(img.v[i]) / 255.f;
    }
    return out;
}

namespace {

struct JpegErrorMgr {
    jpeg_error_mgr base;
    jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    longjmp(err->jump, 1);
}

void emit_silent(j_common_ptr, int) {}

} // namespace

std::vector<uint8_t> jpeg_encode(const Image8& img, int quality_factor) {
    CodecConfig{quality_factor}.validate();
    if (img.h < 1 || img.w < 1) throw ValidationError("empty image");

    jpeg_compress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = error_exit;
    err.base.emit_message = emit_silent;

    unsigned char* buf = nullptr;
    unsigned long buf_size = 0;
    if (setjmp(err.jump)) {
        jpeg_destroy_compress(&cinfo);
        if (buf) free(buf);
        throw CodecError(std::string("JPEG encode failed: ") + err.message);
    }
    jpeg_create_compress(&cinfo);
    jpeg_mem_dest(&cinfo, &buf, &buf_size);

    cinfo.image_width = static_cast<JDIMENSION>(img.w);
    cinfo.image_height = static_cast<JDIMENSION>(img.h);
    cinfo.input_components = 1;
    cinfo.in_color_space = JCS_GRAYSCALE;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality_factor, TRUE); // baseline stream
    jpeg_start_compress(&cinfo, TRUE);
    while (cinfo.next_scanline < cinfo.image_height) {
        const uint8_t* row =
            img.v.data() + static_cast<std::size_t>(cinfo.next_scanline) * img.w;
        JSAMPROW rows[1] = {const_cast<JSAMPROW>(row)};
        jpeg_write_scanlines(&cinfo, rows, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);

    std::vector<uint8_t> payload(buf, buf + buf_size);
    free(buf);
    return payload;
}

Image8 jpeg_decode(const std::vector<uint8_t>& payload) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = error_exit;
    err.base.emit_message = emit_silent;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw CodecError(std::string("JPEG decode failed: ") + err.message);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, payload.data(), static_cast<unsigned long>(payload.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_GRAYSCALE;
    jpeg_start_decompress(&cinfo);
    Image8 out(static_cast<int>(cinfo.output_height),
               static_cast<int>(cinfo.output_width));
    while (cinfo.output_scanline < cinfo.output_height) {
        uint8_t* row =
            out.v.data() + static_cast<std::size_t>(cinfo.output_scanline) * out.w;
        JSAMPROW rows[1] = {row};
        jpeg_read_scanlines(&cinfo, rows, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return out;
}

RoundTripResult jpeg_roundtrip(const Image8& img, const CodecConfig& cfg) {
    cfg.validate();
    const std::vector<uint8_t> payload = jpeg_encode(img, cfg.quality_factor);
    const Image8 decoded = jpeg_decode(payload);
    if (decoded.h != img.h || decoded.w != img.w) {
        throw CodecError("decoded dimensions differ from input");
    }
    return RoundTripResult{dequantize8(decoded), payload.size()};
}

double bpp(std::size_t payload_bytes, int M, int N) {
    if (M <= 0 || N <= 0) throw ValidationError("bpp: zero-area image");
    return 8.0 * static_cast<double>(payload_bytes) /
           (static_cast<double>(M) * static_cast<double>(N));
}

uint64_t content_hash(const Image8& img) {
    // FNV-1a over dimensions then pixels.
    uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](uint8_t byte) {
        h ^= byte;
        h *= 0x100000001b3ull;
    };
    for (const int dim : {img.h, img.w}) {
        for (int s = 0; s < 32; s += 8) mix(static_cast<uint8_t>(dim >> s));
    }
    for (const uint8_t b : img.v) mix(b);
    return h;
}

CodecCache::CodecCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

CodecCache CodecCache::from_env() {
    if (const char* env = std::getenv("MRIC_CACHE_DIR"); env && *env) {
        return CodecCache(env);
    }
    return CodecCache();
}

std::optional<std::vector<uint8_t>> CodecCache::load_disk(uint64_t hash,
                                                          int qf) const {
    if (dir_.empty()) return std::nullopt;
    char stem[64];
    std::snprintf(stem, sizeof(stem), "%016llx_%d",
                  static_cast<unsigned long long>(hash), qf);
    const auto payload_path = dir_ / (std::string(stem) + ".jpg");
    const auto meta_path = dir_ / (std::string(stem) + ".meta");
    std::ifstream meta(meta_path);
    if (!meta) return std::nullopt;
    std::string line;
    std::getline(meta, line);
    unsigned long long meta_hash = 0;
    int meta_qf = 0;
    unsigned long long meta_bytes = 0;
    if (std::sscanf(line.c_str(), "%llx,%d,%llu", &meta_hash, &meta_qf,
                    &meta_bytes) != 3 ||
        meta_hash != hash || meta_qf != qf) {
        return std::nullopt;
    }
    std::ifstream in(payload_path, std::ios::binary);
    if (!in) return std::nullopt;
    std::vector<uint8_t> payload((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
    if (payload.size() != meta_bytes) return std::nullopt;
    return payload;
}

void CodecCache::store_disk(uint64_t hash, int qf,
                            const std::vector<uint8_t>& payload) const {
    if (dir_.empty()) return;
    char stem[64];
    std::snprintf(stem, sizeof(stem), "%016llx_%d",
                  static_cast<unsigned long long>(hash), qf);
    {
        std::ofstream out(dir_ / (std::string(stem) + ".jpg"),
                          std::ios::binary | std::ios::trunc);
        out.write(reinterpret_cast<const char*>(payload.data()),
                  static_cast<std::streamsize>(payload.size()));
    }
    std::ofstream meta(dir_ / (std::string(stem) + ".meta"), std::ios::trunc);
    char line[96];
    std::snprintf(line, sizeof(line), "%016llx,%d,%llu",
                  static_cast<unsigned long long>(hash), qf,
                  static_cast<unsigned long long>(payload.size()));
    meta << line << '\n';
}

RoundTripResult CodecCache::roundtrip(const Image8& img,
                                      const CodecConfig& cfg) {
    cfg.validate();
    const uint64_t hash = content_hash(img);
    const auto key = std::make_pair(hash, cfg.quality_factor);
    {
        std::lock_guard<std::mutex> lk(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) {
            const Image8 decoded = jpeg_decode(it->second);
            return RoundTripResult{dequantize8(decoded), it->second.size()};
        }
    }
    if (auto payload = load_disk(hash, cfg.quality_factor)) {
        std::lock_guard<std::mutex> lk(mutex_);
        auto [it, _] = entries_.emplace(key, std::move(*payload));
        const Image8 decoded = jpeg_decode(it->second);
        return RoundTripResult{dequantize8(decoded), it->second.size()};
    }
    std::vector<uint8_t> payload = jpeg_encode(img, cfg.quality_factor);
    store_disk(hash, cfg.quality_factor, payload);
    const Image8 decoded = jpeg_decode(payload);
    RoundTripResult result{dequantize8(decoded), payload.size()};
    std::lock_guard<std::mutex> lk(mutex_);
    entries_.emplace(key, std::move(payload));
    return result;
}

std::size_t CodecCache::memory_entries() const {
    std::lock_guard<std::mutex> lk(mutex_);
    return entries_.size();
}

} // namespace mric
