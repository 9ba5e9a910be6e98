#include "mric/image_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include <jpeglib.h>
#include <png.h>

namespace mric {

namespace {

constexpr float kLumaR = 0.299f;
constexpr float kLumaG = 0.587f;
constexpr float kLumaB = 0.114f;

std::vector<uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path.string());
    return bytes;
}

ImageGray from_rows(const std::vector<uint8_t>& data, int h, int w,
                    int channels) {
    ImageGray img(h, w);
    const uint8_t* p = data.data();
    for (std::size_t i = 0; i < img.size(); ++i, p += channels) {
        float y;
        if (channels == 1) {
            y = static_cast<float>(p[0]);
        } else {
            y = kLumaR * p[0] + kLumaG * p[1] + kLumaB * p[2];
        }
        img.v[i] = y / 255.f;
    }
    return img;
}

// --- PNG ---------------------------------------------------------------

struct PngReadCtx {
    const uint8_t* data;
    std::size_t size;
    std::size_t pos;
};

void png_mem_read(png_structp png, png_bytep out, png_size_t n) {
    auto* ctx = static_cast<PngReadCtx*>(png_get_io_ptr(png));
    if (ctx->pos + n > ctx->size) {
        png_error(png, "truncated PNG stream");
    }
    std::memcpy(out, ctx->data + ctx->pos, n);
    ctx->pos += n;
}

ImageGray load_png(const std::vector<uint8_t>& bytes,
                   const std::filesystem::path& path) {
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw CodecError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw CodecError("libpng init failed");
    }
    std::vector<uint8_t> pixels;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw CodecError("PNG decode failed: " + path.string());
    }
    PngReadCtx ctx{bytes.data(), bytes.size(), 0};
    png_set_read_fn(png, &ctx, png_mem_read);
    png_read_info(png, info);

    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);

    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    if (w <= 0 || h <= 0) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ValidationError("zero-dimension image: " + path.string());
    }
    pixels.resize(static_cast<std::size_t>(h) * w * channels);
    rows.resize(h);
    for (int y = 0; y < h; ++y) {
        rows[y] = pixels.data() + static_cast<std::size_t>(y) * w * channels;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return from_rows(pixels, h, w, channels);
}

void png_mem_write(png_structp png, png_bytep data, png_size_t n) {
    auto* out = static_cast<std::vector<uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + n);
}

void png_mem_flush(png_structp) {}

// --- JPEG --------------------------------------------------------------

struct JpegErrorMgr {
    jpeg_error_mgr base;
    jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    longjmp(err->jump, 1);
}

ImageGray load_jpeg(const std::vector<uint8_t>& bytes,
                    const std::filesystem::path& path) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw CodecError("JPEG decode failed: " + path.string() + " (" +
                         err.message + ")");
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_GRAYSCALE;
    jpeg_start_decompress(&cinfo);
    const int w = static_cast<int>(cinfo.output_width);
    const int h = static_cast<int>(cinfo.output_height);
    std::vector<uint8_t> pixels(static_cast<std::size_t>(h) * w);
    while (cinfo.output_scanline < cinfo.output_height) {
        uint8_t* row = pixels.data() +
                       static_cast<std::size_t>(cinfo.output_scanline) * w;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    if (w <= 0 || h <= 0) throw ValidationError("zero-dimension image: " + path.string());
    return from_rows(pixels, h, w, 1);
}

// --- BMP (uncompressed 8/24/32-bit) -------------------------------------

uint32_t rd_u32(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) |
           (static_cast<uint32_t>(p[3]) << 24);
}

int32_t rd_i32(const uint8_t* p) { return static_cast<int32_t>(rd_u32(p)); }

uint16_t rd_u16(const uint8_t* p) {
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

ImageGray load_bmp(const std::vector<uint8_t>& bytes,
                   const std::filesystem::path& path) {
    if (bytes.size() < 54) throw CodecError("truncated BMP: " + path.string());
    const uint32_t pixel_offset = rd_u32(&bytes[10]);
    const uint32_t header_size = rd_u32(&bytes[14]);
    if (header_size < 40) throw CodecError("unsupported BMP header: " + path.string());
    const int w = rd_i32(&bytes[18]);
    int h = rd_i32(&bytes[22]);
    const uint16_t bpp = rd_u16(&bytes[28]);
    const uint32_t compression = rd_u32(&bytes[30]);
    const bool top_down = h < 0;
    if (top_down) h = -h;
    if (w <= 0 || h == 0) throw ValidationError("zero-dimension image: " + path.string());
    if (compression != 0 || (bpp != 8 && bpp != 24 && bpp != 32)) {
        throw CodecError("unsupported BMP variant: " + path.string());
    }
    // 8-bit BMPs carry a palette; entries are BGRA.
    const uint8_t* palette = nullptr;
    if (bpp == 8) {
        palette = bytes.data() + 14 + header_size;
        if (pixel_offset < 14 + header_size + 4ull * 256 &&
            pixel_offset < 14 + header_size) {
            throw CodecError("bad BMP palette: " + path.string());
        }
    }
    const int channels = bpp / 8;
    const std::size_t stride = (static_cast<std::size_t>(w) * channels + 3) & ~std::size_t{3};
    if (bytes.size() < pixel_offset + stride * h) {
        throw CodecError("truncated BMP: " + path.string());
    }
    ImageGray img(h, w);
    for (int y = 0; y < h; ++y) {
        const int src_y = top_down ? y : h - 1 - y;
        const uint8_t* row = bytes.data() + pixel_offset + stride * src_y;
        for (int x = 0; x < w; ++x) {
            float luma;
            if (bpp == 8) {
                const uint8_t* entry = palette + 4 * row[x];
                luma = kLumaB * entry[0] + kLumaG * entry[1] + kLumaR * entry[2];
            } else {
                const uint8_t* px = row + x * channels;
                luma = kLumaB * px[0] + kLumaG * px[1] + kLumaR * px[2];
            }
            img.at(y, x) = luma / 255.f;
        }
    }
    return img;
}

} // namespace

ImageGray load_image(const std::filesystem::path& path) {
    const std::vector<uint8_t> bytes = read_file(path);
    if (bytes.size() >= 8 && bytes[0] == 0x89 && bytes[1] == 'P' &&
        bytes[2] == 'N' && bytes[3] == 'G') {
        return load_png(bytes, path);
    }
    if (bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8) {
        return load_jpeg(bytes, path);
    }
    if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M') {
        return load_bmp(bytes, path);
    }
    throw CodecError("unsupported raster format: " + path.string());
}

void save_png_gray8(const std::filesystem::path& path, const Image8& img) {
    if (img.h <= 0 || img.w <= 0) throw ValidationError("zero-dimension image");
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw CodecError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw CodecError("libpng init failed");
    }
    std::vector<uint8_t> encoded;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw CodecError("PNG encode failed");
    }
    png_set_write_fn(png, &encoded, png_mem_write, png_mem_flush);
    png_set_IHDR(png, info, img.w, img.h, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.h; ++y) {
        png_write_row(png, const_cast<uint8_t*>(
                               img.v.data() + static_cast<std::size_t>(y) * img.w));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + path.string());
    out.write(reinterpret_cast<const char*>(encoded.data()),
              static_cast<std::streamsize>(encoded.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace mric
