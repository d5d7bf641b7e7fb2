#pragma once

#include <png.h>
#include <zlib.h>

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace weft {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Palette = std::vector<std::array<std::uint8_t, 3>>;

namespace detail {

struct PngWriter {
    FILE* fp = nullptr;
    png_structp png = nullptr;
    png_infop info = nullptr;

    explicit PngWriter(const std::string& path) {
        fp = std::fopen(path.c_str(), "wb");
        if (!fp) throw IoError("cannot open for writing: " + path);
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        info = png ? png_create_info_struct(png) : nullptr;
        if (!png || !info) {
            close();
            throw IoError("libpng writer init failed");
        }
    }
    void close() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
        png = nullptr;
        info = nullptr;
        fp = nullptr;
    }
    ~PngWriter() { close(); }
};

struct PngReader {
    FILE* fp = nullptr;
    png_structp png = nullptr;
    png_infop info = nullptr;

    explicit PngReader(const std::string& path) {
        fp = std::fopen(path.c_str(), "rb");
        if (!fp) throw IoError("cannot open for reading: " + path);
        unsigned char sig[8];
        if (std::fread(sig, 1, 8, fp) != 8 || png_sig_cmp(sig, 0, 8)) {
            std::fclose(fp);
            fp = nullptr;
            throw FormatError("not a PNG file: " + path);
        }
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        info = png ? png_create_info_struct(png) : nullptr;
        if (!png || !info) {
            close();
            throw IoError("libpng reader init failed");
        }
    }
    void close() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
        png = nullptr;
        info = nullptr;
        fp = nullptr;
    }
    ~PngReader() { close(); }
};

inline bool host_is_little_endian() {
    const std::uint16_t probe = 1;
    std::uint8_t first;
    std::memcpy(&first, &probe, 1);
    return first == 1;
}

}  // namespace detail

// GCC flags locals in libpng setjmp frames as possibly clobbered; the error
// paths below only destroy and throw, so the values are never reused.
#if defined(__GNUC__) && !defined(__clang__)
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wclobbered"
#endif

inline void write_png_rgb8(const std::string& path, int w, int h, const std::uint8_t* rgb) {
    detail::PngWriter ctx(path);
    if (setjmp(png_jmpbuf(ctx.png))) throw IoError("png write failed: " + path);
    png_init_io(ctx.png, ctx.fp);
    png_set_IHDR(ctx.png, ctx.info, w, h, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    for (int y = 0; y < h; ++y)
        png_write_row(ctx.png, const_cast<png_bytep>(rgb + static_cast<size_t>(y) * w * 3));
    png_write_end(ctx.png, nullptr);
}

inline void write_png_gray16(const std::string& path, int w, int h, const std::uint16_t* gray) {
    detail::PngWriter ctx(path);
    if (setjmp(png_jmpbuf(ctx.png))) throw IoError("png write failed: " + path);
    png_init_io(ctx.png, ctx.fp);
    png_set_IHDR(ctx.png, ctx.info, w, h, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    if (detail::host_is_little_endian()) png_set_swap(ctx.png);
    for (int y = 0; y < h; ++y) {
        png_write_row(ctx.png, reinterpret_cast<png_bytep>(const_cast<std::uint16_t*>(
                                   gray + static_cast<size_t>(y) * w)));
    }
    png_write_end(ctx.png, nullptr);
}

inline void write_png_indexed(const std::string& path, int w, int h, const std::uint8_t* indices,
                              const Palette& palette) {
    if (palette.empty() || palette.size() > 256) throw IoError("palette must hold 1..256 entries");
    std::vector<png_color> plte(palette.size());
    for (size_t i = 0; i < palette.size(); ++i)
        plte[i] = {palette[i][0], palette[i][1], palette[i][2]};
    detail::PngWriter ctx(path);
    if (setjmp(png_jmpbuf(ctx.png))) throw IoError("png write failed: " + path);
    png_init_io(ctx.png, ctx.fp);
    png_set_IHDR(ctx.png, ctx.info, w, h, 8, PNG_COLOR_TYPE_PALETTE, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_PLTE(ctx.png, ctx.info, plte.data(), static_cast<int>(plte.size()));
    png_write_info(ctx.png, ctx.info);
    for (int y = 0; y < h; ++y)
        png_write_row(ctx.png, const_cast<png_bytep>(indices + static_cast<size_t>(y) * w));
    png_write_end(ctx.png, nullptr);
}

struct PngRgb8 {
    int width = 0, height = 0;
    std::vector<std::uint8_t> rgb;
};

inline PngRgb8 read_png_rgb8(const std::string& path) {
    detail::PngReader ctx(path);
    PngRgb8 out;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(ctx.png))) throw FormatError("png read failed: " + path);
    png_init_io(ctx.png, ctx.fp);
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);
    if (png_get_color_type(ctx.png, ctx.info) != PNG_COLOR_TYPE_RGB ||
        png_get_bit_depth(ctx.png, ctx.info) != 8)
        throw FormatError("expected 8-bit RGB PNG: " + path);
    out.width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
    out.height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
    out.rgb.resize(static_cast<size_t>(out.width) * out.height * 3);
    rows.resize(out.height);
    for (int y = 0; y < out.height; ++y)
        rows[y] = out.rgb.data() + static_cast<size_t>(y) * out.width * 3;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);
    return out;
}

struct PngGray16 {
    int width = 0, height = 0;
    std::vector<std::uint16_t> gray;
};

inline PngGray16 read_png_gray16(const std::string& path) {
    detail::PngReader ctx(path);
    PngGray16 out;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(ctx.png))) throw FormatError("png read failed: " + path);
    png_init_io(ctx.png, ctx.fp);
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);
    if (png_get_color_type(ctx.png, ctx.info) != PNG_COLOR_TYPE_GRAY ||
        png_get_bit_depth(ctx.png, ctx.info) != 16)
        throw FormatError("expected 16-bit grayscale PNG: " + path);
    if (detail::host_is_little_endian()) png_set_swap(ctx.png);
    out.width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
    out.height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
    out.gray.resize(static_cast<size_t>(out.width) * out.height);
    rows.resize(out.height);
    for (int y = 0; y < out.height; ++y)
        rows[y] = reinterpret_cast<png_bytep>(out.gray.data() + static_cast<size_t>(y) * out.width);
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);
    return out;
}

struct PngIndexed {
    int width = 0, height = 0;
    std::vector<std::uint8_t> indices;
    Palette palette;
};

inline PngIndexed read_png_indexed(const std::string& path) {
    detail::PngReader ctx(path);
    PngIndexed out;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(ctx.png))) throw FormatError("png read failed: " + path);
    png_init_io(ctx.png, ctx.fp);
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);
    if (png_get_color_type(ctx.png, ctx.info) != PNG_COLOR_TYPE_PALETTE)
        throw FormatError("expected indexed PNG: " + path);
    if (png_get_bit_depth(ctx.png, ctx.info) < 8) png_set_packing(ctx.png);
    out.width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
    out.height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
    png_colorp plte = nullptr;
    int n_plte = 0;
    png_get_PLTE(ctx.png, ctx.info, &plte, &n_plte);
    for (int i = 0; i < n_plte; ++i)
        out.palette.push_back({plte[i].red, plte[i].green, plte[i].blue});
    out.indices.resize(static_cast<size_t>(out.width) * out.height);
    rows.resize(out.height);
    for (int y = 0; y < out.height; ++y)
        rows[y] = out.indices.data() + static_cast<size_t>(y) * out.width;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);
    return out;
}

// Any gray/rgb/palette PNG decoded to interleaved RGB floats in [0,1].
// No transfer-function conversion is applied here; bit_depth reports the
// source precision so callers can linearize 8-bit content themselves.
struct DecodedRgb {
    int width = 0, height = 0;
    int bit_depth = 8;
    std::vector<float> rgb;
};

inline DecodedRgb read_png_any_rgb(const std::string& path) {
    detail::PngReader ctx(path);
    DecodedRgb out;
    std::vector<std::uint8_t> buf;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(ctx.png))) throw FormatError("png read failed: " + path);
    png_init_io(ctx.png, ctx.fp);
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);

    png_set_expand(ctx.png);  // palette -> rgb, low-bit gray -> 8
    if (png_get_color_type(ctx.png, ctx.info) == PNG_COLOR_TYPE_GRAY ||
        png_get_color_type(ctx.png, ctx.info) == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(ctx.png);
    png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    out.width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
    out.height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
    out.bit_depth = png_get_bit_depth(ctx.png, ctx.info);
    const size_t stride = png_get_rowbytes(ctx.png, ctx.info);
    buf.resize(stride * out.height);
    rows.resize(out.height);
    for (int y = 0; y < out.height; ++y) rows[y] = buf.data() + stride * y;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);

    const size_t n = static_cast<size_t>(out.width) * out.height * 3;
    out.rgb.resize(n);
    if (out.bit_depth == 16) {
        for (size_t i = 0; i < n; ++i) {
            const std::uint16_t hi = buf[2 * i], lo = buf[2 * i + 1];  // PNG is big-endian
            out.rgb[i] = static_cast<float>((hi << 8) | lo) / 65535.0f;
        }
    } else {
        for (size_t i = 0; i < n; ++i) out.rgb[i] = static_cast<float>(buf[i]) / 255.0f;
    }
    return out;
}

#if defined(__GNUC__) && !defined(__clang__)
#pragma GCC diagnostic pop
#endif

// Grayscale PFM: "Pf", dimensions, negative scale for little-endian payload,
// rows stored bottom-up. Floats survive a round trip bitwise.
inline void write_pfm_gray(const std::string& path, int w, int h, const float* data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "Pf\n" << w << " " << h << "\n-1.0\n";
    for (int y = h - 1; y >= 0; --y)
        out.write(reinterpret_cast<const char*>(data + static_cast<size_t>(y) * w),
                  static_cast<std::streamsize>(sizeof(float)) * w);
    if (!out) throw IoError("short write: " + path);
}

struct PfmGray {
    int width = 0, height = 0;
    std::vector<float> data;
};

inline PfmGray read_pfm_gray(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::string magic;
    in >> magic;
    if (magic != "Pf") throw FormatError("not a grayscale PFM: " + path);
    PfmGray out;
    double scale = 0.0;
    in >> out.width >> out.height >> scale;
    if (!in || out.width <= 0 || out.height <= 0) throw FormatError("bad PFM header: " + path);
    if (scale >= 0.0) throw FormatError("big-endian PFM unsupported: " + path);
    in.ignore(1);  // single whitespace after the scale
    out.data.resize(static_cast<size_t>(out.width) * out.height);
    for (int y = out.height - 1; y >= 0; --y) {
        in.read(reinterpret_cast<char*>(out.data.data() + static_cast<size_t>(y) * out.width),
                static_cast<std::streamsize>(sizeof(float)) * out.width);
    }
    if (!in) throw FormatError("truncated PFM payload: " + path);
    return out;
}

inline std::uint32_t crc32_of_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::uint32_t crc = crc32(0L, Z_NULL, 0);
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        crc = crc32(crc, reinterpret_cast<const Bytef*>(buf), static_cast<uInt>(in.gcount()));
        if (in.eof()) break;
    }
    return crc;
}

}  // namespace weft
