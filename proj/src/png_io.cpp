#include "pccc/io/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

namespace pccc::io {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct Decoded {
    int width = 0;
    int height = 0;
    int channels = 0;   // 1 or 3 after transforms
    int bit_depth = 0;  // 8 or 16
    std::vector<uint16_t> samples;  // interleaved, native value range
};

Decoded decode_png(const std::string& path, bool want_gray) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) raise(ErrorCode::missing_file, "cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        raise(ErrorCode::io_error, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        raise(ErrorCode::parse_error, "failed to decode PNG " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    const int color_type = png_get_color_type(png, info);
    if (want_gray) {
        if (color_type & PNG_COLOR_MASK_COLOR) png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    } else {
        if (!(color_type & PNG_COLOR_MASK_COLOR)) png_set_gray_to_rgb(png);
    }
    if (png_get_bit_depth(png, info) == 16) png_set_swap(png);  // file is big-endian
    png_read_update_info(png, info);

    Decoded out;
    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.channels = png_get_channels(png, info);
    out.bit_depth = png_get_bit_depth(png, info);
    if (out.width < 1 || out.height < 1 || (out.channels != 1 && out.channels != 3)) {
        png_destroy_read_struct(&png, &info, nullptr);
        raise(ErrorCode::parse_error, "unsupported PNG layout in " + path);
    }

    const size_t row_values = static_cast<size_t>(out.width) * out.channels;
    out.samples.resize(row_values * out.height);
    std::vector<uint8_t> row8(out.bit_depth == 8 ? row_values : 0);
    std::vector<png_bytep> rows(out.height);
    if (out.bit_depth == 16) {
        for (int y = 0; y < out.height; ++y)
            rows[y] = reinterpret_cast<png_bytep>(out.samples.data() + row_values * y);
        png_read_image(png, rows.data());
    } else {
        std::vector<uint8_t> all(row_values * out.height);
        for (int y = 0; y < out.height; ++y) rows[y] = all.data() + row_values * y;
        png_read_image(png, rows.data());
        for (size_t i = 0; i < all.size(); ++i) out.samples[i] = all[i];
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

void encode_png(const std::string& path, int width, int height, int channels, int bit_depth,
                const std::vector<uint16_t>& samples) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) raise(ErrorCode::io_error, "cannot open " + path + " for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        raise(ErrorCode::io_error, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        raise(ErrorCode::io_error, "failed to encode PNG " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, width, height, bit_depth,
                 channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    if (bit_depth == 16) png_set_swap(png);

    const size_t row_values = static_cast<size_t>(width) * channels;
    if (bit_depth == 16) {
        std::vector<png_bytep> rows(height);
        for (int y = 0; y < height; ++y)
            rows[y] = reinterpret_cast<png_bytep>(
                const_cast<uint16_t*>(samples.data() + row_values * y));
        png_write_image(png, rows.data());
    } else {
        std::vector<uint8_t> all(row_values * height);
        for (size_t i = 0; i < all.size(); ++i)
            all[i] = static_cast<uint8_t>(std::min<uint16_t>(samples[i], 255));
        std::vector<png_bytep> rows(height);
        for (int y = 0; y < height; ++y) rows[y] = all.data() + row_values * y;
        png_write_image(png, rows.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

uint16_t quantize(double v, int maxval) {
    return static_cast<uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * maxval));
}

}  // namespace

imaging::SrgbImage read_srgb_png(const std::string& path) {
    const Decoded d = decode_png(path, false);
    imaging::SrgbImage img;
    img.width = d.width;
    img.height = d.height;
    img.data.resize(d.samples.size());
    const double scale = d.bit_depth == 16 ? 65535.0 : 255.0;
    for (size_t i = 0; i < d.samples.size(); ++i) img.data[i] = d.samples[i] / scale;
    return img;
}

imaging::LinearImage read_linear_png(const std::string& path) {
    const Decoded d = decode_png(path, false);
    imaging::LinearImage img;
    img.width = d.width;
    img.height = d.height;
    img.data.resize(d.samples.size());
    const double scale = d.bit_depth == 16 ? 65535.0 : 255.0;
    for (size_t i = 0; i < d.samples.size(); ++i) img.data[i] = d.samples[i] / scale;
    return img;
}

geometry::DepthMap read_depth_png(const std::string& path) {
    const Decoded d = decode_png(path, true);
    geometry::DepthMap dm;
    dm.width = d.width;
    dm.height = d.height;
    dm.d.resize(d.samples.size());
    for (size_t i = 0; i < d.samples.size(); ++i) dm.d[i] = d.samples[i] / 1000.0;  // mm to m
    return dm;
}

imaging::NeutralMask read_mask_png(const std::string& path) {
    const Decoded d = decode_png(path, true);
    imaging::NeutralMask m;
    m.width = d.width;
    m.height = d.height;
    m.mask.resize(d.samples.size());
    for (size_t i = 0; i < d.samples.size(); ++i) m.mask[i] = d.samples[i] != 0 ? 1 : 0;
    return m;
}

void write_srgb_png(const std::string& path, const imaging::SrgbImage& img) {
    std::vector<uint16_t> s(img.data.size());
    for (size_t i = 0; i < img.data.size(); ++i) s[i] = quantize(img.data[i], 255);
    encode_png(path, img.width, img.height, 3, 8, s);
}

void write_linear_png16(const std::string& path, const imaging::LinearImage& img) {
    std::vector<uint16_t> s(img.data.size());
    for (size_t i = 0; i < img.data.size(); ++i) s[i] = quantize(img.data[i], 65535);
    encode_png(path, img.width, img.height, 3, 16, s);
}

void write_depth_png16(const std::string& path, const geometry::DepthMap& dm) {
    std::vector<uint16_t> s(dm.d.size());
    for (size_t i = 0; i < dm.d.size(); ++i) {
        const double mm = std::clamp(dm.d[i] * 1000.0, 0.0, 65535.0);
        s[i] = static_cast<uint16_t>(std::lround(mm));
    }
    encode_png(path, dm.width, dm.height, 1, 16, s);
}

void write_mask_png(const std::string& path, const imaging::NeutralMask& mask) {
    std::vector<uint16_t> s(mask.mask.size());
    for (size_t i = 0; i < mask.mask.size(); ++i) s[i] = mask.mask[i] ? 255 : 0;
    encode_png(path, mask.width, mask.height, 1, 8, s);
}

}  // namespace pccc::io
