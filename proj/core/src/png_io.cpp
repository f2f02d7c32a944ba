// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#include "taxoseg/png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <vector>

#include "taxoseg/error.hpp"

namespace taxoseg {
namespace {

struct MemoryReader {
    const unsigned char* data;
    size_t size;
    size_t pos;
};

void read_callback(png_structp png, png_bytep out, png_size_t count) {
    auto* r = static_cast<MemoryReader*>(png_get_io_ptr(png));
    if (r->pos + count > r->size) png_error(png, "read past end of buffer");
    std::memcpy(out, r->data + r->pos, count);
    r->pos += count;
}

void write_callback(png_structp png, png_bytep data, png_size_t count) {
    auto* out = static_cast<std::string*>(png_get_io_ptr(png));
    out->append(reinterpret_cast<const char*>(data), count);
}

void flush_callback(png_structp) {}

void error_callback(png_structp png, png_const_charp message) {
    auto* err = static_cast<std::string*>(png_get_error_ptr(png));
    if (err && err->empty()) *err = message;
    longjmp(png_jmpbuf(png), 1);
}

void warning_callback(png_structp, png_const_charp) {}

}  // namespace

LabelMask load_label_mask(std::string_view bytes) {
    if (bytes.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) != 0)
        throw IoError("label mask: not a PNG stream");

    std::string error_text;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error_text, error_callback, warning_callback);
    if (!png) throw IoError("label mask: libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("label mask: libpng init failed");
    }

    MemoryReader reader{reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), 0};
    LabelMask mask;
    std::vector<png_bytep> rows;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("label mask: decode failure" + (error_text.empty() ? "" : " (" + error_text + ")"));
    }

    png_set_read_fn(png, &reader, read_callback);
    png_read_info(png, info);

    png_uint_32 width = png_get_image_width(png, info);
    png_uint_32 height = png_get_image_height(png, info);
    int bit_depth = png_get_bit_depth(png, info);
    int color_type = png_get_color_type(png, info);

    if (color_type != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("label mask: multi-channel image (expected 8-bit grayscale)");
    }
    if (bit_depth != 8) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("label mask: bit depth " + std::to_string(bit_depth) + " (expected 8)");
    }

    mask.height = static_cast<int>(height);
    mask.width = static_cast<int>(width);
    mask.data.resize(static_cast<size_t>(height) * width);
    rows.resize(height);
    for (png_uint_32 r = 0; r < height; ++r)
        rows[r] = reinterpret_cast<png_bytep>(mask.data.data() + static_cast<size_t>(r) * width);
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return mask;
}

std::string store_label_mask(const LabelMask& mask) {
    if (mask.height <= 0 || mask.width <= 0) throw Error("label mask: empty mask cannot be stored");

    std::string error_text;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error_text, error_callback, warning_callback);
    if (!png) throw IoError("label mask: libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("label mask: libpng init failed");
    }

    std::string out;
    std::vector<png_bytep> rows(mask.height);

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("label mask: encode failure" + (error_text.empty() ? "" : " (" + error_text + ")"));
    }

    png_set_write_fn(png, &out, write_callback, flush_callback);
    // Fixed settings keep the byte stream reproducible run to run.
    png_set_compression_level(png, 6);
    png_set_filter(png, 0, PNG_FILTER_NONE);
    png_set_IHDR(png, info, mask.width, mask.height, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int r = 0; r < mask.height; ++r)
        rows[r] = const_cast<png_bytep>(mask.data.data() + static_cast<size_t>(r) * mask.width);
    png_write_image(png, rows.data());
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
    return out;
}

}  // namespace taxoseg
