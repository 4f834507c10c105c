#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include "saliqa/errors.hpp"
#include "saliqa/image.hpp"

namespace saliqa {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

RasterImage read_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open file: " + path);

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8))
        throw FormatError("not a PNG file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png_create_info_struct failed");
    }

    std::vector<unsigned char> buffer;
    std::vector<png_bytep> row_ptrs;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("PNG decode failed: " + path);
    }

    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (bit_depth == 16 && std::endian::native == std::endian::little) png_set_swap(png);

    png_read_update_info(png, info);
    const int channels = png_get_channels(png, info);
    const int out_depth = png_get_bit_depth(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("unsupported PNG channel layout (" + std::to_string(channels) +
                          " channels after expansion): " + path);
    }

    const std::size_t rowbytes = png_get_rowbytes(png, info);
    buffer.resize(rowbytes * height);
    row_ptrs.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) row_ptrs[y] = buffer.data() + y * rowbytes;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    RasterImage img = make_image(static_cast<int>(width), static_cast<int>(height), channels,
                                 0.0, out_depth == 16 ? 16 : 8);
    const std::size_t count = img.data.size();
    if (out_depth == 16) {
        const auto* p = reinterpret_cast<const std::uint16_t*>(buffer.data());
        for (std::size_t i = 0; i < count; ++i) img.data[i] = p[i] / 65535.0;
    } else {
        for (std::size_t i = 0; i < count; ++i) img.data[i] = buffer[i] / 255.0;
    }
    return img;
}

int parse_pnm_int(std::istream& in, const std::string& path) {
    // skips whitespace and '#' comments between header tokens
    int ch = in.peek();
    while (ch != EOF && (std::isspace(ch) || ch == '#')) {
        if (ch == '#') {
            std::string skip;
            std::getline(in, skip);
        } else {
            in.get();
        }
        ch = in.peek();
    }
    int value = -1;
    in >> value;
    if (!in || value < 0) throw FormatError("bad PNM header: " + path);
    return value;
}

RasterImage read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
        throw FormatError("unsupported PNM variant (only binary P5/P6): " + path);
    const int channels = magic[1] == '5' ? 1 : 3;
    const int width = parse_pnm_int(in, path);
    const int height = parse_pnm_int(in, path);
    const int maxval = parse_pnm_int(in, path);
    if (width < 1 || height < 1 || maxval < 1 || maxval > 65535)
        throw FormatError("bad PNM dimensions or maxval: " + path);
    in.get();  // single whitespace before raster data

    RasterImage img = make_image(width, height, channels, 0.0, maxval <= 255 ? 8 : 16);
    const std::size_t count = img.data.size();
    const int bytes_per_sample = maxval <= 255 ? 1 : 2;
    std::vector<unsigned char> raw(count * bytes_per_sample);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
        throw FormatError("truncated PNM raster: " + path);
    if (bytes_per_sample == 1) {
        for (std::size_t i = 0; i < count; ++i) img.data[i] = raw[i] / static_cast<double>(maxval);
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            // PNM 16-bit samples are big-endian
            unsigned v = (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
            img.data[i] = v / static_cast<double>(maxval);
        }
    }
    for (double v : img.data)
        if (v > 1.0) throw FormatError("PNM sample exceeds maxval: " + path);
    return img;
}

}  // namespace

RasterImage load_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open file: " + path);
    char head[2] = {0, 0};
    probe.read(head, 2);
    probe.close();
    if (head[0] == 'P' && (head[1] == '5' || head[1] == '6')) return read_pnm(path);
    return read_png(path);
}

void save_png(const RasterImage& img, const std::string& path) {
    validate_image(img);
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot write file: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }

    const std::size_t count = img.data.size();
    std::vector<unsigned char> bytes(count);
    for (std::size_t i = 0; i < count; ++i)
        bytes[i] = static_cast<unsigned char>(std::lround(std::clamp(img.data[i], 0.0, 1.0) * 255.0));
    std::vector<png_bytep> row_ptrs(img.height);
    for (int y = 0; y < img.height; ++y)
        row_ptrs[y] = bytes.data() + static_cast<std::size_t>(y) * img.width * img.channels;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encode failed: " + path);
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 8,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace saliqa
