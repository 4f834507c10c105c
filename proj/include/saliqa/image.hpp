#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace saliqa {

// Row-major interleaved raster with values in [0,1]. channels is 1 or 3.
// Index layout: data[(y*width + x)*channels + c].
struct RasterImage {
    int width = 0;
    int height = 0;
    int channels = 1;
    int bit_depth_origin = 8;  // bit depth of the decoded source (8 or 16)
    std::vector<double> data;

    double at(int x, int y, int c = 0) const {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    double& at(int x, int y, int c = 0) {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

RasterImage make_image(int width, int height, int channels, double fill = 0.0, int bit_depth = 8);

// Throws ParameterError/DataError if the invariants do not hold.
void validate_image(const RasterImage& img);

// PNG (8/16-bit gray or RGB, palette expanded, alpha dropped) and
// binary PGM/PPM (P5/P6). Values are scaled to [0,1] by the source maxval.
RasterImage load_image(const std::string& path);

// 8-bit PNG, gray or RGB depending on channel count.
void save_png(const RasterImage& img, const std::string& path);

// Rec.601 luma conversion; 1-channel input is returned unchanged.
RasterImage to_grayscale(const RasterImage& img);

RasterImage gaussian_blur(const RasterImage& img, int kernel_size, double sigma);
RasterImage resize_bilinear(const RasterImage& img, int new_width, int new_height);

// Single-channel field helpers shared with the saliency and quality modules.
// The 1-D kernel is a sampled Gaussian truncated at kernel_size and
// renormalized to sum 1; filtering replicates edges.
std::vector<double> gaussian_kernel_1d(int kernel_size, double sigma);
std::vector<double> blur_field(const std::vector<double>& field, int width, int height,
                               const std::vector<double>& kernel);
std::vector<double> resize_field(const std::vector<double>& field, int width, int height,
                                 int new_width, int new_height);

}  // namespace saliqa
