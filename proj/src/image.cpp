#include "saliqa/image.hpp"

#include <algorithm>
#include <cmath>

#include "saliqa/errors.hpp"

namespace saliqa {

RasterImage make_image(int width, int height, int channels, double fill, int bit_depth) {
    if (width < 1 || height < 1) throw ParameterError("image dimensions must be >= 1");
    if (channels != 1 && channels != 3) throw ParameterError("channel count must be 1 or 3");
    RasterImage img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.bit_depth_origin = bit_depth;
    img.data.assign(static_cast<std::size_t>(width) * height * channels, fill);
    return img;
}

void validate_image(const RasterImage& img) {
    if (img.width < 1 || img.height < 1) throw ParameterError("image dimensions must be >= 1");
    if (img.channels != 1 && img.channels != 3) throw ParameterError("channel count must be 1 or 3");
    if (img.data.size() != static_cast<std::size_t>(img.width) * img.height * img.channels)
        throw ParameterError("image data length does not match dimensions");
    for (double v : img.data) {
        if (!std::isfinite(v)) throw DataError("image contains non-finite values");
        if (v < 0.0 || v > 1.0) throw DataError("image values must lie in [0,1]");
    }
}

RasterImage to_grayscale(const RasterImage& img) {
    if (img.channels == 1) return img;
    if (img.channels != 3) throw ParameterError("to_grayscale expects 1 or 3 channels");
    RasterImage out = make_image(img.width, img.height, 1, 0.0, img.bit_depth_origin);
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        double v = 0.299 * img.data[3 * i] + 0.587 * img.data[3 * i + 1] + 0.114 * img.data[3 * i + 2];
        out.data[i] = std::clamp(v, 0.0, 1.0);
    }
    return out;
}

std::vector<double> gaussian_kernel_1d(int kernel_size, double sigma) {
    if (kernel_size < 1 || kernel_size % 2 == 0)
        throw ParameterError("gaussian kernel size must be odd and >= 1");
    if (!(sigma > 0.0)) throw ParameterError("gaussian sigma must be > 0");
    std::vector<double> k(kernel_size);
    const int r = kernel_size / 2;
    double sum = 0.0;
    for (int i = 0; i < kernel_size; ++i) {
        double d = i - r;
        k[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
        sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
}

std::vector<double> blur_field(const std::vector<double>& field, int width, int height,
                               const std::vector<double>& kernel) {
    if (width < 1 || height < 1) throw ParameterError("field dimensions must be >= 1");
    if (field.size() != static_cast<std::size_t>(width) * height)
        throw ParameterError("field size does not match dimensions");
    const int r = static_cast<int>(kernel.size()) / 2;

    std::vector<double> tmp(field.size());
    for (int y = 0; y < height; ++y) {
        const double* row = field.data() + static_cast<std::size_t>(y) * width;
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int t = -r; t <= r; ++t) {
                int xi = std::clamp(x + t, 0, width - 1);
                acc += kernel[t + r] * row[xi];
            }
            tmp[static_cast<std::size_t>(y) * width + x] = acc;
        }
    }
    std::vector<double> out(field.size());
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int t = -r; t <= r; ++t) {
                int yi = std::clamp(y + t, 0, height - 1);
                acc += kernel[t + r] * tmp[static_cast<std::size_t>(yi) * width + x];
            }
            out[static_cast<std::size_t>(y) * width + x] = acc;
        }
    }
    return out;
}

RasterImage gaussian_blur(const RasterImage& img, int kernel_size, double sigma) {
    const std::vector<double> kernel = gaussian_kernel_1d(kernel_size, sigma);
    RasterImage out = img;
    const std::size_t n = img.pixel_count();
    std::vector<double> plane(n);
    for (int c = 0; c < img.channels; ++c) {
        for (std::size_t i = 0; i < n; ++i) plane[i] = img.data[i * img.channels + c];
        std::vector<double> blurred = blur_field(plane, img.width, img.height, kernel);
        for (std::size_t i = 0; i < n; ++i) out.data[i * img.channels + c] = blurred[i];
    }
    return out;
}

std::vector<double> resize_field(const std::vector<double>& field, int width, int height,
                                 int new_width, int new_height) {
    if (new_width < 1 || new_height < 1) throw ParameterError("resize dimensions must be >= 1");
    if (field.size() != static_cast<std::size_t>(width) * height)
        throw ParameterError("field size does not match dimensions");
    std::vector<double> out(static_cast<std::size_t>(new_width) * new_height);
    const double sx = static_cast<double>(width) / new_width;
    const double sy = static_cast<double>(height) / new_height;
    for (int y = 0; y < new_height; ++y) {
        // half-pixel-center alignment
        double fy = (y + 0.5) * sy - 0.5;
        int y0 = static_cast<int>(std::floor(fy));
        double wy = fy - y0;
        int y1 = std::clamp(y0 + 1, 0, height - 1);
        y0 = std::clamp(y0, 0, height - 1);
        for (int x = 0; x < new_width; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            int x0 = static_cast<int>(std::floor(fx));
            double wx = fx - x0;
            int x1 = std::clamp(x0 + 1, 0, width - 1);
            x0 = std::clamp(x0, 0, width - 1);
            double top = (1.0 - wx) * field[static_cast<std::size_t>(y0) * width + x0] +
                         wx * field[static_cast<std::size_t>(y0) * width + x1];
            double bot = (1.0 - wx) * field[static_cast<std::size_t>(y1) * width + x0] +
                         wx * field[static_cast<std::size_t>(y1) * width + x1];
            out[static_cast<std::size_t>(y) * new_width + x] = (1.0 - wy) * top + wy * bot;
        }
    }
    return out;
}

RasterImage resize_bilinear(const RasterImage& img, int new_width, int new_height) {
    if (new_width == img.width && new_height == img.height) return img;
    RasterImage out = make_image(new_width, new_height, img.channels, 0.0, img.bit_depth_origin);
    const std::size_t n = img.pixel_count();
    const std::size_t m = out.pixel_count();
    std::vector<double> plane(n);
    for (int c = 0; c < img.channels; ++c) {
        for (std::size_t i = 0; i < n; ++i) plane[i] = img.data[i * img.channels + c];
        std::vector<double> resized = resize_field(plane, img.width, img.height, new_width, new_height);
        for (std::size_t i = 0; i < m; ++i)
            out.data[i * img.channels + c] = std::clamp(resized[i], 0.0, 1.0);
    }
    return out;
}

}  // namespace saliqa
