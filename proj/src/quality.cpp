#include "saliqa/quality.hpp"

#include <algorithm>
#include <cmath>

#include "saliqa/errors.hpp"

namespace saliqa {

namespace {

void check_pair(const RasterImage& ref, const RasterImage& dist) {
    if (ref.width != dist.width || ref.height != dist.height || ref.channels != dist.channels)
        throw ParameterError("image pair must share dimensions and channel count");
}

void check_ssim_inputs(const RasterImage& ref, const RasterImage& dist, const SsimParams& p) {
    check_pair(ref, dist);
    if (ref.channels != 1) throw ParameterError("ssim expects grayscale inputs");
    if (p.window_size < 3 || p.window_size % 2 == 0)
        throw ParameterError("ssim window size must be odd and >= 3");
    if (!(p.k1 > 0.0) || !(p.k2 > 0.0) || !(p.dynamic_range > 0.0))
        throw ParameterError("ssim stabilizers and dynamic range must be > 0");
    if (ref.width < p.window_size || ref.height < p.window_size)
        throw ParameterError("image smaller than ssim window (" + std::to_string(p.window_size) +
                             "): " + std::to_string(ref.width) + "x" + std::to_string(ref.height));
}

struct SsimMaps {
    std::vector<double> full;  // luminance * contrast-structure
    std::vector<double> cs;    // contrast-structure term alone (for MS-SSIM)
};

SsimMaps ssim_maps(const RasterImage& ref, const RasterImage& dist, const SsimParams& p) {
    const int w = ref.width, h = ref.height;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    const std::vector<double> kernel = gaussian_kernel_1d(p.window_size, p.window_sigma);

    std::vector<double> xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
        xx[i] = ref.data[i] * ref.data[i];
        yy[i] = dist.data[i] * dist.data[i];
        xy[i] = ref.data[i] * dist.data[i];
    }
    std::vector<double> mu_x = blur_field(ref.data, w, h, kernel);
    std::vector<double> mu_y = blur_field(dist.data, w, h, kernel);
    std::vector<double> e_xx = blur_field(xx, w, h, kernel);
    std::vector<double> e_yy = blur_field(yy, w, h, kernel);
    std::vector<double> e_xy = blur_field(xy, w, h, kernel);

    const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
    const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);

    SsimMaps maps;
    maps.full.resize(n);
    maps.cs.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double var_x = e_xx[i] - mu_x[i] * mu_x[i];
        double var_y = e_yy[i] - mu_y[i] * mu_y[i];
        double cov = e_xy[i] - mu_x[i] * mu_y[i];
        double lum = (2.0 * mu_x[i] * mu_y[i] + c1) / (mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + c1);
        double cs = (2.0 * cov + c2) / (var_x + var_y + c2);
        maps.cs[i] = cs;
        maps.full[i] = lum * cs;
    }
    return maps;
}

double field_mean(const std::vector<double>& f) {
    double acc = 0.0;
    for (double v : f) acc += v;
    return acc / static_cast<double>(f.size());
}

RasterImage downsample2x(const RasterImage& img) {
    const int nw = img.width / 2;
    const int nh = img.height / 2;
    RasterImage out = make_image(nw, nh, 1, 0.0, img.bit_depth_origin);
    for (int y = 0; y < nh; ++y) {
        for (int x = 0; x < nw; ++x) {
            double acc = img.at(2 * x, 2 * y) + img.at(2 * x + 1, 2 * y) +
                         img.at(2 * x, 2 * y + 1) + img.at(2 * x + 1, 2 * y + 1);
            out.at(x, y) = acc / 4.0;
        }
    }
    return out;
}

double psnr_from_mse(double m, double cap_db, const char* name, QualityScore& out) {
    out.metric_name = name;
    if (m <= 0.0) {
        out.value = cap_db;
        out.capped = true;
    } else {
        out.value = 10.0 * std::log10(1.0 / m);
        out.capped = false;
    }
    return out.value;
}

}  // namespace

const std::vector<double>& ms_ssim_weights() {
    static const std::vector<double> w = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
    return w;
}

double mse(const RasterImage& ref, const RasterImage& dist) {
    check_pair(ref, dist);
    double acc = 0.0;
    for (std::size_t i = 0; i < ref.data.size(); ++i) {
        double e = ref.data[i] - dist.data[i];
        acc += e * e;
    }
    return acc / static_cast<double>(ref.data.size());
}

QualityScore psnr(const RasterImage& ref, const RasterImage& dist, double cap_db) {
    QualityScore score;
    psnr_from_mse(mse(ref, dist), cap_db, "psnr", score);
    return score;
}

SsimResult ssim(const RasterImage& ref, const RasterImage& dist, const SsimParams& params) {
    check_ssim_inputs(ref, dist, params);
    SsimMaps maps = ssim_maps(ref, dist, params);
    SsimResult res;
    res.width = ref.width;
    res.height = ref.height;
    res.mean = field_mean(maps.full);
    res.map = std::move(maps.full);
    return res;
}

double ms_ssim(const RasterImage& ref, const RasterImage& dist, const SsimParams& params,
               const std::vector<double>& weights) {
    check_pair(ref, dist);
    if (weights.empty()) throw ParameterError("ms_ssim needs at least one scale weight");
    const int scales = static_cast<int>(weights.size());
    const int min_dim = params.window_size << (scales - 1);
    if (ref.width < min_dim || ref.height < min_dim)
        throw ParameterError("image too small for " + std::to_string(scales) +
                             "-scale ms_ssim; need at least " + std::to_string(min_dim) + "x" +
                             std::to_string(min_dim));

    RasterImage a = ref, b = dist;
    double result = 1.0;
    for (int s = 0; s < scales; ++s) {
        check_ssim_inputs(a, b, params);
        SsimMaps maps = ssim_maps(a, b, params);
        // negative terms clamp to 0; fractional exponents are undefined below it
        double term = s + 1 < scales ? field_mean(maps.cs) : field_mean(maps.full);
        result *= std::pow(std::max(term, 0.0), weights[s]);
        if (s + 1 < scales) {
            a = downsample2x(a);
            b = downsample2x(b);
        }
    }
    return result;
}

QualityScore ew_psnr(const RasterImage& ref, const RasterImage& dist, const SaliencyMap& sal,
                     double cap_db) {
    check_pair(ref, dist);
    if (sal.width != ref.width || sal.height != ref.height)
        throw ParameterError("saliency map must match image dimensions; resize it first");
    double weighted = 0.0, weight_sum = 0.0;
    const std::size_t n = ref.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        double wgt = sal.values[i];
        if (wgt < 0.0) throw DegenerateError("ew_psnr weights must be nonnegative");
        for (int c = 0; c < ref.channels; ++c) {
            double e = ref.data[i * ref.channels + c] - dist.data[i * ref.channels + c];
            weighted += wgt * e * e;
            weight_sum += wgt;
        }
    }
    if (!(weight_sum > 0.0)) throw DegenerateError("ew_psnr: all-zero saliency weights");
    QualityScore score;
    psnr_from_mse(weighted / weight_sum, cap_db, "ew-psnr", score);
    return score;
}

double ew_ssim(const RasterImage& ref, const RasterImage& dist, const SaliencyMap& sal,
               const SsimParams& params) {
    SsimResult res = ssim(ref, dist, params);
    if (sal.width != res.width || sal.height != res.height)
        throw ParameterError("saliency map must match the SSIM map dimensions; resize it first");
    double weighted = 0.0, weight_sum = 0.0;
    for (std::size_t i = 0; i < res.map.size(); ++i) {
        double wgt = sal.values[i];
        if (wgt < 0.0) throw DegenerateError("ew_ssim weights must be nonnegative");
        weighted += wgt * res.map[i];
        weight_sum += wgt;
    }
    if (!(weight_sum > 0.0)) throw DegenerateError("ew_ssim: all-zero saliency weights");
    return weighted / weight_sum;
}

}  // namespace saliqa
