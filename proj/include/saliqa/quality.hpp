#pragma once

#include <string>
#include <vector>

#include "saliqa/image.hpp"
#include "saliqa/saliency.hpp"

namespace saliqa {

struct SsimParams {
    int window_size = 11;
    double window_sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 1.0;  // images live in [0,1]
};

struct QualityScore {
    std::string metric_name;
    double value = 0.0;
    bool capped = false;  // set when zero MSE hit the PSNR cap
};

// Per-pixel SSIM field plus its mean. The map keeps image dimensions
// (Gaussian filtering with edge replication, no valid-region cropping) so
// saliency-weighted pooling aligns without bookkeeping.
struct SsimResult {
    double mean = 0.0;
    int width = 0;
    int height = 0;
    std::vector<double> map;
};

inline constexpr double kPsnrCapDb = 100.0;

// Canonical 5-scale MS-SSIM weights.
const std::vector<double>& ms_ssim_weights();

double mse(const RasterImage& ref, const RasterImage& dist);
QualityScore psnr(const RasterImage& ref, const RasterImage& dist, double cap_db = kPsnrCapDb);
SsimResult ssim(const RasterImage& ref, const RasterImage& dist, const SsimParams& params = {});
double ms_ssim(const RasterImage& ref, const RasterImage& dist, const SsimParams& params = {},
               const std::vector<double>& weights = ms_ssim_weights());

// Saliency-weighted counterparts; sal must already match the image
// dimensions (per-pixel weights, broadcast across channels).
QualityScore ew_psnr(const RasterImage& ref, const RasterImage& dist, const SaliencyMap& sal,
                     double cap_db = kPsnrCapDb);
double ew_ssim(const RasterImage& ref, const RasterImage& dist, const SaliencyMap& sal,
               const SsimParams& params = {});

}  // namespace saliqa
