#pragma once

#include <string>
#include <utility>
#include <vector>

#include "saliqa/image.hpp"

namespace saliqa {

enum class NormState { raw, minmax, probability, zscore };

// Nonnegative H x W field (negative values allowed only in zscore state).
struct SaliencyMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;  // row-major, size width*height
    NormState norm_state = NormState::raw;

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return values.size(); }
};

struct FixationSet {
    std::vector<std::pair<int, int>> points;  // (x, y) pixel coordinates
    int frame_width = 0;
    int frame_height = 0;
};

SaliencyMap make_map(int width, int height, std::vector<double> values,
                     NormState state = NormState::raw);
// Grayscale raster -> raw map (3-channel input converted via luma first).
SaliencyMap map_from_image(const RasterImage& img);
// minmax_for_display rescales to [0,1] before quantization so probability
// and raw maps survive the 8-bit round trip.
RasterImage map_to_image(const SaliencyMap& map, bool minmax_for_display = true);
SaliencyMap resize_map(const SaliencyMap& map, int new_width, int new_height);

// Throws ParameterError if points fall outside the frame.
FixationSet make_fixations(std::vector<std::pair<int, int>> points, int frame_width, int frame_height);
// CSV with header `x,y`; frame dimensions supplied by the caller (usually the
// paired map's dimensions).
FixationSet load_fixations(const std::string& path, int frame_width, int frame_height);

SaliencyMap normalize(const SaliencyMap& map, NormState mode);

inline constexpr double kCenterPriorSigmaFrac = 0.25;
// Isotropic Gaussian centered at ((w-1)/2, (h-1)/2), probability-normalized.
SaliencyMap center_prior(int width, int height, double sigma_frac = kCenterPriorSigmaFrac);

// Rank-preserving histogram matching against a sorted reference; tied input
// values share the averaged target value.
SaliencyMap map_transform(const SaliencyMap& map, const std::vector<double>& reference_histogram);

inline constexpr double kKldEpsilon = 1e-7;

double nss(const SaliencyMap& pred, const FixationSet& fixations);
double sim(const SaliencyMap& pred, const SaliencyMap& gt);
double cc(const SaliencyMap& pred, const SaliencyMap& gt);
double kld(const SaliencyMap& pred, const SaliencyMap& gt, double epsilon = kKldEpsilon);

}  // namespace saliqa
