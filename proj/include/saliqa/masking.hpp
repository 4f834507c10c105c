#pragma once

#include <array>
#include <string>
#include <vector>

#include "saliqa/image.hpp"
#include "saliqa/saliency.hpp"

namespace saliqa {

// morf masks pixels whose map value exceeds the threshold (most relevant
// first); lerf masks pixels strictly below it (least relevant first).
enum class MaskStrategy { morf, lerf };
enum class MaskFill { black, dataset_mean };

// Natural-image channel means used by the dataset_mean fill by default.
inline constexpr std::array<double, 3> kDatasetMeanFill = {0.485, 0.456, 0.406};

struct FillSpec {
    MaskFill kind = MaskFill::black;
    std::array<double, 3> mean = kDatasetMeanFill;
};

struct MaskingSpec {
    MaskStrategy strategy = MaskStrategy::morf;
    FillSpec fill;
    std::vector<double> quantiles = default_quantiles();
    int blur_kernel = 101;
    double blur_sigma = 5.0;

    // 0.0, 0.1, ..., 0.9, 1.0
    static std::vector<double> default_quantiles();
};

struct MaskedImage {
    double requested_fraction = 0.0;
    double actual_fraction = 0.0;
    double threshold = 0.0;
    RasterImage image;
};

struct PerturbationCurve {
    std::vector<double> quantiles;
    std::vector<double> scores;
    double baseline = 0.0;  // score at zero masking
};

// Large-kernel blur that breaks value plateaus so every quantile has a
// distinct threshold. Map must already match the target image dimensions.
SaliencyMap prepare_map(const SaliencyMap& map, const MaskingSpec& spec);

// Order-statistic threshold so the masked fraction is as close as possible
// to `fraction`. Exact half counts round up for morf and down for lerf so
// morf(f) and lerf(1-f) partition tie-free maps exactly.
double threshold_for_fraction(const SaliencyMap& map, double fraction, MaskStrategy strategy);

RasterImage apply_mask(const RasterImage& img, const SaliencyMap& map, double threshold,
                       MaskStrategy strategy, const FillSpec& fill);

double masked_fraction(const SaliencyMap& map, double threshold, MaskStrategy strategy);

// prepare_map once, then threshold + mask per quantile, in quantile order.
std::vector<MaskedImage> masking_series(const RasterImage& img, const SaliencyMap& map,
                                        const MaskingSpec& spec);

// CSV `fraction,score` with the baseline row at fraction 0.
PerturbationCurve load_curve(const std::string& path);

// Mean score drop below the baseline across quantile points.
double aopc(const PerturbationCurve& curve);

std::string strategy_name(MaskStrategy strategy);
std::string fill_name(MaskFill fill);

}  // namespace saliqa
