#include "saliqa/masking.hpp"

#include <algorithm>
#include <cmath>

#include "saliqa/csv.hpp"
#include "saliqa/errors.hpp"

namespace saliqa {

namespace {

bool is_masked(double value, double threshold, MaskStrategy strategy) {
    return strategy == MaskStrategy::morf ? value > threshold : value < threshold;
}

void check_spec(const MaskingSpec& spec) {
    if (spec.blur_kernel < 1 || spec.blur_kernel % 2 == 0)
        throw ParameterError("blur kernel must be odd and >= 1");
    if (spec.quantiles.empty()) throw ParameterError("masking spec needs at least one quantile");
    for (std::size_t i = 0; i < spec.quantiles.size(); ++i) {
        double q = spec.quantiles[i];
        if (q < 0.0 || q > 1.0) throw ParameterError("quantiles must lie in [0,1]");
        if (i > 0 && q <= spec.quantiles[i - 1])
            throw ParameterError("quantiles must be strictly increasing");
    }
}

}  // namespace

std::vector<double> MaskingSpec::default_quantiles() {
    std::vector<double> q;
    for (int i = 0; i <= 9; ++i) q.push_back(i / 10.0);
    q.push_back(1.0);
    return q;
}

SaliencyMap prepare_map(const SaliencyMap& map, const MaskingSpec& spec) {
    check_spec(spec);
    if (spec.blur_kernel == 1) {
        SaliencyMap out = map;
        out.norm_state = NormState::raw;
        return out;
    }
    std::vector<double> blurred = blur_field(map.values, map.width, map.height,
                                             gaussian_kernel_1d(spec.blur_kernel, spec.blur_sigma));
    SaliencyMap out;
    out.width = map.width;
    out.height = map.height;
    out.values = std::move(blurred);
    out.norm_state = NormState::raw;
    return out;
}

double threshold_for_fraction(const SaliencyMap& map, double fraction, MaskStrategy strategy) {
    if (fraction < 0.0 || fraction > 1.0) throw ParameterError("fraction must lie in [0,1]");
    if (map.values.empty()) throw ParameterError("empty map");
    std::vector<double> sorted = map.values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();

    if (strategy == MaskStrategy::morf) {
        // mask the top count = round-half-up(fraction * n) values
        std::size_t count = static_cast<std::size_t>(std::floor(fraction * n + 0.5));
        count = std::min(count, n);
        if (count == 0) return sorted[n - 1];    // nothing strictly above the max
        if (count == n) return sorted[0] - 1.0;  // everything strictly above
        return sorted[n - 1 - count];
    }
    // lerf: mask the bottom count = round-half-down(fraction * n) values
    std::size_t count = static_cast<std::size_t>(std::ceil(fraction * n - 0.5));
    count = std::min(count, n);
    if (count == 0) return sorted[0];        // nothing strictly below the min
    if (count == n) return sorted[n - 1] + 1.0;
    return sorted[count];
}

RasterImage apply_mask(const RasterImage& img, const SaliencyMap& map, double threshold,
                       MaskStrategy strategy, const FillSpec& fill) {
    if (map.width != img.width || map.height != img.height)
        throw ParameterError("mask map must match image dimensions");
    RasterImage out = img;
    double fill_values[3] = {0.0, 0.0, 0.0};
    if (fill.kind == MaskFill::dataset_mean) {
        if (img.channels == 3) {
            fill_values[0] = fill.mean[0];
            fill_values[1] = fill.mean[1];
            fill_values[2] = fill.mean[2];
        } else {
            // grayscale images get the luma of the channel means so that
            // masking commutes with luma conversion
            fill_values[0] = 0.299 * fill.mean[0] + 0.587 * fill.mean[1] + 0.114 * fill.mean[2];
        }
    }
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_masked(map.values[i], threshold, strategy)) continue;
        for (int c = 0; c < img.channels; ++c)
            out.data[i * img.channels + c] = std::clamp(fill_values[c], 0.0, 1.0);
    }
    return out;
}

double masked_fraction(const SaliencyMap& map, double threshold, MaskStrategy strategy) {
    std::size_t count = 0;
    for (double v : map.values)
        if (is_masked(v, threshold, strategy)) ++count;
    return static_cast<double>(count) / static_cast<double>(map.values.size());
}

std::vector<MaskedImage> masking_series(const RasterImage& img, const SaliencyMap& map,
                                        const MaskingSpec& spec) {
    check_spec(spec);
    if (map.width != img.width || map.height != img.height)
        throw ParameterError("map must be resized to image dimensions before masking");
    SaliencyMap prepared = prepare_map(map, spec);
    std::vector<MaskedImage> series;
    series.reserve(spec.quantiles.size());
    for (double q : spec.quantiles) {
        MaskedImage entry;
        entry.requested_fraction = q;
        entry.threshold = threshold_for_fraction(prepared, q, spec.strategy);
        entry.actual_fraction = masked_fraction(prepared, entry.threshold, spec.strategy);
        entry.image = apply_mask(img, prepared, entry.threshold, spec.strategy, spec.fill);
        series.push_back(std::move(entry));
    }
    return series;
}

PerturbationCurve load_curve(const std::string& path) {
    auto rows = read_csv(path);
    if (rows.empty() || rows[0].size() < 2 || rows[0][0] != "fraction" || rows[0][1] != "score")
        throw SchemaError("curve CSV must start with header `fraction,score`: " + path);
    PerturbationCurve curve;
    bool have_baseline = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() < 2) throw SchemaError("curve row " + std::to_string(i) + " too short: " + path);
        double fraction, score;
        try {
            fraction = std::stod(rows[i][0]);
            score = std::stod(rows[i][1]);
        } catch (const std::exception&) {
            throw SchemaError("curve row " + std::to_string(i) + " is not numeric: " + path);
        }
        if (fraction == 0.0 && !have_baseline) {
            curve.baseline = score;
            have_baseline = true;
        } else {
            curve.quantiles.push_back(fraction);
            curve.scores.push_back(score);
        }
    }
    if (!have_baseline) throw SchemaError("curve CSV lacks the baseline row at fraction 0: " + path);
    return curve;
}

double aopc(const PerturbationCurve& curve) {
    if (curve.quantiles.size() != curve.scores.size())
        throw ParameterError("curve quantile/score length mismatch");
    if (curve.scores.empty()) throw ParameterError("curve needs at least one point past the baseline");
    double acc = 0.0;
    for (double s : curve.scores) acc += curve.baseline - s;
    return acc / static_cast<double>(curve.scores.size());
}

std::string strategy_name(MaskStrategy strategy) {
    return strategy == MaskStrategy::morf ? "morf" : "lerf";
}

std::string fill_name(MaskFill fill) {
    return fill == MaskFill::black ? "black" : "mean";
}

}  // namespace saliqa
