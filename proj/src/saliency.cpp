#include "saliqa/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "saliqa/csv.hpp"
#include "saliqa/errors.hpp"
#include "saliqa/stats.hpp"

namespace saliqa {

namespace {

void check_map(const SaliencyMap& map) {
    if (map.width < 1 || map.height < 1) throw ParameterError("map dimensions must be >= 1");
    if (map.values.size() != static_cast<std::size_t>(map.width) * map.height)
        throw ParameterError("map value count does not match dimensions");
    for (double v : map.values) {
        if (!std::isfinite(v)) throw DataError("map contains non-finite values");
        if (v < 0.0 && map.norm_state != NormState::zscore)
            throw DataError("non-zscore map contains negative values");
    }
}

void check_same_dims(const SaliencyMap& a, const SaliencyMap& b) {
    if (a.width != b.width || a.height != b.height)
        throw ParameterError("saliency maps must share dimensions");
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v, double mean) {
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

std::vector<double> to_probability(const SaliencyMap& map, const char* role) {
    double sum = 0.0;
    for (double v : map.values) {
        if (v < 0.0) throw DegenerateError(std::string(role) + " map has negative values; cannot form a distribution");
        sum += v;
    }
    if (!(sum > 0.0)) throw DegenerateError(std::string(role) + " map has zero sum");
    std::vector<double> p(map.values);
    for (double& v : p) v /= sum;
    return p;
}

}  // namespace

SaliencyMap make_map(int width, int height, std::vector<double> values, NormState state) {
    SaliencyMap map;
    map.width = width;
    map.height = height;
    map.values = std::move(values);
    map.norm_state = state;
    check_map(map);
    return map;
}

SaliencyMap map_from_image(const RasterImage& img) {
    RasterImage gray = to_grayscale(img);
    return make_map(gray.width, gray.height, std::move(gray.data), NormState::raw);
}

RasterImage map_to_image(const SaliencyMap& map, bool minmax_for_display) {
    std::vector<double> vals = map.values;
    if (minmax_for_display) {
        auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
        double span = *hi - *lo;
        if (span > 0.0) {
            for (double& v : vals) v = (v - *lo) / span;
        } else {
            std::fill(vals.begin(), vals.end(), 0.0);
        }
    }
    RasterImage img = make_image(map.width, map.height, 1);
    for (std::size_t i = 0; i < vals.size(); ++i) img.data[i] = std::clamp(vals[i], 0.0, 1.0);
    return img;
}

SaliencyMap resize_map(const SaliencyMap& map, int new_width, int new_height) {
    check_map(map);
    if (new_width == map.width && new_height == map.height) return map;
    std::vector<double> vals = resize_field(map.values, map.width, map.height, new_width, new_height);
    SaliencyMap out;
    out.width = new_width;
    out.height = new_height;
    out.values = std::move(vals);
    out.norm_state = map.norm_state == NormState::zscore ? NormState::zscore : NormState::raw;
    return out;
}

FixationSet make_fixations(std::vector<std::pair<int, int>> points, int frame_width, int frame_height) {
    if (frame_width < 1 || frame_height < 1) throw ParameterError("fixation frame must be >= 1x1");
    for (auto [x, y] : points) {
        if (x < 0 || x >= frame_width || y < 0 || y >= frame_height)
            throw ParameterError("fixation (" + std::to_string(x) + "," + std::to_string(y) +
                                 ") outside frame " + std::to_string(frame_width) + "x" +
                                 std::to_string(frame_height));
    }
    return FixationSet{std::move(points), frame_width, frame_height};
}

FixationSet load_fixations(const std::string& path, int frame_width, int frame_height) {
    auto rows = read_csv(path);
    if (rows.empty() || rows[0].size() < 2 || rows[0][0] != "x" || rows[0][1] != "y")
        throw SchemaError("fixation CSV must start with header `x,y`: " + path);
    std::vector<std::pair<int, int>> pts;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() < 2) throw SchemaError("fixation row " + std::to_string(i) + " too short: " + path);
        try {
            pts.emplace_back(std::stoi(rows[i][0]), std::stoi(rows[i][1]));
        } catch (const std::exception&) {
            throw SchemaError("fixation row " + std::to_string(i) + " is not integer: " + path);
        }
    }
    return make_fixations(std::move(pts), frame_width, frame_height);
}

SaliencyMap normalize(const SaliencyMap& map, NormState mode) {
    check_map(map);
    SaliencyMap out = map;
    switch (mode) {
        case NormState::minmax: {
            auto [lo, hi] = std::minmax_element(out.values.begin(), out.values.end());
            double span = *hi - *lo;
            if (!(span > 0.0)) throw DegenerateError("constant map cannot be minmax-normalized");
            double low = *lo;
            for (double& v : out.values) v = (v - low) / span;
            out.norm_state = NormState::minmax;
            return out;
        }
        case NormState::probability: {
            out.values = to_probability(map, "input");
            out.norm_state = NormState::probability;
            return out;
        }
        case NormState::zscore: {
            double mu = mean_of(out.values);
            double sd = population_std(out.values, mu);
            if (!(sd > 0.0)) throw DegenerateError("constant map cannot be z-scored");
            for (double& v : out.values) v = (v - mu) / sd;
            out.norm_state = NormState::zscore;
            return out;
        }
        case NormState::raw:
            throw ParameterError("raw is not a normalization mode");
    }
    throw ParameterError("unknown normalization mode");
}

SaliencyMap center_prior(int width, int height, double sigma_frac) {
    if (width < 1 || height < 1) throw ParameterError("center prior dimensions must be >= 1");
    if (!(sigma_frac > 0.0)) throw ParameterError("sigma_frac must be > 0");
    const double cx = (width - 1) / 2.0;
    const double cy = (height - 1) / 2.0;
    const double sx = sigma_frac * width;
    const double sy = sigma_frac * height;
    std::vector<double> vals(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double dx = (x - cx) / sx;
            double dy = (y - cy) / sy;
            vals[static_cast<std::size_t>(y) * width + x] = std::exp(-0.5 * (dx * dx + dy * dy));
        }
    }
    return normalize(make_map(width, height, std::move(vals)), NormState::probability);
}

SaliencyMap map_transform(const SaliencyMap& map, const std::vector<double>& reference_histogram) {
    check_map(map);
    if (reference_histogram.empty()) throw ParameterError("reference histogram is empty");
    std::vector<double> ref = reference_histogram;
    std::sort(ref.begin(), ref.end());
    const std::size_t n = map.size();
    const std::size_t m = ref.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return map.values[a] < map.values[b]; });

    // rank r -> reference quantile r/(n-1), linearly interpolated
    auto ref_at = [&](double q) {
        double pos = q * static_cast<double>(m - 1);
        std::size_t lo = static_cast<std::size_t>(std::floor(pos));
        std::size_t hi = std::min(lo + 1, m - 1);
        double frac = pos - static_cast<double>(lo);
        return (1.0 - frac) * ref[lo] + frac * ref[hi];
    };

    std::vector<double> target(n);
    for (std::size_t r = 0; r < n; ++r) {
        double q = n == 1 ? 0.5 : static_cast<double>(r) / static_cast<double>(n - 1);
        target[r] = ref_at(q);
    }

    SaliencyMap out = map;
    out.norm_state = NormState::raw;
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && map.values[order[end]] == map.values[order[start]]) ++end;
        double avg = 0.0;
        for (std::size_t r = start; r < end; ++r) avg += target[r];
        avg /= static_cast<double>(end - start);
        for (std::size_t r = start; r < end; ++r) out.values[order[r]] = avg;
        start = end;
    }
    return out;
}

double nss(const SaliencyMap& pred, const FixationSet& fixations) {
    check_map(pred);
    if (fixations.points.empty()) throw ParameterError("NSS requires at least one fixation");
    if (fixations.frame_width != pred.width || fixations.frame_height != pred.height)
        throw ParameterError("fixation frame does not match map dimensions; resize the map first");
    double mu = mean_of(pred.values);
    double sd = population_std(pred.values, mu);
    if (!(sd > 0.0)) throw DegenerateError("constant map has undefined NSS");
    double acc = 0.0;
    for (auto [x, y] : fixations.points) acc += (pred.at(x, y) - mu) / sd;
    return acc / static_cast<double>(fixations.points.size());
}

double sim(const SaliencyMap& pred, const SaliencyMap& gt) {
    check_map(pred);
    check_map(gt);
    check_same_dims(pred, gt);
    std::vector<double> p = to_probability(pred, "pred");
    std::vector<double> q = to_probability(gt, "gt");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::min(p[i], q[i]);
    return acc;
}

double cc(const SaliencyMap& pred, const SaliencyMap& gt) {
    check_map(pred);
    check_map(gt);
    check_same_dims(pred, gt);
    return pearson(pred.values, gt.values);
}

double kld(const SaliencyMap& pred, const SaliencyMap& gt, double epsilon) {
    check_map(pred);
    check_map(gt);
    check_same_dims(pred, gt);
    std::vector<double> p = to_probability(pred, "pred");
    std::vector<double> q = to_probability(gt, "gt");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        acc += q[i] * std::log(q[i] / (p[i] + epsilon) + epsilon);
    return acc;
}

}  // namespace saliqa
