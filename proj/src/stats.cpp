#include "saliqa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "saliqa/errors.hpp"

namespace saliqa {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ParameterError("pearson: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw ParameterError("pearson: need at least 2 points");
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw DegenerateError("pearson: constant vector");
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> fractional_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && v[order[end]] == v[order[start]]) ++end;
        // tied block [start, end) shares the average of its 1-based ranks
        double avg = (static_cast<double>(start) + static_cast<double>(end - 1)) / 2.0 + 1.0;
        for (std::size_t i = start; i < end; ++i) ranks[order[i]] = avg;
        start = end;
    }
    return ranks;
}

double srocc(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ParameterError("srocc: length mismatch");
    if (x.size() < 3) throw ParameterError("srocc: need at least 3 points");
    return pearson(fractional_ranks(x), fractional_ranks(y));
}

double plcc(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ParameterError("plcc: length mismatch");
    if (x.size() < 3) throw ParameterError("plcc: need at least 3 points");
    return pearson(x, y);
}

double fraccp(const std::vector<ScoredGroup>& groups) {
    double total = 0.0;
    int scorable_groups = 0;
    for (const auto& group : groups) {
        double concordant = 0.0;
        long pairs = 0;
        const auto& items = group.items;
        for (std::size_t a = 0; a + 1 < items.size(); ++a) {
            for (std::size_t b = a + 1; b < items.size(); ++b) {
                double dm = items[a].second - items[b].second;
                if (dm == 0.0) continue;  // tied MOS gives no order
                ++pairs;
                double dp = items[a].first - items[b].first;
                if (dp == 0.0) concordant += 0.5;
                else if ((dp > 0.0) == (dm > 0.0)) concordant += 1.0;
            }
        }
        if (pairs == 0) continue;
        total += concordant / static_cast<double>(pairs);
        ++scorable_groups;
    }
    if (scorable_groups == 0)
        throw DegenerateError("fraccp: no group has a pair with distinct MOS");
    return total / static_cast<double>(scorable_groups);
}

}  // namespace saliqa
