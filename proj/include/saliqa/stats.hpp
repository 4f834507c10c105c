#pragma once

#include <string>
#include <utility>
#include <vector>

namespace saliqa {

// One source image: (prediction, mos) pairs over its distorted versions.
struct ScoredGroup {
    std::string group_id;
    std::vector<std::pair<double, double>> items;
};

// Plain Pearson correlation; requires length >= 2 and both vectors
// non-constant (DegenerateError otherwise). Shared substrate for plcc,
// srocc and the saliency CC metric.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Fractional (average-tie) ranks, 1-based.
std::vector<double> fractional_ranks(const std::vector<double>& v);

double srocc(const std::vector<double>& x, const std::vector<double>& y);
double plcc(const std::vector<double>& x, const std::vector<double>& y);

// Per group: fraction of distinct-MOS pairs ordered the same way by the
// prediction (prediction ties count 0.5); unweighted mean over groups.
double fraccp(const std::vector<ScoredGroup>& groups);

}  // namespace saliqa
