#pragma once

#include <optional>
#include <set>
#include <vector>

#include "scanguard/detectors.hpp"

namespace scanguard {

struct ConfusionCounts {
    long tp = 0;
    long tn = 0;
    long fp = 0;
    long fn = 0;
};

// Rates are left unset when their denominator is zero.
struct RateSummary {
    std::optional<double> sen;
    std::optional<double> spe;
    std::optional<double> acc;
};

ConfusionCounts confusion(const FlagVector& flags, const std::set<int>& truth);

RateSummary rates(const ConfusionCounts& c);
RateSummary rates(double tp, double tn, double fp, double fn);

struct Aggregate {
    double mean = 0.0;
    double sd = 0.0;   // sample (n-1) sd; 0 when n == 1
    int n = 0;         // values included
    int excluded = 0;  // undefined values dropped
};

// Column-wise mean/sd over replicate values; unset optionals are excluded
// with the exclusion count reported.
Aggregate aggregate(const std::vector<double>& values);
Aggregate aggregate(const std::vector<std::optional<double>>& values);

} // namespace scanguard
