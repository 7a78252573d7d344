#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "scanguard/errors.hpp"

namespace scanguard {

// Aligned weekly observations for one (store, item).
struct PriceSeries {
    std::string store_id;
    std::string item_id;
    std::vector<int> weeks;      // strictly increasing
    std::vector<double> prices;  // > 0
    std::vector<double> volumes; // > 0

    std::size_t size() const { return prices.size(); }

    // Throws if any invariant is violated.
    void validate() const;
};

struct VolumePair {
    double prev; // V_{t-1}
    double curr; // V_t
};

// Price-change observations derived from a PriceSeries.
// Entry i monitors the change from the previous observed week to week
// t_index[i]; gap_weeks[i] records how many week indices that change spans
// (1 for adjacent weeks).
struct RatioSeries {
    std::vector<int> t_index;
    std::vector<double> ratios;     // R_t = P_t / P_{t-1}
    std::vector<double> log_ratios; // Y_t = log R_t
    std::vector<VolumePair> vol_pairs;
    std::vector<int> gap_weeks;

    std::size_t size() const { return ratios.size(); }
    bool empty() const { return ratios.empty(); }

    void append(const RatioSeries& other);
};

struct QuartileSummary {
    double q1;
    double q2;
    double q3;
};

// Ratio and log-ratio sequence for a validated series of length >= 2.
RatioSeries compute_ratios(const PriceSeries& series);

// Deterministic linear-interpolation quantile: with the sample sorted
// ascending as x_(1..n), g = (n-1)*p, i = floor(g), f = g - i, the result is
// x_(i+1)*(1-f) + x_(i+2)*f.
double quantile(std::vector<double> sample, double p);

QuartileSummary quartiles(const std::vector<double>& sample);

// Subsequence of observations whose ratio differs from 1 (|R_t - 1| > eps;
// eps = 0 means the exact binary comparison). May return an empty series.
RatioSeries tukey_filter(const RatioSeries& rs, double eps = 0.0);

} // namespace scanguard
