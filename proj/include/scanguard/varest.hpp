#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "scanguard/core.hpp"

namespace scanguard {

struct Bandwidth {
    double h1;
    double h2;
};

// Bivariate local-constant (Nadaraya-Watson) variance surface: training
// triples (v1, v2, y^2) plus a product-Gaussian bandwidth pair.
struct VarianceSurface {
    std::vector<std::array<double, 3>> train; // {v1, v2, ysq}
    Bandwidth bandwidth{1.0, 1.0};
};

struct BandwidthSearchConfig {
    int grid_points_per_dim = 16;
    double span_lo = 1.0 / 8.0; // multiplicative range around the pilot
    double span_hi = 8.0;
};

struct LoocvResult {
    double error = 0.0;
    int underflow_count = 0; // leave-one-out cells whose weight sum vanished
};

// Kernel-weighted average of the training y^2 at (v1, v2). Throws
// NumericalUnderflow when the weight sum underflows to zero.
double nw_estimate(const VarianceSurface& surface, double v1, double v2);

// Same, but falls back to the nearest training point's y^2 on underflow.
double nw_estimate_or_nearest(const VarianceSurface& surface, double v1, double v2);

VarianceSurface fit_variance_surface(const RatioSeries& train, Bandwidth h);

// Leave-one-out cross-validated error of the squared log-ratios,
// computed by subtracting each point's own contribution from the full
// kernel sums (O(n^2) total).
LoocvResult loocv_error(const RatioSeries& train, Bandwidth h);

// Grid search over a log-spaced bandwidth grid around a rule-of-thumb pilot;
// ties break toward larger bandwidth.
Bandwidth select_bandwidth(const RatioSeries& train, const BandwidthSearchConfig& cfg = {});

struct GridAxis {
    double min;
    double max;
    int steps; // >= 2
};

struct GridCell {
    double v1;
    double v2;
    double sigma2;
    std::optional<double> sq_error; // vs a supplied true variance, if any
};

// Dense evaluation for contour/MSE export; row-major over (v1 outer, v2 inner).
std::vector<GridCell> surface_grid(const VarianceSurface& surface, GridAxis v1_axis,
                                   GridAxis v2_axis,
                                   const std::function<double(double, double)>* true_var = nullptr);

} // namespace scanguard
