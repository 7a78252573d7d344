#include "scanguard/varest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scanguard {

namespace {

inline double kernel_weight(double v1, double v2, const std::array<double, 3>& pt,
                            const Bandwidth& h) {
    const double d1 = (v1 - pt[0]) / h.h1;
    const double d2 = (v2 - pt[1]) / h.h2;
    return std::exp(-0.5 * (d1 * d1 + d2 * d2));
}

void check_surface(const VarianceSurface& surface) {
    if (surface.train.size() < 2)
        throw TooFewPoints("variance surface needs at least 2 training points");
    if (!(surface.bandwidth.h1 > 0.0) || !(surface.bandwidth.h2 > 0.0))
        throw NonPositiveBandwidth("bandwidths must be > 0");
}

double stddev(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs)
        mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (n - 1.0));
}

} // namespace

double nw_estimate(const VarianceSurface& surface, double v1, double v2) {
    check_surface(surface);
    double wsum = 0.0, wy = 0.0;
    for (const auto& pt : surface.train) {
        const double w = kernel_weight(v1, v2, pt, surface.bandwidth);
        wsum += w;
        wy += w * pt[2];
    }
    if (wsum == 0.0)
        throw NumericalUnderflow("kernel weight sum underflowed at query point");
    return wy / wsum;
}

double nw_estimate_or_nearest(const VarianceSurface& surface, double v1, double v2) {
    try {
        return nw_estimate(surface, v1, v2);
    } catch (const NumericalUnderflow&) {
        double best_d = std::numeric_limits<double>::infinity();
        double best_y = 0.0;
        for (const auto& pt : surface.train) {
            const double d1 = v1 - pt[0], d2 = v2 - pt[1];
            const double d = d1 * d1 + d2 * d2;
            if (d < best_d) {
                best_d = d;
                best_y = pt[2];
            }
        }
        return best_y;
    }
}

VarianceSurface fit_variance_surface(const RatioSeries& train, Bandwidth h) {
    if (train.size() < 2)
        throw EmptyTraining("variance surface needs at least 2 training observations");
    if (!(h.h1 > 0.0) || !(h.h2 > 0.0))
        throw NonPositiveBandwidth("bandwidths must be > 0");
    VarianceSurface surface;
    surface.bandwidth = h;
    surface.train.reserve(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        const double y = train.log_ratios[i];
        surface.train.push_back({train.vol_pairs[i].prev, train.vol_pairs[i].curr, y * y});
    }
    return surface;
}

LoocvResult loocv_error(const RatioSeries& train, Bandwidth h) {
    const std::size_t n = train.size();
    if (n < 3)
        throw TooFewPoints("LOOCV needs at least 3 observations");
    if (!(h.h1 > 0.0) || !(h.h2 > 0.0))
        throw NonPositiveBandwidth("bandwidths must be > 0");

    std::vector<double> ysq(n);
    for (std::size_t i = 0; i < n; ++i)
        ysq[i] = train.log_ratios[i] * train.log_ratios[i];

    LoocvResult res;
    // Leave-one-out sums: skip the self term rather than subtracting its unit
    // weight afterwards, so sub-epsilon neighbor weights are not absorbed.
    for (std::size_t i = 0; i < n; ++i) {
        double wsum_i = 0.0, wy_i = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i)
                continue;
            const double d1 = (train.vol_pairs[i].prev - train.vol_pairs[j].prev) / h.h1;
            const double d2 = (train.vol_pairs[i].curr - train.vol_pairs[j].curr) / h.h2;
            const double w = std::exp(-0.5 * (d1 * d1 + d2 * d2));
            wsum_i += w;
            wy_i += w * ysq[j];
        }
        double pred;
        if (wsum_i <= 0.0) {
            // zero leave-one-out weight: predict zero and count the cell
            pred = 0.0;
            ++res.underflow_count;
        } else {
            pred = wy_i / wsum_i;
        }
        const double e = ysq[i] - pred;
        res.error += e * e;
    }
    return res;
}

Bandwidth select_bandwidth(const RatioSeries& train, const BandwidthSearchConfig& cfg) {
    const std::size_t n = train.size();
    if (n < 3)
        throw TooFewPoints("bandwidth selection needs at least 3 observations");
    if (cfg.grid_points_per_dim < 1 || !(cfg.span_lo < cfg.span_hi))
        throw InvalidConfig("invalid bandwidth search grid");

    std::vector<double> v1(n), v2(n);
    for (std::size_t i = 0; i < n; ++i) {
        v1[i] = train.vol_pairs[i].prev;
        v2[i] = train.vol_pairs[i].curr;
    }

    // Rule-of-thumb pilot per dimension for bivariate smoothing.
    const double nfac = std::pow(static_cast<double>(n), -1.0 / 6.0);
    auto pilot = [&](const std::vector<double>& xs) {
        const double sd = stddev(xs);
        if (sd == 0.0) {
            double mean = 0.0;
            for (double x : xs)
                mean += x;
            mean /= static_cast<double>(xs.size());
            return 1e-6 * std::max(1.0, mean);
        }
        return 1.06 * sd * nfac;
    };
    const double h01 = pilot(v1);
    const double h02 = pilot(v2);

    auto grid = [&](double h0) {
        std::vector<double> g;
        const int k = cfg.grid_points_per_dim;
        if (k == 1) {
            g.push_back(h0 * std::sqrt(cfg.span_lo * cfg.span_hi));
            return g;
        }
        const double llo = std::log(cfg.span_lo), lhi = std::log(cfg.span_hi);
        for (int i = 0; i < k; ++i)
            g.push_back(h0 * std::exp(llo + (lhi - llo) * i / (k - 1)));
        return g;
    };
    const std::vector<double> g1 = grid(h01);
    const std::vector<double> g2 = grid(h02);

    Bandwidth best{g1.front(), g2.front()};
    double best_err = std::numeric_limits<double>::infinity();
    for (double h1 : g1) {
        for (double h2 : g2) {
            const double err = loocv_error(train, {h1, h2}).error;
            // <= so that ties resolve toward the larger bandwidth visited later
            if (err <= best_err) {
                best_err = err;
                best = {h1, h2};
            }
        }
    }
    return best;
}

std::vector<GridCell> surface_grid(const VarianceSurface& surface, GridAxis v1_axis,
                                   GridAxis v2_axis,
                                   const std::function<double(double, double)>* true_var) {
    check_surface(surface);
    if (v1_axis.steps < 2 || v2_axis.steps < 2)
        throw InvalidConfig("grid axes need at least 2 steps");

    auto coords = [](const GridAxis& ax) {
        std::vector<double> c(ax.steps);
        for (int i = 0; i < ax.steps; ++i)
            c[i] = ax.min + (ax.max - ax.min) * i / (ax.steps - 1);
        return c;
    };
    const std::vector<double> c1 = coords(v1_axis);
    const std::vector<double> c2 = coords(v2_axis);

    std::vector<GridCell> cells;
    cells.reserve(c1.size() * c2.size());
    for (double x1 : c1) {
        for (double x2 : c2) {
            GridCell cell{x1, x2, nw_estimate_or_nearest(surface, x1, x2), std::nullopt};
            if (true_var != nullptr) {
                const double d = cell.sigma2 - (*true_var)(x1, x2);
                cell.sq_error = d * d;
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

} // namespace scanguard
