#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "scanguard/core.hpp"
#include "scanguard/varest.hpp"

namespace scanguard {

// Statistic space a set of limits applies to.
enum class Space { Ratio, LogRatio, Hb };

enum class Method { Quartile, Hb, Rf, Tukey, Const, Var, Oracle };

enum class LimitWarning { DegenerateIqr, ZeroVariance };

std::string to_string(Method m);
std::string to_string(Space s);

struct MethodConfig {
    double c_u = 4.5;        // quartile/HB upper constant
    double c_l = 4.5;        // quartile/HB lower constant
    double rf_c = 1.75;      // resistant-fences constant
    double tukey_c = 2.5;
    double sigma_mult = 3.0; // sigma multiplier for Const/Var/Oracle
    bool hb_literal = false; // use the printed upper branch q2/R - 1
    // Apply quartile/RF/Tukey to log-ratios instead of ratios.
    bool classical_log_scale = false;
};

// Control band for the monitored statistic. Constant-limit methods carry a
// single (lower, upper) pair; covariate-dependent methods carry one pair per
// test observation.
struct ControlLimits {
    Space space = Space::Ratio;
    Method method = Method::Quartile;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<LimitWarning> warnings;
    // Training median, needed to transform test ratios when space == Hb.
    double hb_median = std::numeric_limits<double>::quiet_NaN();
    bool hb_literal = false;

    bool has_warning(LimitWarning w) const;
};

struct FlagVector {
    std::vector<int> t_index;
    std::vector<char> is_outlier; // 0/1, aligned with t_index

    std::size_t flag_count() const;
};

ControlLimits quartile_limits(const RatioSeries& train, const MethodConfig& cfg);
ControlLimits rf_limits(const RatioSeries& train, const MethodConfig& cfg);
ControlLimits tukey_limits(const RatioSeries& train, const MethodConfig& cfg);

// HB transform around the median q2. Default maps R >= q2 to R/q2 - 1;
// literal mode keeps q2/R - 1 for the upper branch.
std::vector<double> hb_transform(const std::vector<double>& ratios, double q2,
                                 bool literal = false);

ControlLimits hb_limits(const RatioSeries& train, const MethodConfig& cfg);

ControlLimits const_limits(const std::vector<double>& train_log, const MethodConfig& cfg);

ControlLimits var_limits(const VarianceSurface& surface,
                         const std::vector<VolumePair>& test_vol_pairs,
                         const MethodConfig& cfg);

using SigmaFn = std::function<double(double, double)>;

ControlLimits oracle_limits(const SigmaFn& true_sigma,
                            const std::vector<VolumePair>& test_vol_pairs,
                            const MethodConfig& cfg);

// Flags test observations outside the closed interval [lower, upper]; the
// monitored statistic is taken from the limits' space.
FlagVector classify(const RatioSeries& test, const ControlLimits& limits);

} // namespace scanguard
