#include "scanguard/detectors.hpp"

#include <algorithm>
#include <cmath>

namespace scanguard {

std::string to_string(Method m) {
    switch (m) {
    case Method::Quartile: return "Quartile";
    case Method::Hb: return "HB";
    case Method::Rf: return "RF";
    case Method::Tukey: return "Tukey";
    case Method::Const: return "Const";
    case Method::Var: return "Var";
    case Method::Oracle: return "Oracle";
    }
    return "?";
}

std::string to_string(Space s) {
    switch (s) {
    case Space::Ratio: return "ratio";
    case Space::LogRatio: return "log_ratio";
    case Space::Hb: return "hb";
    }
    return "?";
}

bool ControlLimits::has_warning(LimitWarning w) const {
    return std::find(warnings.begin(), warnings.end(), w) != warnings.end();
}

std::size_t FlagVector::flag_count() const {
    return static_cast<std::size_t>(std::count(is_outlier.begin(), is_outlier.end(), char(1)));
}

namespace {

const std::vector<double>& classical_sample(const RatioSeries& train, const MethodConfig& cfg) {
    return cfg.classical_log_scale ? train.log_ratios : train.ratios;
}

Space classical_space(const MethodConfig& cfg) {
    return cfg.classical_log_scale ? Space::LogRatio : Space::Ratio;
}

void check_nonempty(const RatioSeries& train) {
    if (train.empty())
        throw EmptyTraining("training series is empty");
}

} // namespace

ControlLimits quartile_limits(const RatioSeries& train, const MethodConfig& cfg) {
    check_nonempty(train);
    const QuartileSummary q = quartiles(classical_sample(train, cfg));
    ControlLimits lim;
    lim.space = classical_space(cfg);
    lim.method = Method::Quartile;
    lim.upper = {q.q2 + cfg.c_u * (q.q3 - q.q2)};
    lim.lower = {q.q2 - cfg.c_l * (q.q2 - q.q1)};
    if (q.q3 - q.q1 == 0.0)
        lim.warnings.push_back(LimitWarning::DegenerateIqr);
    return lim;
}

ControlLimits rf_limits(const RatioSeries& train, const MethodConfig& cfg) {
    check_nonempty(train);
    const QuartileSummary q = quartiles(classical_sample(train, cfg));
    const double iqr = q.q3 - q.q1;
    ControlLimits lim;
    lim.space = classical_space(cfg);
    lim.method = Method::Rf;
    lim.upper = {q.q3 + cfg.rf_c * iqr};
    lim.lower = {q.q1 - cfg.rf_c * iqr};
    if (iqr == 0.0)
        lim.warnings.push_back(LimitWarning::DegenerateIqr);
    return lim;
}

ControlLimits tukey_limits(const RatioSeries& train, const MethodConfig& cfg) {
    check_nonempty(train);
    const RatioSeries filtered = tukey_filter(train);
    if (filtered.empty())
        throw InsufficientTukeySamples("no observations with ratio != 1");
    const std::vector<double>& sample = classical_sample(filtered, cfg);

    double mean = 0.0;
    for (double x : sample)
        mean += x;
    mean /= static_cast<double>(sample.size());

    double sum_u = 0.0, sum_l = 0.0;
    std::size_t n_u = 0, n_l = 0;
    for (double x : sample) {
        if (x > mean) {
            sum_u += x;
            ++n_u;
        } else if (x < mean) {
            sum_l += x;
            ++n_l;
        }
        // values exactly equal to the mean join neither side
    }
    if (n_u == 0 || n_l == 0)
        throw InsufficientTukeySamples("Tukey samples all on one side of their mean");

    const double mean_u = sum_u / static_cast<double>(n_u);
    const double mean_l = sum_l / static_cast<double>(n_l);

    ControlLimits lim;
    lim.space = classical_space(cfg);
    lim.method = Method::Tukey;
    lim.upper = {mean + cfg.tukey_c * (mean_u - mean)};
    lim.lower = {mean - cfg.tukey_c * (mean - mean_l)};
    return lim;
}

std::vector<double> hb_transform(const std::vector<double>& ratios, double q2, bool literal) {
    if (!(q2 > 0.0))
        throw NonPositiveRatio("HB median must be > 0");
    std::vector<double> out;
    out.reserve(ratios.size());
    for (double r : ratios) {
        if (!(r > 0.0))
            throw NonPositiveRatio("HB transform requires ratios > 0");
        if (r < q2)
            out.push_back(1.0 - q2 / r);
        else
            out.push_back(literal ? q2 / r - 1.0 : r / q2 - 1.0);
    }
    return out;
}

ControlLimits hb_limits(const RatioSeries& train, const MethodConfig& cfg) {
    check_nonempty(train);
    const double q2 = quantile(train.ratios, 0.5);
    const std::vector<double> s = hb_transform(train.ratios, q2, cfg.hb_literal);
    const QuartileSummary q = quartiles(s);
    ControlLimits lim;
    lim.space = Space::Hb;
    lim.method = Method::Hb;
    lim.hb_median = q2;
    lim.hb_literal = cfg.hb_literal;
    lim.upper = {q.q2 + cfg.c_u * (q.q3 - q.q2)};
    lim.lower = {q.q2 - cfg.c_l * (q.q2 - q.q1)};
    if (q.q3 - q.q1 == 0.0)
        lim.warnings.push_back(LimitWarning::DegenerateIqr);
    return lim;
}

ControlLimits const_limits(const std::vector<double>& train_log, const MethodConfig& cfg) {
    if (train_log.empty())
        throw EmptyTraining("training sample is empty");
    double ss = 0.0;
    for (double y : train_log)
        ss += y * y;
    const double sigma = std::sqrt(ss / static_cast<double>(train_log.size()));
    ControlLimits lim;
    lim.space = Space::LogRatio;
    lim.method = Method::Const;
    lim.upper = {cfg.sigma_mult * sigma};
    lim.lower = {-cfg.sigma_mult * sigma};
    if (sigma == 0.0)
        lim.warnings.push_back(LimitWarning::ZeroVariance);
    return lim;
}

ControlLimits var_limits(const VarianceSurface& surface,
                         const std::vector<VolumePair>& test_vol_pairs,
                         const MethodConfig& cfg) {
    ControlLimits lim;
    lim.space = Space::LogRatio;
    lim.method = Method::Var;
    lim.lower.reserve(test_vol_pairs.size());
    lim.upper.reserve(test_vol_pairs.size());
    for (const VolumePair& vp : test_vol_pairs) {
        const double s2 = nw_estimate(surface, vp.prev, vp.curr);
        const double bound = cfg.sigma_mult * std::sqrt(s2);
        lim.lower.push_back(-bound);
        lim.upper.push_back(bound);
    }
    return lim;
}

ControlLimits oracle_limits(const SigmaFn& true_sigma,
                            const std::vector<VolumePair>& test_vol_pairs,
                            const MethodConfig& cfg) {
    ControlLimits lim;
    lim.space = Space::LogRatio;
    lim.method = Method::Oracle;
    lim.lower.reserve(test_vol_pairs.size());
    lim.upper.reserve(test_vol_pairs.size());
    for (const VolumePair& vp : test_vol_pairs) {
        const double bound = cfg.sigma_mult * true_sigma(vp.prev, vp.curr);
        lim.lower.push_back(-bound);
        lim.upper.push_back(bound);
    }
    return lim;
}

FlagVector classify(const RatioSeries& test, const ControlLimits& limits) {
    const std::size_t n = test.size();
    if (limits.lower.size() != 1 && limits.lower.size() != n)
        throw LengthMismatch("limits length must be 1 or match the test length");

    std::vector<double> stat;
    switch (limits.space) {
    case Space::Ratio:
        stat = test.ratios;
        break;
    case Space::LogRatio:
        stat = test.log_ratios;
        break;
    case Space::Hb:
        stat = hb_transform(test.ratios, limits.hb_median, limits.hb_literal);
        break;
    }

    FlagVector flags;
    flags.t_index = test.t_index;
    flags.is_outlier.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (limits.lower.size() == 1) ? 0 : i;
        // boundary values are in-control
        flags.is_outlier[i] = (stat[i] < limits.lower[j] || stat[i] > limits.upper[j]) ? 1 : 0;
    }
    return flags;
}

} // namespace scanguard
