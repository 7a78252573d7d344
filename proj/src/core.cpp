#include "scanguard/core.hpp"

#include <algorithm>
#include <cmath>

namespace scanguard {

void PriceSeries::validate() const {
    if (prices.size() < 2)
        throw SeriesTooShort("price series needs at least 2 observations, got " +
                             std::to_string(prices.size()));
    if (weeks.size() != prices.size() || volumes.size() != prices.size())
        throw LengthMismatch("weeks/prices/volumes lengths differ");
    for (double p : prices)
        if (!(p > 0.0))
            throw NonPositivePrice("all prices must be > 0");
    for (double v : volumes)
        if (!(v > 0.0))
            throw NonPositiveVolume("all volumes must be > 0");
    for (std::size_t i = 1; i < weeks.size(); ++i)
        if (weeks[i] <= weeks[i - 1])
            throw Error("weeks must be strictly increasing");
}

void RatioSeries::append(const RatioSeries& other) {
    t_index.insert(t_index.end(), other.t_index.begin(), other.t_index.end());
    ratios.insert(ratios.end(), other.ratios.begin(), other.ratios.end());
    log_ratios.insert(log_ratios.end(), other.log_ratios.begin(), other.log_ratios.end());
    vol_pairs.insert(vol_pairs.end(), other.vol_pairs.begin(), other.vol_pairs.end());
    gap_weeks.insert(gap_weeks.end(), other.gap_weeks.begin(), other.gap_weeks.end());
}

RatioSeries compute_ratios(const PriceSeries& series) {
    series.validate();
    RatioSeries rs;
    const std::size_t n = series.size();
    rs.t_index.reserve(n - 1);
    rs.ratios.reserve(n - 1);
    rs.log_ratios.reserve(n - 1);
    rs.vol_pairs.reserve(n - 1);
    rs.gap_weeks.reserve(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        const double r = series.prices[i] / series.prices[i - 1];
        rs.t_index.push_back(series.weeks[i]);
        rs.ratios.push_back(r);
        rs.log_ratios.push_back(std::log(r));
        rs.vol_pairs.push_back({series.volumes[i - 1], series.volumes[i]});
        rs.gap_weeks.push_back(series.weeks[i] - series.weeks[i - 1]);
    }
    return rs;
}

double quantile(std::vector<double> sample, double p) {
    if (sample.empty())
        throw EmptySample("quantile of an empty sample");
    if (p < 0.0 || p > 1.0)
        throw InvalidConfig("quantile probability must be in [0,1]");
    std::sort(sample.begin(), sample.end());
    const std::size_t n = sample.size();
    const double g = static_cast<double>(n - 1) * p;
    const std::size_t i = static_cast<std::size_t>(g);
    const double f = g - static_cast<double>(i);
    if (f == 0.0 || i + 1 >= n)
        return sample[i];
    return sample[i] * (1.0 - f) + sample[i + 1] * f;
}

QuartileSummary quartiles(const std::vector<double>& sample) {
    return {quantile(sample, 0.25), quantile(sample, 0.5), quantile(sample, 0.75)};
}

RatioSeries tukey_filter(const RatioSeries& rs, double eps) {
    RatioSeries out;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const bool unchanged = (eps == 0.0) ? (rs.ratios[i] == 1.0)
                                            : (std::abs(rs.ratios[i] - 1.0) <= eps);
        if (unchanged)
            continue;
        out.t_index.push_back(rs.t_index[i]);
        out.ratios.push_back(rs.ratios[i]);
        out.log_ratios.push_back(rs.log_ratios[i]);
        out.vol_pairs.push_back(rs.vol_pairs[i]);
        if (!rs.gap_weeks.empty())
            out.gap_weeks.push_back(rs.gap_weeks[i]);
    }
    return out;
}

} // namespace scanguard
