#include "scanguard/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace scanguard {

ConfusionCounts confusion(const FlagVector& flags, const std::set<int>& truth) {
    for (int t : truth) {
        if (std::find(flags.t_index.begin(), flags.t_index.end(), t) == flags.t_index.end())
            throw IndexMismatch("truth index " + std::to_string(t) + " not in flag vector");
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < flags.t_index.size(); ++i) {
        const bool flagged = flags.is_outlier[i] != 0;
        const bool anomalous = truth.count(flags.t_index[i]) > 0;
        if (anomalous)
            flagged ? ++c.tp : ++c.fn;
        else
            flagged ? ++c.fp : ++c.tn;
    }
    return c;
}

RateSummary rates(double tp, double tn, double fp, double fn) {
    RateSummary r;
    const double p = tp + fn;
    const double n = tn + fp;
    if (p > 0.0)
        r.sen = tp / p;
    if (n > 0.0)
        r.spe = tn / n;
    if (p + n > 0.0)
        r.acc = (tp + tn) / (p + n);
    return r;
}

RateSummary rates(const ConfusionCounts& c) {
    return rates(static_cast<double>(c.tp), static_cast<double>(c.tn),
                 static_cast<double>(c.fp), static_cast<double>(c.fn));
}

Aggregate aggregate(const std::vector<double>& values) {
    if (values.empty())
        throw EmptyInput("aggregate of no values");
    Aggregate a;
    a.n = static_cast<int>(values.size());
    for (double v : values)
        a.mean += v;
    a.mean /= a.n;
    if (a.n > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - a.mean) * (v - a.mean);
        a.sd = std::sqrt(ss / (a.n - 1));
    }
    return a;
}

Aggregate aggregate(const std::vector<std::optional<double>>& values) {
    if (values.empty())
        throw EmptyInput("aggregate of no values");
    std::vector<double> present;
    int excluded = 0;
    for (const auto& v : values) {
        if (v.has_value())
            present.push_back(*v);
        else
            ++excluded;
    }
    if (present.empty()) {
        Aggregate a;
        a.excluded = excluded;
        return a;
    }
    Aggregate a = aggregate(present);
    a.excluded = excluded;
    return a;
}

} // namespace scanguard
