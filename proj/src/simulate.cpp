#include "scanguard/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <thread>

namespace scanguard {

std::string to_string(VarianceCase c) {
    switch (c) {
    case VarianceCase::A: return "a";
    case VarianceCase::B: return "b";
    case VarianceCase::C: return "c";
    }
    return "?";
}

VarianceCase variance_case_from_string(const std::string& s) {
    if (s == "a" || s == "A") return VarianceCase::A;
    if (s == "b" || s == "B") return VarianceCase::B;
    if (s == "c" || s == "C") return VarianceCase::C;
    throw InvalidConfig("unknown variance case: " + s);
}

void ScenarioConfig::validate() const {
    if (n_train < 10 || n_test < 10)
        throw InvalidConfig("n_train and n_test must be >= 10");
    if (anomaly_fraction < 0.0 || anomaly_fraction >= 1.0)
        throw InvalidConfig("anomaly_fraction must be in [0, 1)");
    if (n_replicates < 1)
        throw InvalidConfig("n_replicates must be >= 1");
}

double sample_volume(Rng& rng) {
    double s = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double z = rng.normal();
        s += z * z;
    }
    return 1.0 + s;
}

double variance_case_value(VarianceCase c, double v1, double v2) {
    switch (c) {
    case VarianceCase::A: return 1.0;
    case VarianceCase::B: return v1 * v1 / 46.0;
    case VarianceCase::C: return (v1 + v2) * (v1 + v2) / 92.0;
    }
    return 1.0;
}

SigmaFn true_sigma_fn(VarianceCase c) {
    return [c](double v1, double v2) { return std::sqrt(variance_case_value(c, v1, v2)); };
}

SimulatedPath generate_path(const ScenarioConfig& cfg, int replicate_index) {
    cfg.validate();
    Rng rng = Rng::for_replicate(cfg.base_seed, static_cast<std::uint64_t>(replicate_index));

    const int total = cfg.n_train + cfg.n_test;
    SimulatedPath path;
    path.variance_case = cfg.variance_case;

    path.volumes.resize(total + 1);
    for (int t = 0; t <= total; ++t)
        path.volumes[t] = sample_volume(rng);

    std::vector<double> eps(total);
    for (int t = 0; t < total; ++t)
        eps[t] = rng.normal();

    // anomaly count rounds half-up
    const int n_anom = static_cast<int>(std::floor(cfg.anomaly_fraction * cfg.n_test + 0.5));
    std::vector<int> test_idx(cfg.n_test);
    for (int i = 0; i < cfg.n_test; ++i)
        test_idx[i] = cfg.n_train + 1 + i;
    // partial Fisher-Yates for a uniform draw without replacement
    for (int i = 0; i < n_anom; ++i) {
        const int j = i + static_cast<int>(rng.uniform_below(test_idx.size() - i));
        std::swap(test_idx[i], test_idx[j]);
    }
    path.anomaly_set.assign(test_idx.begin(), test_idx.begin() + n_anom);
    std::sort(path.anomaly_set.begin(), path.anomaly_set.end());

    // Clean log-price random walk; a spike then perturbs a single price level,
    // so the ratio into the spike carries +delta and the ratio out of it -delta.
    std::vector<double> log_clean(total + 1, 0.0);
    for (int t = 1; t <= total; ++t) {
        const double sigma = std::sqrt(
            variance_case_value(cfg.variance_case, path.volumes[t - 1], path.volumes[t]));
        log_clean[t] = log_clean[t - 1] + sigma * eps[t - 1];
    }
    path.prices.resize(total + 1);
    for (int t = 0; t <= total; ++t) {
        const double delta = std::binary_search(path.anomaly_set.begin(),
                                                path.anomaly_set.end(), t)
                                 ? cfg.delta
                                 : 0.0;
        path.prices[t] = std::exp(log_clean[t] + delta);
    }

    std::set<int> affected;
    for (int t : path.anomaly_set) {
        affected.insert(t);
        if (t + 1 <= total)
            affected.insert(t + 1);
    }
    path.anomaly_ratios.assign(affected.begin(), affected.end());
    return path;
}

const MethodSummary& ScenarioReport::summary(Method m) const {
    for (const auto& ms : methods)
        if (ms.method == m)
            return ms;
    throw Error("method not present in report: " + to_string(m));
}

int resolve_thread_count(int requested) {
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("SCANGUARD_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0)
            return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

constexpr Method kAllMethods[] = {Method::Var,      Method::Const, Method::Quartile,
                                  Method::Hb,       Method::Rf,    Method::Tukey,
                                  Method::Oracle};

struct ReplicateRow {
    std::vector<ReplicateCell> cells; // one per kAllMethods entry
};

RatioSeries slice(const RatioSeries& rs, std::size_t begin, std::size_t end) {
    RatioSeries out;
    out.t_index.assign(rs.t_index.begin() + begin, rs.t_index.begin() + end);
    out.ratios.assign(rs.ratios.begin() + begin, rs.ratios.begin() + end);
    out.log_ratios.assign(rs.log_ratios.begin() + begin, rs.log_ratios.begin() + end);
    out.vol_pairs.assign(rs.vol_pairs.begin() + begin, rs.vol_pairs.begin() + end);
    out.gap_weeks.assign(rs.gap_weeks.begin() + begin, rs.gap_weeks.begin() + end);
    return out;
}

ReplicateRow run_replicate(const ScenarioConfig& cfg, int r) {
    const SimulatedPath path = generate_path(cfg, r);

    PriceSeries series;
    series.store_id = "sim";
    series.item_id = "sim";
    const int total = cfg.n_train + cfg.n_test;
    series.weeks.resize(total + 1);
    for (int t = 0; t <= total; ++t)
        series.weeks[t] = t;
    series.prices = path.prices;
    series.volumes = path.volumes;

    const RatioSeries rs = compute_ratios(series);
    const RatioSeries train = slice(rs, 0, cfg.n_train);
    const RatioSeries test = slice(rs, cfg.n_train, rs.size());
    const std::set<int> truth(path.anomaly_ratios.begin(), path.anomaly_ratios.end());

    ReplicateRow row;
    for (Method m : kAllMethods) {
        ReplicateCell cell;
        try {
            ControlLimits lim;
            switch (m) {
            case Method::Quartile:
                lim = quartile_limits(train, cfg.method_cfg);
                break;
            case Method::Hb:
                lim = hb_limits(train, cfg.method_cfg);
                break;
            case Method::Rf:
                lim = rf_limits(train, cfg.method_cfg);
                break;
            case Method::Tukey:
                lim = tukey_limits(train, cfg.method_cfg);
                break;
            case Method::Const:
                lim = const_limits(train.log_ratios, cfg.method_cfg);
                break;
            case Method::Var: {
                const Bandwidth h = select_bandwidth(train, cfg.bandwidth_search);
                const VarianceSurface surface = fit_variance_surface(train, h);
                lim = var_limits(surface, test.vol_pairs, cfg.method_cfg);
                break;
            }
            case Method::Oracle:
                lim = oracle_limits(true_sigma_fn(cfg.variance_case), test.vol_pairs,
                                    cfg.method_cfg);
                break;
            }
            cell.counts = confusion(classify(test, lim), truth);
        } catch (const Error& e) {
            cell.failure = e.what();
        }
        row.cells.push_back(std::move(cell));
    }
    return row;
}

} // namespace

ScenarioReport run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();

    std::vector<ReplicateRow> rows(cfg.n_replicates);
    const int n_threads = std::min(resolve_thread_count(cfg.threads), cfg.n_replicates);
    if (n_threads <= 1) {
        for (int r = 0; r < cfg.n_replicates; ++r)
            rows[r] = run_replicate(cfg, r);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        for (int w = 0; w < n_threads; ++w) {
            workers.emplace_back([&, w] {
                for (int r = w; r < cfg.n_replicates; r += n_threads)
                    rows[r] = run_replicate(cfg, r);
            });
        }
        for (auto& t : workers)
            t.join();
    }

    ScenarioReport report;
    report.variance_case = cfg.variance_case;
    report.anomaly_fraction = cfg.anomaly_fraction;
    report.n_replicates = cfg.n_replicates;

    std::size_t mi = 0;
    for (Method m : kAllMethods) {
        MethodSummary ms;
        ms.method = m;
        std::vector<double> tn, fn, fp, tp;
        std::vector<std::optional<double>> sen, spe, acc;
        for (const auto& row : rows) {
            const ReplicateCell& cell = row.cells[mi];
            if (!cell.counts.has_value()) {
                ++ms.n_failed;
                continue;
            }
            const ConfusionCounts& c = *cell.counts;
            tn.push_back(static_cast<double>(c.tn));
            fn.push_back(static_cast<double>(c.fn));
            fp.push_back(static_cast<double>(c.fp));
            tp.push_back(static_cast<double>(c.tp));
            const RateSummary rr = rates(c);
            sen.push_back(rr.sen);
            spe.push_back(rr.spe);
            acc.push_back(rr.acc);
        }
        if (!tn.empty()) {
            ms.tn = aggregate(tn);
            ms.fn = aggregate(fn);
            ms.fp = aggregate(fp);
            ms.tp = aggregate(tp);
            ms.sen = aggregate(sen);
            ms.spe = aggregate(spe);
            ms.acc = aggregate(acc);
        }
        report.methods.push_back(std::move(ms));
        ++mi;
    }
    return report;
}

} // namespace scanguard
