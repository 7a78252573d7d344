#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scanguard/detectors.hpp"
#include "scanguard/metrics.hpp"
#include "scanguard/rng.hpp"

namespace scanguard {

enum class VarianceCase { A, B, C };

std::string to_string(VarianceCase c);
VarianceCase variance_case_from_string(const std::string& s);

struct ScenarioConfig {
    VarianceCase variance_case = VarianceCase::A;
    double anomaly_fraction = 0.05;
    double delta = 2.0;
    int n_train = 300;
    int n_test = 300;
    int n_replicates = 50;
    std::uint64_t base_seed = 42;
    // Classical methods on log-ratios by default; the simulated ratios are
    // lognormal with unit log-scale sigma, far from 1, and the benchmark
    // patterns only emerge on the log scale.
    MethodConfig method_cfg{.classical_log_scale = true};
    BandwidthSearchConfig bandwidth_search{};
    int threads = 0; // 0 = auto

    void validate() const;
};

struct SimulatedPath {
    std::vector<double> prices;  // length n_train + n_test + 1, prices[0] = 1
    std::vector<double> volumes; // V_0 .. V_T, same length as prices
    std::vector<int> anomaly_set; // sorted spike times t in the test range
    // Ratio indices rendered abnormal by the spikes. A spike at time t is a
    // transient price error, so both the jump (ratio t) and the return to the
    // clean level (ratio t+1, when it exists) are abnormal.
    std::vector<int> anomaly_ratios;
    VarianceCase variance_case = VarianceCase::A;
};

// One draw from 1 + chi^2(5), built as five squared standard normals.
double sample_volume(Rng& rng);

// True variance sigma^2(v1, v2) for a scenario case.
double variance_case_value(VarianceCase c, double v1, double v2);

SigmaFn true_sigma_fn(VarianceCase c);

SimulatedPath generate_path(const ScenarioConfig& cfg, int replicate_index);

// Per-replicate, per-method outcome; unset when the method failed to fit.
struct ReplicateCell {
    std::optional<ConfusionCounts> counts;
    std::string failure; // non-empty when counts is unset
};

struct MethodSummary {
    Method method = Method::Quartile;
    Aggregate tn, fn, fp, tp;
    Aggregate sen, spe, acc;
    int n_failed = 0;
};

struct ScenarioReport {
    VarianceCase variance_case = VarianceCase::A;
    double anomaly_fraction = 0.05;
    int n_replicates = 0;
    std::vector<MethodSummary> methods;

    const MethodSummary& summary(Method m) const;
};

// Full replicated study: generate, fit all seven methods, classify, score.
ScenarioReport run_scenario(const ScenarioConfig& cfg);

// Worker count: explicit > 0 wins, else SCANGUARD_THREADS, else hardware.
int resolve_thread_count(int requested);

} // namespace scanguard
