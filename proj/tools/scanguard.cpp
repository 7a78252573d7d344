// scanguard CLI: simulation studies, variance-surface fitting, grid export,
// detection on scanner CSVs, and report conversion.
//
// Exit codes: 0 success, 1 runtime/data failure, 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scanguard/detectors.hpp"
#include "scanguard/ingest.hpp"
#include "scanguard/metrics.hpp"
#include "scanguard/report.hpp"
#include "scanguard/simulate.hpp"
#include "scanguard/varest.hpp"

#include <json.hpp>

using nlohmann::json;
using namespace scanguard;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os.good())
        throw Error("cannot open output file: " + path);
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is.good())
        throw Error("cannot open input file: " + path);
    return is;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    std::string variance_case = "all";
    double fraction = 0.05;
    int replicates = 50;
    std::uint64_t seed = 42;
    double delta = 2.0;
    int n_train = 300;
    int n_test = 300;
    int threads = 0;
    std::string out;
    std::string format = "csv";
};

int cmd_simulate(const SimulateArgs& args) {
    std::vector<VarianceCase> cases;
    if (args.variance_case == "all")
        cases = {VarianceCase::A, VarianceCase::B, VarianceCase::C};
    else
        cases = {variance_case_from_string(args.variance_case)};

    StudyReport study;
    for (VarianceCase vc : cases) {
        ScenarioConfig cfg;
        cfg.variance_case = vc;
        cfg.anomaly_fraction = args.fraction;
        cfg.n_replicates = args.replicates;
        cfg.base_seed = args.seed;
        cfg.delta = args.delta;
        cfg.n_train = args.n_train;
        cfg.n_test = args.n_test;
        cfg.threads = args.threads;
        cfg.validate();
        study.scenarios.push_back(run_scenario(cfg));
    }

    auto emit = [&](std::ostream& os) {
        if (args.format == "json")
            study.write_json(os);
        else
            study.write_csv(os);
    };
    if (args.out.empty()) {
        emit(std::cout);
    } else {
        std::ofstream os = open_out(args.out);
        emit(os);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// detect

struct DetectArgs {
    std::string data;
    std::string item;
    std::string store;
    int split_week = 0;
    std::vector<std::string> methods = {"quartile", "hb", "rf", "tukey", "const", "var"};
    bool keep_unchanged = false;
    bool unweighted = false;
    bool log_scale = false;
    bool hb_literal = false;
    double c_u = 4.5, c_l = 4.5, rf_c = 1.75, tukey_c = 2.5, sigma_mult = 3.0;
    std::string out = "detect";
};

// Express a band in log-ratio space for charting; empty when the method's
// native band has no log image (non-positive ratio bound, literal HB).
std::optional<double> log_space_bound(const ControlLimits& lim, double value) {
    switch (lim.space) {
    case Space::LogRatio:
        return value;
    case Space::Ratio:
        if (value > 0.0)
            return std::log(value);
        return std::nullopt;
    case Space::Hb: {
        if (lim.hb_literal)
            return std::nullopt; // literal upper branch is not monotone
        const double r = value < 0.0 ? lim.hb_median / (1.0 - value)
                                     : lim.hb_median * (1.0 + value);
        if (r > 0.0)
            return std::log(r);
        return std::nullopt;
    }
    }
    return std::nullopt;
}

int cmd_detect(const DetectArgs& args) {
    std::ifstream is = open_in(args.data);
    const ParseResult parsed = parse_scanner_csv(is);
    for (const RowError& e : parsed.errors)
        std::cerr << args.data << ":" << e.line << ": " << e.message << "\n";

    SplitSpec spec;
    const int split_week = args.split_week;
    spec.train_filter = [split_week](const std::string&, int week) {
        return week <= split_week;
    };
    spec.test_filter = [split_week](const std::string&, int week) {
        return week > split_week;
    };
    spec.drop_unchanged = !args.keep_unchanged;
    spec.volume_weighted = !args.unweighted;
    const SplitResult split = train_test_split(parsed.records, args.item, args.store, spec);

    MethodConfig cfg;
    cfg.c_u = args.c_u;
    cfg.c_l = args.c_l;
    cfg.rf_c = args.rf_c;
    cfg.tukey_c = args.tukey_c;
    cfg.sigma_mult = args.sigma_mult;
    cfg.hb_literal = args.hb_literal;
    cfg.classical_log_scale = args.log_scale;

    struct MethodOutput {
        std::string name;
        ControlLimits limits;
        FlagVector flags;
    };
    std::vector<MethodOutput> outputs;
    json errors = json::object();
    for (const std::string& name : args.methods) {
        try {
            ControlLimits lim;
            if (name == "quartile")
                lim = quartile_limits(split.train_pool, cfg);
            else if (name == "hb")
                lim = hb_limits(split.train_pool, cfg);
            else if (name == "rf")
                lim = rf_limits(split.train_pool, cfg);
            else if (name == "tukey")
                lim = tukey_limits(split.train_pool, cfg);
            else if (name == "const")
                lim = const_limits(split.train_pool.log_ratios, cfg);
            else if (name == "var") {
                const Bandwidth h = select_bandwidth(split.train_pool);
                const VarianceSurface surface = fit_variance_surface(split.train_pool, h);
                lim = var_limits(surface, split.test.vol_pairs, cfg);
            } else {
                throw InvalidConfig("unknown method: " + name);
            }
            outputs.push_back({name, lim, classify(split.test, lim)});
        } catch (const InvalidConfig&) {
            throw; // bad flag value, not a data failure
        } catch (const Error& e) {
            // one method failing must not suppress the others
            errors[name] = e.what();
            std::cerr << "method " << name << " failed: " << e.what() << "\n";
        }
    }
    if (outputs.empty())
        throw Error("all requested methods failed");

    // flags + limits JSON
    json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["item"] = args.item;
    doc["store"] = args.store;
    doc["split_week"] = args.split_week;
    doc["errors"] = errors;
    json methods = json::object();
    for (const MethodOutput& mo : outputs) {
        json m;
        m["space"] = to_string(mo.limits.space);
        m["lower"] = mo.limits.lower;
        m["upper"] = mo.limits.upper;
        if (mo.limits.space == Space::Hb)
            m["hb_median"] = mo.limits.hb_median;
        json flags = json::array();
        for (std::size_t i = 0; i < mo.flags.t_index.size(); ++i)
            if (mo.flags.is_outlier[i])
                flags.push_back(mo.flags.t_index[i]);
        m["flagged_weeks"] = flags;
        methods[mo.name] = m;
    }
    doc["methods"] = methods;
    {
        std::ofstream os = open_out(args.out + ".json");
        os << doc.dump(2) << "\n";
    }

    // chart CSV: one row per test week, bands expressed on the log-ratio axis
    {
        std::ofstream os = open_out(args.out + "_chart.csv");
        os << "# scanguard-chart schema_version=" << kReportSchemaVersion << "\n";
        os << "week,price,log_ratio";
        for (const MethodOutput& mo : outputs)
            os << "," << mo.name << "_lower," << mo.name << "_upper," << mo.name
               << "_flag";
        os << "\n";
        os.precision(17);
        const RatioSeries& test = split.test;
        // price lookup from the test store's weekly series
        std::map<int, double> price_by_week;
        for (std::size_t i = 0; i < split.test_series.size(); ++i)
            price_by_week[split.test_series.weeks[i]] = split.test_series.prices[i];
        for (std::size_t i = 0; i < test.size(); ++i) {
            os << test.t_index[i] << "," << price_by_week[test.t_index[i]] << ","
               << test.log_ratios[i];
            for (const MethodOutput& mo : outputs) {
                const std::size_t j = mo.limits.lower.size() == 1 ? 0 : i;
                const auto lo = log_space_bound(mo.limits, mo.limits.lower[j]);
                const auto hi = log_space_bound(mo.limits, mo.limits.upper[j]);
                os << ",";
                if (lo)
                    os << *lo;
                os << ",";
                if (hi)
                    os << *hi;
                os << "," << int(mo.flags.is_outlier[i]);
            }
            os << "\n";
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// fit-var / grid

struct FitVarArgs {
    std::string data;
    std::string item;
    std::string store;
    int split_week = 0;
    bool keep_unchanged = false;
    std::string sim_case;
    std::uint64_t seed = 42;
    int n_train = 300;
    double h1 = 0.0, h2 = 0.0; // 0 = cross-validate
    int grid_points = 16;
    std::string out = "surface.json";
};

RatioSeries training_pool(const FitVarArgs& args) {
    if (!args.sim_case.empty()) {
        ScenarioConfig cfg;
        cfg.variance_case = variance_case_from_string(args.sim_case);
        cfg.base_seed = args.seed;
        cfg.n_train = args.n_train;
        cfg.anomaly_fraction = 0.0;
        const SimulatedPath path = generate_path(cfg, 0);
        RatioSeries rs;
        for (int t = 1; t <= args.n_train; ++t) {
            rs.t_index.push_back(t);
            rs.ratios.push_back(path.prices[t] / path.prices[t - 1]);
            rs.log_ratios.push_back(std::log(path.prices[t] / path.prices[t - 1]));
            rs.vol_pairs.push_back({path.volumes[t - 1], path.volumes[t]});
            rs.gap_weeks.push_back(1);
        }
        return rs;
    }
    if (args.data.empty())
        throw InvalidConfig("either --data or --sim-case is required");
    std::ifstream is = open_in(args.data);
    const ParseResult parsed = parse_scanner_csv(is);
    SplitSpec spec;
    const int split_week = args.split_week;
    spec.train_filter = [split_week](const std::string&, int week) {
        return week <= split_week;
    };
    spec.test_filter = [split_week](const std::string&, int week) {
        return week > split_week;
    };
    spec.drop_unchanged = !args.keep_unchanged;
    return train_test_split(parsed.records, args.item, args.store, spec).train_pool;
}

int cmd_fit_var(const FitVarArgs& args) {
    const RatioSeries train = training_pool(args);
    Bandwidth h;
    if (args.h1 > 0.0 && args.h2 > 0.0) {
        h = {args.h1, args.h2};
    } else if (args.h1 == 0.0 && args.h2 == 0.0) {
        BandwidthSearchConfig search;
        search.grid_points_per_dim = args.grid_points;
        h = select_bandwidth(train, search);
    } else {
        throw InvalidConfig("--h1 and --h2 must be given together");
    }
    const VarianceSurface surface = fit_variance_surface(train, h);
    std::ofstream os = open_out(args.out);
    write_surface_json(surface, os);
    return kExitOk;
}

struct GridArgs {
    std::string surface;
    double v1_min = 1.0, v1_max = 21.0;
    double v2_min = 1.0, v2_max = 21.0;
    int steps = 50;
    std::string true_case;
    std::string out = "grid.csv";
};

int cmd_grid(const GridArgs& args) {
    std::ifstream is = open_in(args.surface);
    const VarianceSurface surface = read_surface_json(is);
    std::function<double(double, double)> truth;
    const std::function<double(double, double)>* truth_ptr = nullptr;
    if (!args.true_case.empty()) {
        const VarianceCase vc = variance_case_from_string(args.true_case);
        truth = [vc](double v1, double v2) { return variance_case_value(vc, v1, v2); };
        truth_ptr = &truth;
    }
    const std::vector<GridCell> cells =
        surface_grid(surface, {args.v1_min, args.v1_max, args.steps},
                     {args.v2_min, args.v2_max, args.steps}, truth_ptr);
    std::ofstream os = open_out(args.out);
    write_grid_csv(cells, os);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// report: study JSON -> benchmark-table CSV

struct ReportArgs {
    std::string in;
    std::string out;
};

int cmd_report(const ReportArgs& args) {
    std::ifstream is = open_in(args.in);
    const StudyReport study = StudyReport::read_json(is);
    if (args.out.empty()) {
        study.write_csv(std::cout);
    } else {
        std::ofstream os = open_out(args.out);
        study.write_csv(os);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Control-limit outlier detection for weekly price scanner data"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* c_sim = app.add_subcommand("simulate", "Run a replicated benchmark study");
    c_sim->add_option("--case", sim.variance_case, "Variance case: a, b, c, or all")
        ->check(CLI::IsMember({"a", "b", "c", "all"}));
    c_sim->add_option("--fraction", sim.fraction, "Fraction of spiked test points");
    c_sim->add_option("--replicates", sim.replicates, "Number of replicates");
    c_sim->add_option("--seed", sim.seed, "Base RNG seed");
    c_sim->add_option("--delta", sim.delta, "Log-scale spike magnitude");
    c_sim->add_option("--n-train", sim.n_train, "Training points per replicate");
    c_sim->add_option("--n-test", sim.n_test, "Test points per replicate");
    c_sim->add_option("--threads", sim.threads, "Worker threads (0 = auto)");
    c_sim->add_option("--out", sim.out, "Output path (default stdout)");
    c_sim->add_option("--format", sim.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    DetectArgs det;
    CLI::App* c_det = app.add_subcommand("detect", "Flag outliers in a scanner CSV");
    c_det->add_option("--data", det.data, "Scanner CSV path")->required();
    c_det->add_option("--item", det.item, "Item id")->required();
    c_det->add_option("--store", det.store, "Store id to test")->required();
    c_det->add_option("--split-week", det.split_week,
                      "Last training week; later weeks are tested")
        ->required();
    c_det->add_option("--methods", det.methods, "Subset of quartile,hb,rf,tukey,const,var")
        ->delimiter(',');
    c_det->add_flag("--keep-unchanged", det.keep_unchanged,
                    "Keep ratio==1 observations instead of Tukey-filtering");
    c_det->add_flag("--unweighted", det.unweighted,
                    "Plain mean of posted prices instead of volume weighting");
    c_det->add_flag("--log-scale", det.log_scale,
                    "Apply quartile/RF/Tukey to log-ratios");
    c_det->add_flag("--hb-literal", det.hb_literal, "Literal HB upper branch q2/R - 1");
    c_det->add_option("--cu", det.c_u, "Quartile/HB upper constant");
    c_det->add_option("--cl", det.c_l, "Quartile/HB lower constant");
    c_det->add_option("--rf-c", det.rf_c, "Resistant-fences constant");
    c_det->add_option("--tukey-c", det.tukey_c, "Tukey constant");
    c_det->add_option("--sigma-mult", det.sigma_mult, "Sigma multiplier");
    c_det->add_option("--out", det.out, "Output prefix (<out>.json, <out>_chart.csv)");

    FitVarArgs fit;
    CLI::App* c_fit = app.add_subcommand("fit-var", "Fit and persist a variance surface");
    c_fit->add_option("--data", fit.data, "Scanner CSV path");
    c_fit->add_option("--item", fit.item, "Item id");
    c_fit->add_option("--store", fit.store, "Store id");
    c_fit->add_option("--split-week", fit.split_week, "Last training week");
    c_fit->add_flag("--keep-unchanged", fit.keep_unchanged,
                    "Keep ratio==1 observations");
    c_fit->add_option("--sim-case", fit.sim_case,
                      "Fit on simulated training data for a variance case instead")
        ->check(CLI::IsMember({"a", "b", "c"}));
    c_fit->add_option("--seed", fit.seed, "Simulation seed");
    c_fit->add_option("--n-train", fit.n_train, "Simulated training points");
    c_fit->add_option("--h1", fit.h1, "Bandwidth for V_{t-1} (0 = cross-validate)");
    c_fit->add_option("--h2", fit.h2, "Bandwidth for V_t (0 = cross-validate)");
    c_fit->add_option("--grid-points", fit.grid_points,
                      "Cross-validation grid points per dimension");
    c_fit->add_option("--out", fit.out, "Surface JSON path");

    GridArgs grid;
    CLI::App* c_grid = app.add_subcommand("grid", "Evaluate a fitted surface on a grid");
    c_grid->add_option("--surface", grid.surface, "Surface JSON path")->required();
    c_grid->add_option("--v1-min", grid.v1_min, "Grid minimum for V_{t-1}");
    c_grid->add_option("--v1-max", grid.v1_max, "Grid maximum for V_{t-1}");
    c_grid->add_option("--v2-min", grid.v2_min, "Grid minimum for V_t");
    c_grid->add_option("--v2-max", grid.v2_max, "Grid maximum for V_t");
    c_grid->add_option("--steps", grid.steps, "Grid steps per dimension");
    c_grid->add_option("--true-case", grid.true_case,
                       "Also emit squared error against this case's true surface")
        ->check(CLI::IsMember({"a", "b", "c"}));
    c_grid->add_option("--out", grid.out, "Grid CSV path");

    ReportArgs rep;
    CLI::App* c_rep = app.add_subcommand("report", "Convert a study JSON to table CSV");
    c_rep->add_option("--in", rep.in, "Study JSON path")->required();
    c_rep->add_option("--out", rep.out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_sim->parsed())
            return cmd_simulate(sim);
        if (c_det->parsed())
            return cmd_detect(det);
        if (c_fit->parsed())
            return cmd_fit_var(fit);
        if (c_grid->parsed())
            return cmd_grid(grid);
        if (c_rep->parsed())
            return cmd_report(rep);
    } catch (const InvalidConfig& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
