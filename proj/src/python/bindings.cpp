#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "scanguard/detectors.hpp"
#include "scanguard/ingest.hpp"
#include "scanguard/metrics.hpp"
#include "scanguard/report.hpp"
#include "scanguard/simulate.hpp"
#include "scanguard/varest.hpp"

namespace py = pybind11;
using namespace scanguard;

namespace {

RatioSeries ratios_from_arrays(const std::vector<int>& weeks,
                               const std::vector<double>& prices,
                               const std::vector<double>& volumes,
                               const std::string& store, const std::string& item) {
    PriceSeries s;
    s.store_id = store;
    s.item_id = item;
    s.weeks = weeks;
    s.prices = prices;
    s.volumes = volumes;
    return compute_ratios(s);
}

SplitResult split_by_week(const std::vector<TransactionRecord>& records,
                          const std::string& item, const std::string& store,
                          int split_week, bool drop_unchanged, bool volume_weighted) {
    SplitSpec spec;
    spec.train_filter = [split_week](const std::string&, int week) {
        return week <= split_week;
    };
    spec.test_filter = [split_week](const std::string&, int week) {
        return week > split_week;
    };
    spec.drop_unchanged = drop_unchanged;
    spec.volume_weighted = volume_weighted;
    return train_test_split(records, item, store, spec);
}

} // namespace

PYBIND11_MODULE(_scanguard, m) {
    m.doc() = "Control-limit outlier detection for weekly price scanner data";

    py::register_exception<Error>(m, "ScanguardError");

    py::class_<VolumePair>(m, "VolumePair")
        .def(py::init<double, double>())
        .def_readwrite("prev", &VolumePair::prev)
        .def_readwrite("curr", &VolumePair::curr);

    py::class_<RatioSeries>(m, "RatioSeries")
        .def(py::init<>())
        .def_readwrite("t_index", &RatioSeries::t_index)
        .def_readwrite("ratios", &RatioSeries::ratios)
        .def_readwrite("log_ratios", &RatioSeries::log_ratios)
        .def_readwrite("vol_pairs", &RatioSeries::vol_pairs)
        .def_readwrite("gap_weeks", &RatioSeries::gap_weeks)
        .def("__len__", &RatioSeries::size);

    py::enum_<Space>(m, "Space")
        .value("RATIO", Space::Ratio)
        .value("LOG_RATIO", Space::LogRatio)
        .value("HB", Space::Hb);

    py::enum_<Method>(m, "Method")
        .value("QUARTILE", Method::Quartile)
        .value("HB", Method::Hb)
        .value("RF", Method::Rf)
        .value("TUKEY", Method::Tukey)
        .value("CONST", Method::Const)
        .value("VAR", Method::Var)
        .value("ORACLE", Method::Oracle);

    py::class_<MethodConfig>(m, "MethodConfig")
        .def(py::init<>())
        .def_readwrite("c_u", &MethodConfig::c_u)
        .def_readwrite("c_l", &MethodConfig::c_l)
        .def_readwrite("rf_c", &MethodConfig::rf_c)
        .def_readwrite("tukey_c", &MethodConfig::tukey_c)
        .def_readwrite("sigma_mult", &MethodConfig::sigma_mult)
        .def_readwrite("hb_literal", &MethodConfig::hb_literal)
        .def_readwrite("classical_log_scale", &MethodConfig::classical_log_scale);

    py::class_<ControlLimits>(m, "ControlLimits")
        .def_readonly("space", &ControlLimits::space)
        .def_readonly("method", &ControlLimits::method)
        .def_readonly("lower", &ControlLimits::lower)
        .def_readonly("upper", &ControlLimits::upper)
        .def_readonly("hb_median", &ControlLimits::hb_median);

    py::class_<FlagVector>(m, "FlagVector")
        .def_readonly("t_index", &FlagVector::t_index)
        .def_property_readonly("is_outlier",
                               [](const FlagVector& f) {
                                   std::vector<bool> out(f.is_outlier.begin(),
                                                         f.is_outlier.end());
                                   return out;
                               })
        .def("flag_count", &FlagVector::flag_count);

    m.def("ratio_series", &ratios_from_arrays, py::arg("weeks"), py::arg("prices"),
          py::arg("volumes"), py::arg("store") = "py", py::arg("item") = "py",
          "Weekly prices/volumes -> ratio series");
    m.def("quantile", [](std::vector<double> xs, double p) { return quantile(xs, p); });
    m.def("tukey_filter", [](const RatioSeries& rs) { return tukey_filter(rs); });

    m.def("quartile_limits", &quartile_limits, py::arg("train"),
          py::arg("config") = MethodConfig{});
    m.def("hb_limits", &hb_limits, py::arg("train"), py::arg("config") = MethodConfig{});
    m.def("rf_limits", &rf_limits, py::arg("train"), py::arg("config") = MethodConfig{});
    m.def("tukey_limits", &tukey_limits, py::arg("train"),
          py::arg("config") = MethodConfig{});
    m.def("const_limits", &const_limits, py::arg("train_log"),
          py::arg("config") = MethodConfig{});
    m.def("var_limits", &var_limits, py::arg("surface"), py::arg("test_vol_pairs"),
          py::arg("config") = MethodConfig{});
    m.def("oracle_limits", &oracle_limits, py::arg("true_sigma"),
          py::arg("test_vol_pairs"), py::arg("config") = MethodConfig{});
    m.def("classify", &classify, py::arg("test"), py::arg("limits"));

    py::class_<Bandwidth>(m, "Bandwidth")
        .def(py::init<double, double>())
        .def_readwrite("h1", &Bandwidth::h1)
        .def_readwrite("h2", &Bandwidth::h2);

    py::class_<VarianceSurface>(m, "VarianceSurface")
        .def_readonly("bandwidth", &VarianceSurface::bandwidth)
        .def_property_readonly("size",
                               [](const VarianceSurface& s) { return s.train.size(); });

    m.def("select_bandwidth",
          [](const RatioSeries& train, int grid_points) {
              BandwidthSearchConfig cfg;
              if (grid_points > 0)
                  cfg.grid_points_per_dim = grid_points;
              return select_bandwidth(train, cfg);
          },
          py::arg("train"), py::arg("grid_points") = 0);
    m.def("fit_variance_surface", &fit_variance_surface, py::arg("train"),
          py::arg("bandwidth"));
    m.def("nw_estimate", &nw_estimate, py::arg("surface"), py::arg("v1"), py::arg("v2"));
    m.def("loocv_error",
          [](const RatioSeries& train, Bandwidth h) { return loocv_error(train, h).error; },
          py::arg("train"), py::arg("bandwidth"));

    py::class_<ConfusionCounts>(m, "ConfusionCounts")
        .def_readonly("tp", &ConfusionCounts::tp)
        .def_readonly("tn", &ConfusionCounts::tn)
        .def_readonly("fp", &ConfusionCounts::fp)
        .def_readonly("fn", &ConfusionCounts::fn);

    m.def("confusion", &confusion, py::arg("flags"), py::arg("truth"));
    m.def("rates", [](const ConfusionCounts& c) {
        const RateSummary r = rates(c);
        py::dict d;
        d["sen"] = r.sen ? py::object(py::float_(*r.sen)) : py::none();
        d["spe"] = r.spe ? py::object(py::float_(*r.spe)) : py::none();
        d["acc"] = r.acc ? py::object(py::float_(*r.acc)) : py::none();
        return d;
    });

    py::class_<TransactionRecord>(m, "TransactionRecord")
        .def(py::init<>())
        .def_readwrite("store_id", &TransactionRecord::store_id)
        .def_readwrite("item_id", &TransactionRecord::item_id)
        .def_readwrite("week", &TransactionRecord::week)
        .def_readwrite("unit_price", &TransactionRecord::unit_price)
        .def_readwrite("volume", &TransactionRecord::volume);

    py::class_<SplitResult>(m, "SplitResult")
        .def_readonly("train_pool", &SplitResult::train_pool)
        .def_readonly("test", &SplitResult::test);

    m.def("parse_scanner_csv",
          [](const std::string& path) {
              std::ifstream is(path);
              if (!is.good())
                  throw Error("cannot open: " + path);
              const ParseResult res = parse_scanner_csv(is);
              std::vector<std::pair<int, std::string>> errors;
              for (const RowError& e : res.errors)
                  errors.emplace_back(e.line, e.message);
              return py::make_tuple(res.records, errors);
          },
          py::arg("path"), "Parse a scanner CSV file -> (records, row_errors)");
    m.def("split_by_week", &split_by_week, py::arg("records"), py::arg("item"),
          py::arg("store"), py::arg("split_week"), py::arg("drop_unchanged") = true,
          py::arg("volume_weighted") = true);

    m.def("run_study",
          [](const std::string& variance_case, double fraction, int replicates,
             std::uint64_t seed, double delta, int n_train, int n_test, int threads) {
              ScenarioConfig cfg;
              cfg.variance_case = variance_case_from_string(variance_case);
              cfg.anomaly_fraction = fraction;
              cfg.n_replicates = replicates;
              cfg.base_seed = seed;
              cfg.delta = delta;
              cfg.n_train = n_train;
              cfg.n_test = n_test;
              cfg.threads = threads;
              cfg.validate();
              const ScenarioReport rep = run_scenario(cfg);
              py::dict out;
              for (const MethodSummary& ms : rep.methods) {
                  py::dict d;
                  d["tn"] = ms.tn.mean;
                  d["fn"] = ms.fn.mean;
                  d["fp"] = ms.fp.mean;
                  d["tp"] = ms.tp.mean;
                  d["sen"] = ms.sen.mean;
                  d["spe"] = ms.spe.mean;
                  d["acc"] = ms.acc.mean;
                  d["n_failed"] = ms.n_failed;
                  out[to_string(ms.method).c_str()] = d;
              }
              return out;
          },
          py::arg("variance_case") = "a", py::arg("fraction") = 0.05,
          py::arg("replicates") = 50, py::arg("seed") = 42, py::arg("delta") = 2.0,
          py::arg("n_train") = 300, py::arg("n_test") = 300, py::arg("threads") = 0,
          "Replicated benchmark study -> per-method mean counts and rates");
}
