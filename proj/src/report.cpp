#include "scanguard/report.hpp"

#include <iomanip>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace scanguard {

namespace {

using nlohmann::json;

json aggregate_to_json(const Aggregate& a) {
    json j;
    j["mean"] = a.mean;
    j["sd"] = a.sd;
    j["n"] = a.n;
    if (a.excluded > 0)
        j["excluded"] = a.excluded;
    return j;
}

Aggregate aggregate_from_json(const json& j) {
    Aggregate a;
    a.mean = j.at("mean").get<double>();
    a.sd = j.at("sd").get<double>();
    a.n = j.at("n").get<int>();
    a.excluded = j.value("excluded", 0);
    return a;
}

Method method_from_string(const std::string& s) {
    if (s == "Quartile") return Method::Quartile;
    if (s == "HB") return Method::Hb;
    if (s == "RF") return Method::Rf;
    if (s == "Tukey") return Method::Tukey;
    if (s == "Const") return Method::Const;
    if (s == "Var") return Method::Var;
    if (s == "Oracle") return Method::Oracle;
    throw Error("unknown method name: " + s);
}

} // namespace

void StudyReport::write_csv(std::ostream& os) const {
    os << "# scanguard-report schema_version=" << kReportSchemaVersion << "\n";
    os << "case,fraction,method,tn_mean,tn_sd,fn_mean,fn_sd,fp_mean,fp_sd,tp_mean,tp_sd,"
          "sen_mean,sen_sd,spe_mean,spe_sd,acc_mean,acc_sd,n_replicates,n_failed\n";
    os << std::setprecision(10);
    for (const auto& sc : scenarios) {
        for (const auto& m : sc.methods) {
            os << to_string(sc.variance_case) << ',' << sc.anomaly_fraction << ','
               << to_string(m.method) << ',' << m.tn.mean << ',' << m.tn.sd << ','
               << m.fn.mean << ',' << m.fn.sd << ',' << m.fp.mean << ',' << m.fp.sd << ','
               << m.tp.mean << ',' << m.tp.sd << ',' << m.sen.mean << ',' << m.sen.sd << ','
               << m.spe.mean << ',' << m.spe.sd << ',' << m.acc.mean << ',' << m.acc.sd << ','
               << sc.n_replicates << ',' << m.n_failed << '\n';
        }
    }
}

void StudyReport::write_json(std::ostream& os) const {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["scenarios"] = json::array();
    for (const auto& sc : scenarios) {
        json js;
        js["case"] = to_string(sc.variance_case);
        js["fraction"] = sc.anomaly_fraction;
        js["n_replicates"] = sc.n_replicates;
        js["methods"] = json::array();
        for (const auto& m : sc.methods) {
            json jm;
            jm["method"] = to_string(m.method);
            jm["tn"] = aggregate_to_json(m.tn);
            jm["fn"] = aggregate_to_json(m.fn);
            jm["fp"] = aggregate_to_json(m.fp);
            jm["tp"] = aggregate_to_json(m.tp);
            jm["sen"] = aggregate_to_json(m.sen);
            jm["spe"] = aggregate_to_json(m.spe);
            jm["acc"] = aggregate_to_json(m.acc);
            jm["n_failed"] = m.n_failed;
            js["methods"].push_back(std::move(jm));
        }
        j["scenarios"].push_back(std::move(js));
    }
    os << j.dump(2) << '\n';
}

StudyReport StudyReport::read_json(std::istream& is) {
    json j = json::parse(is);
    const int version = j.at("schema_version").get<int>();
    if (version > kReportSchemaVersion)
        throw Error("report schema_version " + std::to_string(version) + " is newer than " +
                    std::to_string(kReportSchemaVersion));
    StudyReport report;
    for (const auto& js : j.at("scenarios")) {
        ScenarioReport sc;
        sc.variance_case = variance_case_from_string(js.at("case").get<std::string>());
        sc.anomaly_fraction = js.at("fraction").get<double>();
        sc.n_replicates = js.at("n_replicates").get<int>();
        for (const auto& jm : js.at("methods")) {
            MethodSummary m;
            m.method = method_from_string(jm.at("method").get<std::string>());
            m.tn = aggregate_from_json(jm.at("tn"));
            m.fn = aggregate_from_json(jm.at("fn"));
            m.fp = aggregate_from_json(jm.at("fp"));
            m.tp = aggregate_from_json(jm.at("tp"));
            m.sen = aggregate_from_json(jm.at("sen"));
            m.spe = aggregate_from_json(jm.at("spe"));
            m.acc = aggregate_from_json(jm.at("acc"));
            m.n_failed = jm.value("n_failed", 0);
            sc.methods.push_back(std::move(m));
        }
        report.scenarios.push_back(std::move(sc));
    }
    return report;
}

void write_surface_json(const VarianceSurface& surface, std::ostream& os) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["bandwidth"] = {surface.bandwidth.h1, surface.bandwidth.h2};
    json pts = json::array();
    for (const auto& pt : surface.train)
        pts.push_back({pt[0], pt[1], pt[2]});
    j["train_points"] = std::move(pts);
    os << j.dump(2) << '\n';
}

VarianceSurface read_surface_json(std::istream& is) {
    json j = json::parse(is);
    VarianceSurface surface;
    surface.bandwidth.h1 = j.at("bandwidth").at(0).get<double>();
    surface.bandwidth.h2 = j.at("bandwidth").at(1).get<double>();
    for (const auto& pt : j.at("train_points"))
        surface.train.push_back({pt.at(0).get<double>(), pt.at(1).get<double>(),
                                 pt.at(2).get<double>()});
    return surface;
}

void write_grid_csv(const std::vector<GridCell>& cells, std::ostream& os) {
    os << "# scanguard-grid schema_version=" << kReportSchemaVersion << "\n";
    const bool with_err = !cells.empty() && cells.front().sq_error.has_value();
    os << (with_err ? "v1,v2,sigma2,sq_error\n" : "v1,v2,sigma2\n");
    os << std::setprecision(12);
    for (const auto& c : cells) {
        os << c.v1 << ',' << c.v2 << ',' << c.sigma2;
        if (with_err)
            os << ',' << c.sq_error.value_or(0.0);
        os << '\n';
    }
}

} // namespace scanguard
