#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "scanguard/simulate.hpp"
#include "scanguard/varest.hpp"

namespace scanguard {

inline constexpr int kReportSchemaVersion = 1;

// Benchmark table: one row per (case, fraction, method) with mean/sd columns.
struct StudyReport {
    std::vector<ScenarioReport> scenarios;

    void write_csv(std::ostream& os) const;
    void write_json(std::ostream& os) const;
    static StudyReport read_json(std::istream& is);
};

// Variance surface persistence (training triples + bandwidth, exact
// re-evaluation on load).
void write_surface_json(const VarianceSurface& surface, std::ostream& os);
VarianceSurface read_surface_json(std::istream& is);

void write_grid_csv(const std::vector<GridCell>& cells, std::ostream& os);

} // namespace scanguard
