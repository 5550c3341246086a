#ifndef ARKS_SWEEP_HPP_
#define ARKS_SWEEP_HPP_

#include <string>
#include <vector>

#include "arks/config.hpp"

namespace arks {

struct SweepRow {
    std::vector<double> swept_values;
    std::string verdict;  // verdict kind, or "error"
    double sup_linf = 0.0;
    double sup_lp = 0.0;
    std::string regime;
    std::string error;  // nonempty when the point failed
};

struct SweepResult {
    std::vector<std::string> axis_names;
    std::vector<SweepRow> rows;  // deterministic order: axis2-major over axis1
    bool all_rows_present = true;
};

// Runs the grid of configurations across a fixed pool of `workers`
// threads; each worker owns its simulation exclusively and results are
// gathered by point index, so the output order is independent of
// scheduling.
SweepResult run_sweep(const SweepSpec& spec);

// phase.csv: config-echo comment header, then one row per point.
void write_phase_csv(const SweepSpec& spec, const SweepResult& result,
                     const std::string& path);

}  // namespace arks

#endif  // ARKS_SWEEP_HPP_
