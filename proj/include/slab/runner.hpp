#pragma once
// CLI front end plumbing: run configuration, parallel check dispatch, report
// and plot-data files, stdout summary, exit-status contract
// (0 all-pass, 1 any-fail, 2 usage).

#include <iosfwd>
#include <string>
#include <vector>

#include "slab/variation.hpp"

namespace slab {

// Raised for malformed requests (unknown soliton/check names, bad flags);
// the CLI maps it to exit status 2.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string command;                // verify | converge
    SolitonSpec spec;
    CheckParams params;
    std::vector<std::string> checks;    // verify: resolved list
    std::string converge_check;         // converge
    std::vector<int> resolutions;       // converge
    std::string out_path;
    std::string csv_path;               // converge table
    std::string plot_path;              // optional plot data
};

// Validates names up front (UsageError before any computation), runs the
// checks (in parallel, capped by SOLITONLAB_THREADS), writes the files and
// prints the summary.  Returns 0 when every check passed, 1 otherwise.
int run(const RunConfig& config, std::ostream& log);

// Converts a saved report to plot CSV; empty report sets warn and no-op.
int emit_plot_data_from_file(const std::string& report_path, const std::string& out_path,
                             std::ostream& log);

} // namespace slab
