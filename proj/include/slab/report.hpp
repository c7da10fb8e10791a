#pragma once
// Report serialization.  The JSON emitter is hand-rolled so key order and
// float formatting (17 significant digits) are fixed; identical runs produce
// byte-identical files.

#include <string>
#include <vector>

#include "slab/variation.hpp"

namespace slab {

struct RunConfig;  // runner.hpp

std::string format_g17(double v);

std::string report_json(const RunConfig& config, const std::vector<CheckReport>& checks);

// convergence table, columns: resolution,sup_residual,l2_residual,order
std::string convergence_csv(const CheckReport& report);

// long-format plot data; spec columns for convergence tables and per-sample
// stability rows, one flat header
std::string plot_csv(const std::vector<CheckReport>& reports);

// Writes text to path, printing a notice to log when overwriting.
void write_file(const std::string& path, const std::string& text, std::ostream& log);

} // namespace slab
