#pragma once

#include <string>
#include <vector>

#include "evopipe/optimizer.hpp"

namespace evopipe {

// Parses a trace written by RunTrace::to_csv().
RunTrace trace_from_csv(const std::string& text);

// Reads traces/, pareto/ and finals.csv from a results directory (as written
// by run_experiment) and renders self-contained SVGs next to them:
// quality_convergence.svg, hv_convergence.svg, pareto_front.svg. No
// timestamps are emitted, so re-rendering is byte-stable.
void render_plots(const std::string& results_dir);

}  // namespace evopipe
