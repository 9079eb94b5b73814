#pragma once

#include "cdap/cli/config.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace cdap::cli {

inline constexpr const char* kTraceHeader = "k,residual,step_type,ls_depth,eta,sigma_min_G,wall_ms";

/// step_type column: dissolving, projected_gradient(_stalled), alternating,
/// bregman(_clamped) or none.
std::string step_label(const IterateRecord& rec);

/// Trace CSV. wall_ms is written as 0 unless `wall_clock` is set, so that
/// identical runs produce identical files.
std::string trace_csv(const IterateTrace& trace, bool wall_clock);

nlohmann::json summary_json(const ProblemMeta& meta, const std::string& method, KernelKind kernel,
                            const SolverConfig& cfg, const SolveResult& result, double wall_seconds);

/// A named residual curve for plotting.
struct Series {
  std::string label;
  std::vector<double> residuals;
};

/// Static SVG line chart of log10 residual against iteration.
std::string residual_svg(const std::vector<Series>& series, const std::string& title);

/// Columns padded to a common width; first row is the header.
std::string aligned_table(const std::vector<std::vector<std::string>>& rows);

void write_file(const std::string& path, const std::string& content);

/// printf-style "%.*g" without locale surprises.
std::string format_g(double v, int digits);

}  // namespace cdap::cli
