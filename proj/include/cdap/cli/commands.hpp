#pragma once

#include "cdap/cli/config.hpp"

#include <iosfwd>
#include <string>

namespace cdap::cli {

/// Exit codes: 0 converged, 1 configuration error, 2 iteration cap reached,
/// 3 solver error.
int cmd_run(const std::string& config_path, const Overrides& overrides, std::ostream& out,
            std::ostream& err);

/// Exit codes: 0 when every cell produced a row, 1 on configuration error or
/// an empty suite, 3 when some cell/method had no successful run.
int cmd_bench(const std::string& config_path, const Overrides& overrides, std::ostream& out,
              std::ostream& err);

}  // namespace cdap::cli
