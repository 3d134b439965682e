#pragma once

// One function per subcommand. Each returns a report that depends only on
// the configuration (and the seed), never on wall-clock time or threads.

#include <variant>

#include "radpress/cli/config.hpp"
#include "radpress/cli/format.hpp"

namespace radpress::cli {

struct Report {
  std::variant<Json, Table> body;
  // False when a validation gate failed (exit status 1).
  bool passed = true;
};

Report run_single_mirror(const RunConfig &cfg);
Report run_delay_line(const RunConfig &cfg);
Report run_fabry_perot(const RunConfig &cfg);
Report run_budget(const RunConfig &cfg);
Report run_mc_validate(const RunConfig &cfg);
Report run_sweep(const RunConfig &cfg);

// Dispatches on cfg.subcommand.
Report run(const RunConfig &cfg);

// Serializes in the configured format; tables always go out as CSV.
std::string render(const Report &report, OutputFormat format);

} // namespace radpress::cli
