#pragma once

#include <iosfwd>

#include "conedido/cli/config.hpp"

namespace conedido::cli {

enum ExitStatus : int {
    exit_ok = 0,
    exit_invariant_failed = 1,
    exit_config_error = 2,
    exit_numerical_error = 3,
};

/// Dispatches a validated configuration. The JSON summary goes to cfg.output, or to `out`
/// when no output path is set; suite progress lines go to `log`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& log);

} // namespace conedido::cli
