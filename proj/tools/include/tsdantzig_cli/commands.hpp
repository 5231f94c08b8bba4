#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>

#include "tsdantzig_cli/config.hpp"
#include "tsdantzig_cli/table.hpp"

namespace tsdantzig::cli {

/// Runs one subcommand on a resolved config. Progress and summaries go to
/// `log`; the returned table is the command's result.
Table run_command(std::string_view command, const Json& config, std::size_t workers, std::ostream& log);

}  // namespace tsdantzig::cli
