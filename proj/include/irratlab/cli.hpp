#pragma once

// Command-line front end: `irratlab <group> <command> [--options]`.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace irratlab::cli {

/// CSV with a header row; fields quoted when they hold a comma, quote or
/// line break. PreconditionError naming the first missing column.
std::string emit_plot_data(const nlohmann::json& rows, const std::vector<std::string>& columns);

/// Runs one command. Exit codes: 0 success, 2 usage or precondition error,
/// 1 any other failure. Errors go to `err` as one JSON line
/// {"error": kind, "message": ...}.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

}  // namespace irratlab::cli
