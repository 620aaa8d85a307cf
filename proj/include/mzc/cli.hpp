#pragma once

// Command-line front end. Every subcommand writes one JSON document
// {command, inputs, result, diagnostics, schema_version} to `out`.

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace mzc::cli {

inline constexpr const char* kSchemaVersion = "1";

// Exit codes: 0 success, 1 computation failure, 2 usage or parse error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Serialises with %.17g numbers; NaN and infinities become null.
std::string dump_json(const nlohmann::ordered_json& j);

}  // namespace mzc::cli
