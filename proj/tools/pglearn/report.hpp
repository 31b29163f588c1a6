#pragma once

#include <json.hpp>

#include <CLI11.hpp>

#include <string>
#include <vector>

namespace pglearn {

using Json = nlohmann::json;

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 2;
constexpr int kExitInputError = 3;

// Value rounded to 12 significant digits; non-finite values become strings.
Json round12(double v);
Json round12(const std::vector<double>& v);

// Applies keys from a JSON object to options that were not set on the command line.
void apply_config_file(CLI::App& app, const std::string& path);

// Resolved value of every option of app, keyed by long name.
Json echo_config(const CLI::App& app);

// --out if given, else $PGLEARN_OUTPUT_DIR, else the working directory.
std::string resolve_output_dir(const std::string& out);

void write_json(const std::string& path, const Json& j);

}  // namespace pglearn
