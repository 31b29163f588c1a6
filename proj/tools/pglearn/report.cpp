#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "pgl/error.hpp"

namespace pglearn {

Json round12(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

Json round12(const std::vector<double>& v) {
  Json arr = Json::array();
  for (double x : v) arr.push_back(round12(x));
  return arr;
}

namespace {

std::string to_flag_name(std::string key) {
  for (char& c : key)
    if (c == '_') c = '-';
  return "--" + key;
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v.get<double>());
    return buf;
  }
  throw pgl::FormatError("config values must be scalars");
}

Json typed_value(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.empty()) return s;
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (end && *end == '\0') {
    if (s.find_first_of(".eE") == std::string::npos && std::abs(d) < 9e15)
      return static_cast<long long>(d);
    return d;
  }
  return s;
}

}  // namespace

void apply_config_file(CLI::App& app, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pgl::FormatError("cannot open config file " + path);
  Json cfg;
  try {
    in >> cfg;
  } catch (const Json::parse_error& e) {
    throw pgl::FormatError("config file " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw pgl::FormatError("config file must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    CLI::Option* opt = nullptr;
    try {
      opt = app.get_option(to_flag_name(key));
    } catch (const CLI::OptionNotFound&) {
      throw pgl::FormatError("config file " + path + ": unknown key '" + key + "'");
    }
    if (opt->count() > 0) continue;
    opt->add_result(scalar_text(value));
    opt->run_callback();
  }
}

Json echo_config(const CLI::App& app) {
  Json out = Json::object();
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    if (opt->get_expected_max() == 0) {
      out[name] = opt->count() > 0 && opt->as<bool>();
      continue;
    }
    std::string value;
    if (opt->count() > 0 && !opt->results().empty())
      value = opt->results().back();
    else
      value = opt->get_default_str();
    out[name] = typed_value(value);
  }
  return out;
}

std::string resolve_output_dir(const std::string& out) {
  std::string dir = out;
  if (dir.empty()) {
    const char* env = std::getenv("PGLEARN_OUTPUT_DIR");
    dir = env && *env ? env : ".";
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw pgl::FormatError("cannot create output directory " + dir);
  return dir;
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw pgl::FormatError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace pglearn
