#include <iostream>
#include <map>

#include "commands.hpp"
#include "pgl/error.hpp"
#include "report.hpp"

int main(int argc, char** argv) {
  using namespace pglearn;
  CLI::App app{"Product graph learning, Kronecker sum factorization, clustering and imputation"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  std::map<std::string, std::pair<CLI::App*, Runner>> commands;
  std::map<std::string, std::string> config_paths;
  const auto add = [&](const std::string& name, const std::string& about,
                       Runner (*make)(CLI::App&)) {
    CLI::App* sub = app.add_subcommand(name, about);
    sub->add_option("--config", config_paths[name], "JSON file of option values; flags take precedence");
    commands[name] = {sub, make(*sub)};
  };
  add("simulate", "Generate planted factor graphs and smooth product-graph signals", add_simulate);
  add("learn", "Learn factor graphs from data (pgl, rpgl) or a single graph (gl)", add_learn);
  add("factorize", "Factorize a Laplacian into a nearest Kronecker sum (kron, rkron)", add_factorize);
  add("cluster", "Spectral clustering of factor graphs and their product", add_cluster);
  add("impute", "Joint missing-data imputation and product graph learning", add_impute);
  add("eval", "Compare graphs (F-score) or labelings (NMI)", add_eval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  for (auto& [name, entry] : commands) {
    if (!entry.first->parsed()) continue;
    try {
      if (!config_paths[name].empty()) apply_config_file(*entry.first, config_paths[name]);
      return entry.second();
    } catch (const pgl::SingularSystemError& e) {
      std::cerr << "pglearn " << name << ": " << e.what() << "\n";
      return kExitNotConverged;
    } catch (const CLI::Error& e) {
      std::cerr << "pglearn " << name << ": config: " << e.what() << "\n";
      return kExitInputError;
    } catch (const std::exception& e) {
      std::cerr << "pglearn " << name << ": " << e.what() << "\n";
      return kExitInputError;
    }
  }
  return kExitInputError;
}
