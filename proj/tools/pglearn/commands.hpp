#pragma once

#include <CLI11.hpp>

#include <functional>
#include <string>

namespace pglearn {

// A subcommand returns its exit code; options are bound when the subcommand is registered.
using Runner = std::function<int()>;

Runner add_simulate(CLI::App& app);
Runner add_learn(CLI::App& app);
Runner add_factorize(CLI::App& app);
Runner add_cluster(CLI::App& app);
Runner add_impute(CLI::App& app);
Runner add_eval(CLI::App& app);

}  // namespace pglearn
