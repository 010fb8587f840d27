#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracbinom/report.hpp"

namespace fracbinom {

inline constexpr const char* kVersion = "1.0.0";

struct ExperimentConfig {
  // pmf, verify-gbt, mgf-check, cf-check, ldp, mdp, berry-esseen,
  // compare-nu or moments.
  std::string subcommand;
  double alpha = 1.0;
  double x = 0.5;
  std::optional<int> n;
  std::vector<int> grid;
  std::optional<double> z;
  std::optional<double> a;
  std::vector<double> xi;
  double beta = 0.7;
  int m = 4;
  std::string output = "csv";
  std::string out_path;
  // 0 = machine parallelism. Never changes the numbers produced.
  unsigned threads = 0;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  bool timing = false;
};

// Runs one experiment. Invalid settings throw DomainError with a message
// naming the flag; numerical failures throw NumericalError. Warnings (such
// as near-integer alpha) go to `diag`.
Report run_experiment(const ExperimentConfig& config, std::ostream& diag);

// Full command line: parse, run, serialize. Returns the process exit code
// (0 ok, 2 invalid input, 3 numerical failure). `args` excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace fracbinom
