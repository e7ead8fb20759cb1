// commands.hpp: the qfcs command-line front end.
#pragma once

#include <map>
#include <ostream>
#include <string>

namespace qfcs::cli {

enum ExitCode : int { kOk = 0, kSelftestFailed = 1, kInvalidConfig = 2, kSolverFailure = 3 };

/// Named tolerances, adjustable through --tol-override KEY=VAL.
struct Tolerances {
  std::map<std::string, double> values{
      {"symmetry", 1e-9},       // |G(chi) - G(-chi - i beta)|
      {"generator", 1e-12},     // transpose(L(-chi - i beta)) vs L(chi), relative
      {"oracle", 1e-14},        // closed form vs builder, relative
      {"trace", 1e-12},         // ||w L(0)|| / ||L||
      {"detailed_balance", 1e-12},
      {"gauge", 1e-12},
      {"long_time_decay", 0.1},  // allowed deviation of err(t)/err(2t) from 2, relative
      {"closeness", 0.1},        // crossover matching threshold
  };

  double operator[](const std::string& key) const { return values.at(key); }
  /// Parses KEY=VAL; throws std::invalid_argument for unknown keys or bad values.
  void apply(const std::string& assignment);
};

/// Runs the tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Invariant suite behind `qfcs selftest`. Prints one line per check.
/// `fault` corrupts one closed-form entry to exercise the oracle check.
int run_selftest(bool quick, bool fault, const Tolerances& tol, std::ostream& out);

}  // namespace qfcs::cli
