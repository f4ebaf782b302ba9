#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nss/config.hpp"

namespace nss::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kConvergence = 3, kResource = 4 };

struct RunConfig {
  std::string command;  // decompose | toric | kl-check | scaling | braid
  std::uint64_t seed = kDefaultSeed;
  Tolerances tol{};
  Limits limits{};

  std::string input;   // decompose: error-set JSON; braid: trajectory script
  std::string output;  // empty: stdout

  int l1 = 2;
  int l2 = 2;
  double h = 0.0;
  std::string field = "z";
  std::vector<std::pair<int, int>> sizes;
  std::size_t threads = 0;  // 0: NSSLAB_THREADS or hardware

  std::size_t max_weight = 2;
  std::vector<std::string> errors;
  bool dense = false;
  bool report = false;
  bool include_lattice = false;
  bool include_matrices = false;

  /// Throws InvalidArgument for unknown commands or non-positive tolerances.
  void validate() const;
};

/// Sets one tolerance by name ("merge", "ritz", ...).
void set_tolerance(Tolerances& tol, const std::string& name, double value);

/// "2x2,2x3" → {(2,2),(2,3)}.
std::vector<std::pair<int, int>> parse_sizes(const std::string& text);

/// Overlays the keys present in a config document onto cfg.
void apply_config(RunConfig& cfg, const nlohmann::json& doc);

/// Executes one command. Output goes to cfg.output (or out) only on success.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (config file first, flags override) and calls run().
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nss::cli
