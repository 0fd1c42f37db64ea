#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace genhankel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;

/// Fully resolved settings of one run. Serialized into every output so a run
/// can be replayed from its own output file.
struct RunConfig {
  std::string command;
  std::vector<double> thetas;
  bool grid = false;
  std::int64_t n = 1000;
  int reps = 1;
  int kmax = 4;
  std::optional<int> k;
  std::string word;
  std::vector<std::string> methods;
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  std::string dist = "gaussian";
  int bins = 81;
  std::optional<std::pair<double, double>> range;
  bool exclude_zero = false;
  std::optional<double> zero_tol;
  std::int64_t budget = 1'000'000'000;
  int points = 201;
  bool dump_matrix = false;
  std::string out;
  std::string format = "csv";
};

std::string config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const std::string& text);

/// Reads the embedded config from a CSV header or a JSON output file.
RunConfig config_from_output(const std::string& path);

/// Throws std::invalid_argument describing the first problem found.
void validate(const RunConfig& cfg);

/// Executes a validated config, writing either to cfg.out or to `out`.
void execute(const RunConfig& cfg, std::ostream& out);

/// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Inserts ".tag" before the extension of `path` ("a/b.csv" -> "a/b.tag.csv").
std::string with_tag(const std::string& path, const std::string& tag);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

}  // namespace genhankel::cli
