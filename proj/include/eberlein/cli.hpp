#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include "eberlein/matrix.hpp"
#include "eberlein/pivot.hpp"
#include "eberlein/solver.hpp"

namespace eberlein::cli {

inline constexpr int kExitConverged = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitMaxSweeps = 2;

inline constexpr const char* kTolEnv = "EBERLEIN_DEFAULT_TOL";

// CSV, one matrix row per line. Entries: "a", "a+bi", "a-bi", "bi", "-bi".
ComplexMatrix parse_matrix(std::istream& is);
ComplexMatrix parse_matrix_file(const std::string& path);
// Parses one entry; throws std::invalid_argument on malformed input.
Complex parse_scalar(const std::string& text);

// Inverse of parse_matrix, 17 significant digits.
std::string format_scalar(Complex z);
void write_matrix(std::ostream& os, const ComplexMatrix& a);
void write_matrix(const std::string& path, const ComplexMatrix& a);

struct SerialStrategy {
  SerialFamily family = SerialFamily::row;
};
struct PermStrategy {
  std::optional<std::uint64_t> seed;
};
struct SgStrategy {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> num_ops;
};
struct FileStrategy {
  std::string path;
};
using Strategy = std::variant<SerialStrategy, PermStrategy, SgStrategy, FileStrategy>;

// row | col | row_rev | col_rev | perm[:seed] | sg[:seed[:num_ops]] | file:path
Strategy parse_strategy(const std::string& spec);
// perm and sg fall back to default_seed when the spec carries none.
PivotOrdering build_ordering(const Strategy& s, std::size_t n, std::uint64_t default_seed);

struct RunConfig {
  std::string input_path;
  std::string output_dir;
  std::string strategy_spec = "row";
  // Unset: $EBERLEIN_DEFAULT_TOL, else the solver default.
  std::optional<double> tol;
  int max_sweeps = 100;
  Mode mode = Mode::complex;
  bool sort = false;
  bool eigvecs = false;
  bool trace = false;
  int logabs_every = 0;
  std::uint64_t seed = 0;
};

double resolve_tol(const RunConfig& config);

// Runs the solver and writes the artifacts into output_dir. summary.txt is
// written on every path, including failures. Returns the exit status.
int run_command(const RunConfig& config, std::ostream& log);

}  // namespace eberlein::cli
