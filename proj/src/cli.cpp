#include "eberlein/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "eberlein/diagnostics.hpp"
#include "eberlein/error.hpp"
#include "eberlein/verification.hpp"

namespace eberlein::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& s, const std::string& entry) {
  const bool allowed = !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || c == '.' || c == 'e' || c == 'E' || c == '+' || c == '-';
  });
  if (allowed) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() + s.size() && std::isfinite(v)) return v;
  }
  throw std::invalid_argument("malformed scalar '" + entry + "'");
}

template <class T>
T parse_unsigned(const std::string& s, const std::string& what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("invalid " + what + " '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return os;
}

void close_output(std::ofstream& os, const std::filesystem::path& path) {
  os.close();
  if (!os) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string mode_name(Mode m) { return m == Mode::real ? "real" : "complex"; }

// Eigenvalues inside a block: decreasing real part, then decreasing imaginary part.
void order_within_blocks(BlockPartition& bp) {
  for (auto& v : bp.block_eigenvalues) {
    std::stable_sort(v.begin(), v.end(), [](Complex x, Complex y) {
      if (x.real() != y.real()) return x.real() > y.real();
      return x.imag() > y.imag();
    });
  }
}

struct Summary {
  std::string status = "error";
  int exit_code = kExitError;
  std::vector<std::pair<std::string, std::string>> fields;
  std::vector<std::string> blocks;
  std::string provenance;
  std::vector<std::string> notes;
  std::string error;

  void set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : fields)
      if (k == key) {
        v = value;
        return;
      }
    fields.emplace_back(key, value);
  }

  void write(std::ostream& os) const {
    os << "status: " << status << '\n';
    os << "exit_code: " << exit_code << '\n';
    for (const auto& [k, v] : fields) os << k << ": " << v << '\n';
    if (!blocks.empty()) {
      os << "blocks: " << blocks.size() << '\n';
      for (const auto& b : blocks) os << b << '\n';
    }
    if (!provenance.empty()) {
      os << "provenance:\n";
      std::istringstream ss(provenance);
      for (std::string line; std::getline(ss, line);) os << "  " << line << '\n';
    }
    for (const auto& n : notes) os << "note: " << n << '\n';
    if (!error.empty()) os << "error: " << error << '\n';
  }
};

}  // namespace

Complex parse_scalar(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty entry");
  if (s.back() != 'i') return {parse_real(s, s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      return {parse_real(body.substr(0, k), s), parse_real(body.substr(k), s)};
    }
  }
  return {0.0, parse_real(body, s)};
}

ComplexMatrix parse_matrix(std::istream& is) {
  std::vector<std::vector<Complex>> rows;
  int line_no = 0;
  int last_line = 0;
  for (std::string line; std::getline(is, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    last_line = line_no;
    std::vector<Complex> row;
    std::size_t start = 0;
    for (const auto& cell : split(line, ',')) {
      const auto lead = cell.find_first_not_of(" \t");
      const int column = static_cast<int>(start + (lead == std::string::npos ? 0 : lead)) + 1;
      try {
        row.push_back(parse_scalar(cell));
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), line_no, column);
      }
      start += cell.size() + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("ragged row " + std::to_string(rows.size() + 1) + ": expected " +
                           std::to_string(rows.front().size()) + " entries, found " +
                           std::to_string(row.size()),
                       line_no, 0);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix", 1, 0);
  if (rows.size() != rows.front().size()) {
    throw ParseError("matrix is not square: " + std::to_string(rows.size()) + " rows, " +
                         std::to_string(rows.front().size()) + " columns",
                     last_line, 0);
  }
  const std::size_t n = rows.size();
  ComplexMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rows[i][j];
  return a;
}

ComplexMatrix parse_matrix_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return parse_matrix(is);
}

std::string format_scalar(Complex z) {
  if (z.imag() == 0.0) return format_double(z.real());
  return format_double(z.real()) + (std::signbit(z.imag()) ? "-" : "+") +
         format_double(std::abs(z.imag())) + "i";
}

void write_matrix(std::ostream& os, const ComplexMatrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (j > 0) os << ',';
      os << format_scalar(a(i, j));
    }
    os << '\n';
  }
}

void write_matrix(const std::string& path, const ComplexMatrix& a) {
  auto os = open_output(path);
  write_matrix(os, a);
  close_output(os, path);
}

Strategy parse_strategy(const std::string& spec) {
  if (spec.starts_with("file:")) {
    const std::string path = spec.substr(5);
    if (path.empty()) throw std::invalid_argument("strategy 'file:' needs a path");
    return FileStrategy{path};
  }
  if (spec == "row") return SerialStrategy{SerialFamily::row};
  if (spec == "col") return SerialStrategy{SerialFamily::column};
  if (spec == "row_rev") return SerialStrategy{SerialFamily::row_reversed};
  if (spec == "col_rev") return SerialStrategy{SerialFamily::column_reversed};
  const auto parts = split(spec, ':');
  if (parts[0] == "perm" && parts.size() <= 2) {
    PermStrategy s;
    if (parts.size() == 2) s.seed = parse_unsigned<std::uint64_t>(parts[1], "seed");
    return s;
  }
  if (parts[0] == "sg" && parts.size() <= 3) {
    SgStrategy s;
    if (parts.size() >= 2) s.seed = parse_unsigned<std::uint64_t>(parts[1], "seed");
    if (parts.size() == 3) s.num_ops = parse_unsigned<std::size_t>(parts[2], "operation count");
    return s;
  }
  throw std::invalid_argument("unknown strategy '" + spec +
                              "' (expected row, col, row_rev, col_rev, perm[:seed], "
                              "sg[:seed[:num_ops]] or file:path)");
}

PivotOrdering build_ordering(const Strategy& s, std::size_t n, std::uint64_t default_seed) {
  struct Visitor {
    std::size_t n;
    std::uint64_t seed;
    PivotOrdering operator()(const SerialStrategy& x) const { return serial_ordering(n, x.family); }
    PivotOrdering operator()(const PermStrategy& x) const {
      return random_sp_ordering(n, x.seed.value_or(seed));
    }
    PivotOrdering operator()(const SgStrategy& x) const {
      return random_sg_ordering(n, x.seed.value_or(seed), x.num_ops);
    }
    PivotOrdering operator()(const FileStrategy& x) const {
      std::ifstream is(x.path, std::ios::binary);
      if (!is) throw std::runtime_error("cannot open ordering file '" + x.path + "'");
      PivotOrdering o = read_ordering(is);
      if (o.n != n) {
        throw DimensionError("ordering file is for n = " + std::to_string(o.n) +
                             " but the matrix has n = " + std::to_string(n));
      }
      return o;
    }
  };
  return std::visit(Visitor{n, default_seed}, s);
}

double resolve_tol(const RunConfig& config) {
  if (config.tol) return *config.tol;
  if (const char* env = std::getenv(kTolEnv); env != nullptr && *env != '\0') {
    const std::string s = trim(env);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v) || v <= 0.0)
      throw std::invalid_argument(std::string(kTolEnv) + " must be a positive number, got '" +
                                  env + "'");
    return v;
  }
  return SolverOptions{}.tol_sweep;
}

int run_command(const RunConfig& config, std::ostream& log) {
  namespace fs = std::filesystem;
  const fs::path out(config.output_dir);
  try {
    if (config.output_dir.empty()) throw std::invalid_argument("no output directory given");
    fs::create_directories(out);
  } catch (const std::exception& e) {
    log << "error: cannot prepare output directory: " << e.what() << '\n';
    return kExitError;
  }

  Summary summary;
  std::string stage = "validating configuration";
  try {
    summary.set("input", config.input_path);
    summary.set("strategy", config.strategy_spec);
    summary.set("mode", mode_name(config.mode));
    summary.set("seed", std::to_string(config.seed));

    if (config.max_sweeps < 1) throw std::invalid_argument("max sweeps must be at least 1");
    if (config.logabs_every < 0) throw std::invalid_argument("logabs interval must be >= 0");
    if (!fs::is_regular_file(config.input_path))
      throw std::invalid_argument("input file '" + config.input_path + "' does not exist");
    const Strategy strategy = parse_strategy(config.strategy_spec);
    if (const auto* f = std::get_if<FileStrategy>(&strategy); f && !fs::is_regular_file(f->path))
      throw std::invalid_argument("ordering file '" + f->path + "' does not exist");

    SolverOptions opts;
    opts.tol_sweep = resolve_tol(config);
    opts.max_sweeps = config.max_sweeps;
    opts.mode = config.mode;
    opts.enforce_order = config.sort;
    opts.accumulate = config.eigvecs;
    opts.trace = config.trace;
    opts.validate();
    summary.set("tol", format_double(opts.tol_sweep));
    summary.set("max_sweeps", std::to_string(opts.max_sweeps));
    summary.set("sort", config.sort ? "true" : "false");

    stage = "reading input";
    const ComplexMatrix a0 = parse_matrix_file(config.input_path);
    const std::size_t n = a0.size();
    summary.set("n", std::to_string(n));
    if (!a0.all_finite()) throw NumericalError("input contains non-finite entries");
    if (config.mode == Mode::real && !a0.is_real())
      throw std::invalid_argument("real mode requested for a matrix with imaginary parts");

    const double fro_a0 = frobenius_norm(a0);
    const double floor = std::max(1e-16 * fro_a0, 1e-300);
    int last_logabs = -1;
    auto snapshot = [&](std::size_t sweep, const ComplexMatrix& m) {
      const fs::path path = out / ("logabs_" + std::to_string(sweep) + ".csv");
      auto os = open_output(path);
      export_logabs(m, floor, os);
      close_output(os, path);
      last_logabs = static_cast<int>(sweep);
    };
    SweepObserver on_sweep;
    if (config.logabs_every > 0) {
      on_sweep = [&](std::size_t sweep, const ComplexMatrix& m) {
        if (sweep % static_cast<std::size_t>(config.logabs_every) == 0) snapshot(sweep, m);
      };
    }

    SolverResult result;
    if (n == 1) {
      // Nothing to rotate; a scalar is its own eigenvalue.
      result.matrix = a0;
      result.converged = true;
      result.fro_a0 = fro_a0;
      if (opts.accumulate) {
        result.transform = ComplexMatrix::identity(1);
        result.transform_inverse = ComplexMatrix::identity(1);
      }
      if (on_sweep) on_sweep(0, a0);
      summary.notes.push_back("1x1 input; no pivot pairs");
    } else {
      stage = "building pivot ordering";
      const PivotOrdering ordering = build_ordering(strategy, n, config.seed);
      std::ostringstream prov;
      write_provenance(prov, ordering.provenance);
      summary.provenance = prov.str();

      stage = "running solver";
      result = run(a0, ordering, opts, {}, on_sweep);
    }
    if (config.logabs_every > 0 && last_logabs != static_cast<int>(result.sweeps))
      snapshot(result.sweeps, result.matrix);

    summary.set("converged", result.converged ? "true" : "false");
    summary.set("sweeps", std::to_string(result.sweeps));
    summary.set("steps", std::to_string(result.steps));
    summary.set("off_B", format_double(result.off_b));
    summary.set("norm_C", format_double(result.norm_c));
    summary.set("fro_A0", format_double(fro_a0));

    stage = "writing artifacts";
    write_matrix((out / "final_matrix.csv").string(), result.matrix);
    if (config.trace && !result.trace.empty()) export_trace(result.trace, (out / "trace.csv").string());
    if (config.eigvecs) {
      write_matrix((out / "transform.csv").string(), *result.transform);
      write_matrix((out / "transform_inv.csv").string(), *result.transform_inverse);
    }

    stage = "detecting blocks";
    const auto perm = sort_permutation(result.matrix);
    const ComplexMatrix lambda = permute_symmetric(result.matrix, perm);
    BlockPartition bp = detect_blocks(lambda);
    for (std::size_t b = 0; b < bp.blocks.size(); ++b) {
      summary.blocks.push_back("block " + std::to_string(b + 1) + ": size " +
                               std::to_string(bp.blocks[b].size()) + " mu " +
                               format_double(bp.mu[b]));
    }

    stage = "computing block eigenvalues";
    bool have_eigenvalues = true;
    try {
      fill_block_eigenvalues(lambda, bp);
    } catch (const std::exception& e) {
      if (result.converged) throw;
      have_eigenvalues = false;
      summary.notes.push_back(std::string("eigenvalues.csv not written: ") + e.what());
    }
    if (have_eigenvalues) {
      order_within_blocks(bp);
      const fs::path path = out / "eigenvalues.csv";
      auto os = open_output(path);
      os << "block,mu,re,im\n";
      for (std::size_t b = 0; b < bp.blocks.size(); ++b)
        for (const auto& z : bp.block_eigenvalues[b])
          os << b + 1 << ',' << format_double(bp.mu[b]) << ',' << format_double(z.real()) << ','
             << format_double(z.imag()) << '\n';
      close_output(os, path);
    }

    summary.status = result.converged ? "converged" : "max_sweeps";
    summary.exit_code = result.converged ? kExitConverged : kExitMaxSweeps;
  } catch (const std::exception& e) {
    summary.status = "error";
    summary.exit_code = kExitError;
    summary.error = stage + ": " + e.what();
    log << "error: " << summary.error << '\n';
  }

  try {
    const fs::path path = out / "summary.txt";
    auto os = open_output(path);
    summary.write(os);
    close_output(os, path);
  } catch (const std::exception& e) {
    log << "error: cannot write summary: " << e.what() << '\n';
    return kExitError;
  }
  return summary.exit_code;
}

}  // namespace eberlein::cli
