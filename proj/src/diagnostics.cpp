#include "eberlein/diagnostics.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "eberlein/error.hpp"

namespace eberlein {
namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  return os;
}

void finish(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double_cell(const std::string& s, int line, int column) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  // Subnormal results also report ERANGE; only overflow is an error.
  if (s.empty() || end != s.c_str() + s.size() || (errno == ERANGE && std::isinf(v)))
    throw ParseError("malformed number '" + s + "'", line, column);
  return v;
}

unsigned long long parse_uint_cell(const std::string& s, int line, int column) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE)
    throw ParseError("malformed integer '" + s + "'", line, column);
  return v;
}

struct DisjointSet {
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void export_trace(const std::vector<TraceRecord>& trace, std::ostream& os) {
  if (trace.empty()) throw std::invalid_argument("export_trace: empty trace");
  os << kTraceHeader << '\n';
  for (const auto& r : trace) {
    os << r.k << ',' << r.sweep << ',' << r.p + 1 << ',' << r.q + 1 << ',' << format_double(r.off_a)
       << ',' << format_double(r.off_b) << ',' << format_double(r.norm_c) << ','
       << format_double(r.fro_a) << ',' << format_double(r.delta_k) << ','
       << format_double(r.c_pq_abs) << '\n';
  }
}

void export_trace(const std::vector<TraceRecord>& trace, const std::string& path) {
  auto os = open_for_write(path);
  export_trace(trace, os);
  finish(os, path);
}

std::vector<TraceRecord> import_trace(std::istream& is) {
  std::string line;
  int lineno = 1;
  if (!std::getline(is, line) || line != kTraceHeader)
    throw ParseError("expected trace header", lineno, 0);
  std::vector<TraceRecord> out;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 10) throw ParseError("expected 10 fields", lineno, 0);
    TraceRecord r;
    r.k = parse_uint_cell(cells[0], lineno, 1);
    r.sweep = parse_uint_cell(cells[1], lineno, 2);
    const auto p = parse_uint_cell(cells[2], lineno, 3);
    const auto q = parse_uint_cell(cells[3], lineno, 4);
    if (p < 1 || q < 1) throw ParseError("pivot indices are 1-based", lineno, 3);
    r.p = p - 1;
    r.q = q - 1;
    r.off_a = parse_double_cell(cells[4], lineno, 5);
    r.off_b = parse_double_cell(cells[5], lineno, 6);
    r.norm_c = parse_double_cell(cells[6], lineno, 7);
    r.fro_a = parse_double_cell(cells[7], lineno, 8);
    r.delta_k = parse_double_cell(cells[8], lineno, 9);
    r.c_pq_abs = parse_double_cell(cells[9], lineno, 10);
    out.push_back(r);
  }
  return out;
}

void export_logabs(const ComplexMatrix& a, double floor, std::ostream& os) {
  if (!(floor > 0.0)) throw std::invalid_argument("export_logabs: floor must be positive");
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) os << ',';
      os << format_double(std::log10(std::max(std::abs(a(i, j)), floor)));
    }
    os << '\n';
  }
}

void export_logabs(const ComplexMatrix& a, double floor, const std::string& path) {
  auto os = open_for_write(path);
  export_logabs(a, floor, os);
  finish(os, path);
}

BlockPartition detect_blocks(const ComplexMatrix& lambda, const BlockOptions& opts) {
  const std::size_t n = lambda.size();
  BlockPartition out;
  if (n == 0) return out;
  std::vector<double> mu(n);
  for (std::size_t i = 0; i < n; ++i) mu[i] = lambda(i, i).real();
  const auto [lo, hi] = std::minmax_element(mu.begin(), mu.end());
  const double gap = opts.real_gap.value_or(1e-6 * (*hi - *lo + 1.0));
  if (opts.require_sorted) {
    for (std::size_t i = 1; i < n; ++i) {
      if (mu[i] > mu[i - 1] + gap) {
        throw ContractViolation("diagonal real parts are not sorted at index " +
                                std::to_string(i + 1));
      }
    }
  }
  const double coupling = opts.offdiag_tol * frobenius_norm(lambda);

  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin + 1;
    while (end < n && std::abs(mu[end] - mu[end - 1]) < gap) ++end;

    // Connectivity inside the cluster, then the hulls of the components,
    // merged where they interleave, become contiguous blocks.
    DisjointSet ds(end - begin);
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = i + 1; j < end; ++j)
        if (std::abs(lambda(i, j)) > coupling || std::abs(lambda(j, i)) > coupling)
          ds.unite(i - begin, j - begin);
    std::vector<std::size_t> reach(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t root = ds.find(i - begin);
      reach[root] = std::max(reach[root], i);
    }
    std::size_t start = begin;
    std::size_t limit = begin;
    for (std::size_t i = begin; i < end; ++i) {
      limit = std::max(limit, reach[ds.find(i - begin)]);
      if (limit == i) {
        out.blocks.push_back({start, i + 1});
        start = i + 1;
        limit = i + 1;
      }
    }
    begin = end;
  }
  for (const auto& b : out.blocks) {
    double s = 0.0;
    for (std::size_t i = b.begin; i < b.end; ++i) s += mu[i];
    out.mu.push_back(s / static_cast<double>(b.size()));
  }
  return out;
}

std::vector<std::size_t> sort_permutation(const ComplexMatrix& a) {
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() > a(y, y).real();
  });
  return perm;
}

ComplexMatrix permute_symmetric(const ComplexMatrix& a, const std::vector<std::size_t>& perm) {
  const std::size_t n = a.size();
  if (perm.size() != n) throw DimensionError("permutation length does not match the matrix");
  ComplexMatrix b(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = a(perm[i], perm[j]);
  return b;
}

}  // namespace eberlein
