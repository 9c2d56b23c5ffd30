#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eberlein/matrix.hpp"

namespace eberlein {

// Per-step convergence data, measured on the iterate after step k.
struct TraceRecord {
  std::uint64_t k = 0;
  std::size_t sweep = 0;
  std::size_t p = 0;  // 0-based; written 1-based
  std::size_t q = 0;
  double off_a = 0.0;
  double off_b = 0.0;
  double norm_c = 0.0;
  double fro_a = 0.0;
  double delta_k = 0.0;
  double c_pq_abs = 0.0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

inline constexpr const char* kTraceHeader = "k,sweep,p,q,off_A,off_B,norm_C,fro_A,delta_k,c_pq_abs";

void export_trace(const std::vector<TraceRecord>& trace, std::ostream& os);
void export_trace(const std::vector<TraceRecord>& trace, const std::string& path);
std::vector<TraceRecord> import_trace(std::istream& is);

// n x n grid of log10(max(|a_ij|, floor)).
void export_logabs(const ComplexMatrix& a, double floor, std::ostream& os);
void export_logabs(const ComplexMatrix& a, double floor, const std::string& path);

// Half-open index range [begin, end) of a diagonal block.
struct BlockRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const BlockRange&, const BlockRange&) = default;
};

struct BlockPartition {
  std::vector<BlockRange> blocks;
  std::vector<double> mu;  // mean real part of the block's diagonal
  std::vector<std::vector<Complex>> block_eigenvalues;
};

struct BlockOptions {
  // Consecutive real parts closer than this share a cluster. Defaults to
  // 1e-6 * (max mu - min mu + 1).
  std::optional<double> real_gap;
  // Entries above offdiag_tol * ||Lambda||_F couple their indices.
  double offdiag_tol = 1e-6;
  // Reject diagonals whose real parts are not non-increasing (up to real_gap).
  bool require_sorted = true;
};

BlockPartition detect_blocks(const ComplexMatrix& lambda, const BlockOptions& opts = {});

// Permutation sorting the diagonal real parts in non-increasing order
// (stable), and the permuted matrix P^T A P.
std::vector<std::size_t> sort_permutation(const ComplexMatrix& a);
ComplexMatrix permute_symmetric(const ComplexMatrix& a, const std::vector<std::size_t>& perm);

// 17 significant digits ("%.17g"); parses back to the same double.
std::string format_double(double x);

}  // namespace eberlein
