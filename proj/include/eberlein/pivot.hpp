#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace eberlein {

// Pivot pair (i, j) with i < j, 0-based. All text formats use 1-based indices.
using IndexPair = std::pair<std::size_t, std::size_t>;

enum class SerialFamily { column, row, column_reversed, row_reversed };

std::string to_string(SerialFamily f);
SerialFamily parse_family(const std::string& s);

// Swap the pairs at positions `position` and `position + 1`. Only
// admissible when the two pairs share no index.
struct AdmissibleTransposition {
  std::size_t position = 0;
};
// O = [O1, O2] -> [O2, O1] with |O1| = length.
struct Shift {
  std::size_t length = 0;
};
// (i, j) -> (q(i), q(j)), reordered so the smaller index comes first.
struct VertexPermutation {
  std::vector<std::size_t> map;
};
struct Reverse {};

using EquivalenceOp = std::variant<AdmissibleTransposition, Shift, VertexPermutation, Reverse>;

// Serial ordering with permutations. For column families, perms[j - 2] is
// the visiting order of rows inside column j (a permutation of 0..j-1,
// j = 2..n-1). For row families, perms[i] is the visiting order of columns
// inside row i (a permutation of i+1..n-1, i = 0..n-3). Empty perms means
// identity permutations throughout.
struct SerialBase {
  SerialFamily family = SerialFamily::column;
  std::vector<std::vector<std::size_t>> perms;
};

// How an ordering was built. Orderings read from a file carry no base.
struct Provenance {
  std::optional<SerialBase> base;
  std::vector<EquivalenceOp> ops;

  std::size_t shift_count() const;
  std::size_t permutation_count() const;
};

struct PivotOrdering {
  std::size_t n = 0;
  std::vector<IndexPair> pairs;
  Provenance provenance;

  std::size_t period() const noexcept { return pairs.size(); }
};

struct ValidationReport {
  bool ok = true;
  bool wrong_length = false;
  std::vector<IndexPair> duplicates;
  std::vector<IndexPair> missing;
  std::vector<IndexPair> invalid;  // out of range or not i < j

  std::string message() const;
};

PivotOrdering serial_ordering(std::size_t n, SerialFamily family,
                              const std::vector<std::vector<std::size_t>>& perms = {});
PivotOrdering transform_ordering(const PivotOrdering& o, const EquivalenceOp& op);
ValidationReport validate_ordering(const PivotOrdering& o);

// Samples a generalized serial ordering: random serial base (family and
// in-line permutations), one random vertex permutation, then num_ops
// interleaved admissible transpositions and shifts. num_ops defaults to 4N.
PivotOrdering random_sg_ordering(std::size_t n, std::uint64_t seed,
                                 std::optional<std::size_t> num_ops = std::nullopt);
// Random member of the serial family with permutations (no equivalence ops).
PivotOrdering random_sp_ordering(std::size_t n, std::uint64_t seed);

// Rebuilds an ordering from its provenance.
PivotOrdering replay(std::size_t n, const Provenance& provenance);

// Cyclic strategy with period N: step k visits pairs[k mod N].
class PivotCursor {
 public:
  explicit PivotCursor(PivotOrdering ordering);

  IndexPair next();
  IndexPair peek() const { return ordering_.pairs[k_ % ordering_.pairs.size()]; }
  std::uint64_t step() const noexcept { return k_; }
  void seek(std::uint64_t k) noexcept { k_ = k; }
  const PivotOrdering& ordering() const noexcept { return ordering_; }

 private:
  PivotOrdering ordering_;
  std::uint64_t k_ = 0;
};

IndexPair next_pivot(PivotCursor& cursor);

// "n N" header line, then one "i j" line per pair (1-based).
void write_ordering(std::ostream& os, const PivotOrdering& o);
PivotOrdering read_ordering(std::istream& is);

// Line-oriented operation log:
//   source serial | source external
//   base <family>
//   tau <line> <v1> <v2> ...        (1-based line index and values)
//   permute <q1> ... <qn>
//   transpose <position>            (1-based; swaps position and position+1)
//   shift <length>
//   reverse
void write_provenance(std::ostream& os, const Provenance& p);
Provenance read_provenance(std::istream& is);

}  // namespace eberlein
