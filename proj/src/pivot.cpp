#include "eberlein/pivot.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "eberlein/error.hpp"
#include "eberlein/matrix.hpp"
#include "eberlein/random.hpp"

namespace eberlein {
namespace {

std::string pair_text(const IndexPair& pr) {
  return "(" + std::to_string(pr.first + 1) + "," + std::to_string(pr.second + 1) + ")";
}

bool is_permutation_of_range(const std::vector<std::size_t>& v, std::size_t lo, std::size_t hi) {
  if (v.size() != hi - lo + 1) return false;
  std::vector<bool> seen(v.size(), false);
  for (std::size_t x : v) {
    if (x < lo || x > hi || seen[x - lo]) return false;
    seen[x - lo] = true;
  }
  return true;
}

std::vector<std::size_t> identity_range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> v(hi - lo + 1);
  std::iota(v.begin(), v.end(), lo);
  return v;
}

bool is_column_family(SerialFamily f) {
  return f == SerialFamily::column || f == SerialFamily::column_reversed;
}

// Index range each in-line permutation must cover, per line number.
std::pair<std::size_t, std::size_t> perm_range(SerialFamily f, std::size_t n, std::size_t line) {
  if (is_column_family(f)) return {0, line + 1};  // column j = line + 2 covers 0..j-1
  return {line + 1, n - 1};                       // row i = line covers i+1..n-1
}

std::string op_text(const EquivalenceOp& op) {
  struct {
    std::string operator()(const AdmissibleTransposition& t) const {
      return "transpose " + std::to_string(t.position + 1);
    }
    std::string operator()(const Shift& s) const { return "shift " + std::to_string(s.length); }
    std::string operator()(const VertexPermutation& v) const {
      std::string s = "permute";
      for (std::size_t x : v.map) s += " " + std::to_string(x + 1);
      return s;
    }
    std::string operator()(const Reverse&) const { return "reverse"; }
  } visitor;
  return std::visit(visitor, op);
}

}  // namespace

std::string to_string(SerialFamily f) {
  switch (f) {
    case SerialFamily::column: return "column";
    case SerialFamily::row: return "row";
    case SerialFamily::column_reversed: return "column_reversed";
    case SerialFamily::row_reversed: return "row_reversed";
  }
  return "?";
}

SerialFamily parse_family(const std::string& s) {
  if (s == "column") return SerialFamily::column;
  if (s == "row") return SerialFamily::row;
  if (s == "column_reversed") return SerialFamily::column_reversed;
  if (s == "row_reversed") return SerialFamily::row_reversed;
  throw std::invalid_argument("unknown serial family '" + s + "'");
}

std::size_t Provenance::shift_count() const {
  return static_cast<std::size_t>(std::count_if(
      ops.begin(), ops.end(), [](const EquivalenceOp& op) { return std::holds_alternative<Shift>(op); }));
}

std::size_t Provenance::permutation_count() const {
  return static_cast<std::size_t>(std::count_if(ops.begin(), ops.end(), [](const EquivalenceOp& op) {
    return std::holds_alternative<VertexPermutation>(op);
  }));
}

std::string ValidationReport::message() const {
  if (ok) return "ok";
  std::string s;
  if (wrong_length) s += "wrong length; ";
  for (const auto& p : duplicates) s += "duplicate " + pair_text(p) + "; ";
  for (const auto& p : missing) s += "missing " + pair_text(p) + "; ";
  for (const auto& p : invalid) s += "invalid " + pair_text(p) + "; ";
  if (s.size() >= 2) s.resize(s.size() - 2);
  return s;
}

PivotOrdering serial_ordering(std::size_t n, SerialFamily family,
                              const std::vector<std::vector<std::size_t>>& perms) {
  if (n < 2) throw DimensionError("pivot ordering needs n >= 2");
  const std::size_t lines = n - 2;
  if (!perms.empty() && perms.size() != lines) {
    throw std::invalid_argument("serial ordering for n = " + std::to_string(n) + " needs " +
                                std::to_string(lines) + " permutations, got " +
                                std::to_string(perms.size()));
  }
  auto tau = [&](std::size_t line) {
    const auto [lo, hi] = perm_range(family, n, line);
    if (perms.empty()) return identity_range(lo, hi);
    if (!is_permutation_of_range(perms[line], lo, hi)) {
      throw std::invalid_argument("permutation " + std::to_string(line + 1) +
                                  " is not a permutation of " + std::to_string(lo + 1) + ".." +
                                  std::to_string(hi + 1));
    }
    return perms[line];
  };

  PivotOrdering o;
  o.n = n;
  o.pairs.reserve(pair_count(n));
  if (is_column_family(family)) {
    o.pairs.emplace_back(0, 1);
    for (std::size_t j = 2; j < n; ++j)
      for (std::size_t i : tau(j - 2)) o.pairs.emplace_back(i, j);
  } else {
    o.pairs.emplace_back(n - 2, n - 1);
    for (std::size_t i = n - 2; i-- > 0;)
      for (std::size_t j : tau(i)) o.pairs.emplace_back(i, j);
  }
  if (family == SerialFamily::column_reversed || family == SerialFamily::row_reversed)
    std::reverse(o.pairs.begin(), o.pairs.end());
  o.provenance.base = SerialBase{family, perms};
  return o;
}

PivotOrdering transform_ordering(const PivotOrdering& o, const EquivalenceOp& op) {
  PivotOrdering out = o;
  auto& pairs = out.pairs;
  const std::size_t len = pairs.size();
  if (const auto* t = std::get_if<AdmissibleTransposition>(&op)) {
    const std::size_t r = t->position;
    if (r + 1 >= len) {
      throw std::invalid_argument("transposition position " + std::to_string(r + 1) +
                                  " out of range");
    }
    const auto& a = pairs[r];
    const auto& b = pairs[r + 1];
    if (a.first == b.first || a.first == b.second || a.second == b.first ||
        a.second == b.second) {
      throw ContractViolation("transposition of " + pair_text(a) + " and " + pair_text(b) +
                              " is not admissible: the pairs share an index");
    }
    std::swap(pairs[r], pairs[r + 1]);
  } else if (const auto* s = std::get_if<Shift>(&op)) {
    if (s->length > len) {
      throw std::invalid_argument("shift length " + std::to_string(s->length) + " exceeds " +
                                  std::to_string(len));
    }
    std::rotate(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(s->length),
                pairs.end());
  } else if (const auto* v = std::get_if<VertexPermutation>(&op)) {
    if (!is_permutation_of_range(v->map, 0, o.n - 1)) {
      throw std::invalid_argument("vertex permutation is not a permutation of 1.." +
                                  std::to_string(o.n));
    }
    for (auto& pr : pairs) {
      const std::size_t a = v->map[pr.first];
      const std::size_t b = v->map[pr.second];
      pr = {std::min(a, b), std::max(a, b)};
    }
  } else {
    std::reverse(pairs.begin(), pairs.end());
  }
  out.provenance.ops.push_back(op);
  return out;
}

ValidationReport validate_ordering(const PivotOrdering& o) {
  ValidationReport r;
  const std::size_t n = o.n;
  if (n < 2) {
    r.ok = false;
    r.wrong_length = true;
    return r;
  }
  const std::size_t total = pair_count(n);
  r.wrong_length = o.pairs.size() != total;
  std::vector<int> count(total, 0);
  for (const auto& pr : o.pairs) {
    if (!(pr.first < pr.second && pr.second < n)) {
      r.invalid.push_back(pr);
      continue;
    }
    const std::size_t k = pair_index(pr.first, pr.second);
    if (++count[k] == 2) r.duplicates.push_back(pr);
  }
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (count[pair_index(i, j)] == 0) r.missing.emplace_back(i, j);
  r.ok = !r.wrong_length && r.duplicates.empty() && r.missing.empty() && r.invalid.empty();
  return r;
}

PivotOrdering replay(std::size_t n, const Provenance& provenance) {
  if (!provenance.base) throw std::invalid_argument("provenance has no serial base to replay");
  PivotOrdering o = serial_ordering(n, provenance.base->family, provenance.base->perms);
  for (const auto& op : provenance.ops) o = transform_ordering(o, op);
  return o;
}

namespace {

SerialBase random_base(std::size_t n, Random& rng) {
  SerialBase base;
  base.family = static_cast<SerialFamily>(rng.below(4));
  for (std::size_t line = 0; line + 2 < n; ++line) {
    const auto [lo, hi] = perm_range(base.family, n, line);
    auto perm = rng.permutation(hi - lo + 1);
    for (auto& x : perm) x += lo;
    base.perms.push_back(std::move(perm));
  }
  return base;
}

}  // namespace

PivotOrdering random_sp_ordering(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw DimensionError("pivot ordering needs n >= 2");
  Random rng(seed);
  const SerialBase base = random_base(n, rng);
  return serial_ordering(n, base.family, base.perms);
}

PivotOrdering random_sg_ordering(std::size_t n, std::uint64_t seed,
                                 std::optional<std::size_t> num_ops) {
  if (n < 2) throw DimensionError("pivot ordering needs n >= 2");
  Random rng(seed);
  const std::size_t total = pair_count(n);
  const std::size_t ops = num_ops.value_or(4 * total);

  PivotOrdering o;
  {
    const SerialBase base = random_base(n, rng);
    o = serial_ordering(n, base.family, base.perms);
  }
  o = transform_ordering(o, VertexPermutation{rng.permutation(n)});

  std::vector<std::size_t> admissible;
  for (std::size_t k = 0; k < ops; ++k) {
    admissible.clear();
    for (std::size_t r = 0; r + 1 < o.pairs.size(); ++r) {
      const auto& a = o.pairs[r];
      const auto& b = o.pairs[r + 1];
      if (a.first != b.first && a.first != b.second && a.second != b.first &&
          a.second != b.second)
        admissible.push_back(r);
    }
    if (rng.below(2) == 0 && !admissible.empty()) {
      o = transform_ordering(o, AdmissibleTransposition{admissible[rng.below(admissible.size())]});
    } else {
      o = transform_ordering(o, Shift{static_cast<std::size_t>(rng.below(total + 1))});
    }
  }
  return o;
}

PivotCursor::PivotCursor(PivotOrdering ordering) : ordering_(std::move(ordering)) {
  if (ordering_.pairs.empty()) throw std::invalid_argument("pivot cursor needs a non-empty ordering");
}

IndexPair PivotCursor::next() {
  const IndexPair pr = peek();
  ++k_;
  return pr;
}

IndexPair next_pivot(PivotCursor& cursor) { return cursor.next(); }

void write_ordering(std::ostream& os, const PivotOrdering& o) {
  os << o.n << ' ' << o.pairs.size() << '\n';
  for (const auto& pr : o.pairs) os << pr.first + 1 << ' ' << pr.second + 1 << '\n';
}

PivotOrdering read_ordering(std::istream& is) {
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError("empty ordering file", 1, 0);
  long long n = 0;
  long long count = 0;
  {
    std::istringstream ss(line);
    std::string extra;
    if (!(ss >> n >> count) || (ss >> extra) || n < 2 || count < 0)
      throw ParseError("expected header 'n N' with n >= 2", lineno, 0);
  }
  PivotOrdering o;
  o.n = static_cast<std::size_t>(n);
  for (long long k = 0; k < count; ++k) {
    if (!next_line()) throw ParseError("expected " + std::to_string(count) + " pairs", lineno + 1, 0);
    std::istringstream ss(line);
    long long i = 0;
    long long j = 0;
    std::string extra;
    if (!(ss >> i >> j) || (ss >> extra) || i < 1 || j < 1)
      throw ParseError("expected pair 'i j' of positive integers", lineno, 0);
    o.pairs.emplace_back(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
  }
  if (next_line()) throw ParseError("trailing content after pair list", lineno, 0);
  const ValidationReport report = validate_ordering(o);
  if (!report.ok) throw ParseError("invalid ordering: " + report.message(), lineno, 0);
  return o;
}

void write_provenance(std::ostream& os, const Provenance& p) {
  if (!p.base) {
    os << "source external\n";
  } else {
    os << "source serial\n";
    os << "base " << to_string(p.base->family) << '\n';
    const bool column = is_column_family(p.base->family);
    for (std::size_t line = 0; line < p.base->perms.size(); ++line) {
      os << "tau " << (column ? line + 3 : line + 1);
      for (std::size_t x : p.base->perms[line]) os << ' ' << x + 1;
      os << '\n';
    }
  }
  for (const auto& op : p.ops) os << op_text(op) << '\n';
}

Provenance read_provenance(std::istream& is) {
  Provenance p;
  std::string line;
  int lineno = 0;
  bool have_source = false;
  auto read_indices = [&](std::istringstream& ss) {
    std::vector<std::size_t> v;
    long long x = 0;
    while (ss >> x) {
      if (x < 1) throw ParseError("indices are 1-based", lineno, 0);
      v.push_back(static_cast<std::size_t>(x - 1));
    }
    if (!ss.eof()) throw ParseError("malformed index list", lineno, 0);
    return v;
  };
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    if (key == "source") {
      std::string what;
      ss >> what;
      if (what == "serial") {
        p.base = SerialBase{};
      } else if (what != "external") {
        throw ParseError("unknown source '" + what + "'", lineno, 0);
      }
      have_source = true;
    } else if (key == "base") {
      std::string fam;
      ss >> fam;
      if (!p.base) throw ParseError("'base' requires 'source serial'", lineno, 0);
      try {
        p.base->family = parse_family(fam);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), lineno, 0);
      }
    } else if (key == "tau") {
      if (!p.base) throw ParseError("'tau' requires 'source serial'", lineno, 0);
      long long idx = 0;
      if (!(ss >> idx)) throw ParseError("tau needs a line index", lineno, 0);
      const long long expected = static_cast<long long>(p.base->perms.size()) +
                                 (is_column_family(p.base->family) ? 3 : 1);
      if (idx != expected) throw ParseError("tau lines must be consecutive", lineno, 0);
      p.base->perms.push_back(read_indices(ss));
    } else if (key == "permute") {
      p.ops.emplace_back(VertexPermutation{read_indices(ss)});
    } else if (key == "transpose") {
      long long r = 0;
      if (!(ss >> r) || r < 1) throw ParseError("transpose needs a 1-based position", lineno, 0);
      p.ops.emplace_back(AdmissibleTransposition{static_cast<std::size_t>(r - 1)});
    } else if (key == "shift") {
      long long len = 0;
      if (!(ss >> len) || len < 0) throw ParseError("shift needs a length >= 0", lineno, 0);
      p.ops.emplace_back(Shift{static_cast<std::size_t>(len)});
    } else if (key == "reverse") {
      p.ops.emplace_back(Reverse{});
    } else {
      throw ParseError("unknown provenance entry '" + key + "'", lineno, 0);
    }
  }
  if (!have_source) throw ParseError("provenance log has no 'source' line", lineno, 0);
  return p;
}

}  // namespace eberlein
