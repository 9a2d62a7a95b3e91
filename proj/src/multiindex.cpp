#include "uts/multiindex.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "uts/error.hpp"

namespace uts {

namespace {

using u128 = unsigned __int128;
constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t checked(u128 v, const char* what) {
  if (v > static_cast<u128>(kSaturated)) throw DomainError(std::string(what) + ": index overflow");
  return static_cast<std::uint64_t>(v);
}

// Number of m in N^dim with |m| == t.
std::uint64_t count_exact(std::size_t dim, std::uint64_t t) {
  if (dim == 0) return t == 0 ? 1 : 0;
  return binomial(t + dim - 1, dim - 1);
}

// Number of m in N^dim with |m| < t.
std::uint64_t count_below(std::size_t dim, std::uint64_t t) {
  if (dim == 0) return t > 0 ? 1 : 0;
  if (t == 0) return 0;
  return binomial(t + dim - 1, dim);
}

u128 graded_lex_rank_in_degree(std::span<const int> m, std::uint64_t t) {
  u128 r = 0;
  for (std::size_t pos = 0; pos + 1 < m.size(); ++pos) {
    const std::size_t rest = m.size() - pos - 1;
    for (int a = 0; a < m[pos]; ++a) r += count_exact(rest, t - static_cast<std::uint64_t>(a));
    t -= static_cast<std::uint64_t>(m[pos]);
  }
  return r;
}

std::uint64_t graded_lex_rank(const MultiIndex& m) {
  const auto t = static_cast<std::uint64_t>(m.total());
  const std::uint64_t base = count_below(m.size(), t);
  if (base == kSaturated) throw DomainError("graded-lex rank: index overflow");
  return checked(static_cast<u128>(base) + graded_lex_rank_in_degree(m.entries(), t), "graded-lex rank");
}

MultiIndex graded_lex_unrank(std::size_t dim, std::uint64_t k) {
  if (dim == 0) {
    if (k != 0) throw DomainError("N^0 has a single element");
    return MultiIndex(0);
  }
  // Largest t with count_below(t) <= k.
  std::uint64_t lo = 0;
  std::uint64_t hi = 1;
  while (count_below(dim, hi) <= k) {
    lo = hi;
    if (hi > (kSaturated >> 1)) throw DomainError("graded-lex unrank: index overflow");
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (count_below(dim, mid) <= k) lo = mid; else hi = mid;
  }
  std::uint64_t t = lo;
  std::uint64_t rem = k - count_below(dim, t);
  MultiIndex out(dim);
  for (std::size_t pos = 0; pos + 1 < dim; ++pos) {
    const std::size_t rest = dim - pos - 1;
    std::uint64_t a = 0;
    for (;; ++a) {
      const std::uint64_t c = count_exact(rest, t - a);
      if (rem < c) break;
      rem -= c;
    }
    out.set(pos, static_cast<int>(a));
    t -= a;
  }
  out.set(dim - 1, static_cast<int>(t));
  return out;
}

MultiIndex reversed(const MultiIndex& m) {
  std::vector<int> e(m.entries().begin(), m.entries().end());
  std::reverse(e.begin(), e.end());
  return MultiIndex(std::move(e));
}

std::uint64_t cantor_rank(std::span<const int> m) {
  if (m.size() == 1) return static_cast<std::uint64_t>(m[0]);
  return cantor_pair(static_cast<std::uint64_t>(m[0]), cantor_rank(m.subspan(1)));
}

void cantor_unrank(std::uint64_t k, std::size_t dim, std::vector<int>& out) {
  if (dim == 1) {
    if (k > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
      throw DomainError("diagonal-cantor unrank: entry overflow");
    out.push_back(static_cast<int>(k));
    return;
  }
  const auto [x, y] = cantor_unpair(k);
  out.push_back(static_cast<int>(x));
  cantor_unrank(y, dim - 1, out);
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw SchemaError("expected a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

}  // namespace

MultiIndex::MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_)
    if (e < 0) throw DomainError("multi-index entries must be non-negative");
}

void MultiIndex::set(std::size_t i, int value) {
  if (value < 0) throw DomainError("multi-index entries must be non-negative");
  entries_.at(i) = value;
}

int MultiIndex::total() const {
  int t = 0;
  for (int e : entries_) t += e;
  return t;
}

bool MultiIndex::divides(const MultiIndex& other) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (entries_[i] > other.entries_[i]) return false;
  return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.size() != size()) throw DimensionError("multi-index dimension mismatch");
  MultiIndex out = *this;
  for (std::size_t i = 0; i < size(); ++i) out.entries_[i] += other.entries_[i];
  return out;
}

MultiIndex MultiIndex::concat(const MultiIndex& tail) const {
  std::vector<int> e = entries_;
  e.insert(e.end(), tail.entries_.begin(), tail.entries_.end());
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::slice(std::size_t first, std::size_t count) const {
  if (first + count > size()) throw DimensionError("multi-index slice out of range");
  return MultiIndex(std::vector<int>(entries_.begin() + static_cast<std::ptrdiff_t>(first),
                                     entries_.begin() + static_cast<std::ptrdiff_t>(first + count)));
}

std::string MultiIndex::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < size(); ++i) os << (i ? "," : "") << entries_[i];
  os << ')';
  return os.str();
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > static_cast<u128>(kSaturated)) return kSaturated;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y) {
  const u128 s = static_cast<u128>(x) + y;
  return checked(s * (s + 1) / 2 + y, "cantor pairing");
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t k) {
  // w = floor((sqrt(8k + 1) - 1) / 2), corrected for rounding.
  const u128 disc = static_cast<u128>(k) * 8 + 1;
  auto w = static_cast<std::uint64_t>((std::sqrt(static_cast<long double>(disc)) - 1.0L) / 2.0L);
  auto tri = [](std::uint64_t v) { return static_cast<u128>(v) * (v + 1) / 2; };
  while (w > 0 && tri(w) > k) --w;
  while (tri(w + 1) <= k) ++w;
  const auto y = static_cast<std::uint64_t>(k - tri(w));
  return {w - y, y};
}

// ---------------------------------------------------------------------------

Enumeration Enumeration::graded_lex(std::size_t dim) {
  if (dim == 0) throw DomainError("enumeration dimension must be positive");
  return Enumeration(dim, Scheme::GradedLex);
}

Enumeration Enumeration::graded_revlex(std::size_t dim) {
  if (dim == 0) throw DomainError("enumeration dimension must be positive");
  return Enumeration(dim, Scheme::GradedRevlex);
}

Enumeration Enumeration::diagonal_cantor(std::size_t dim) {
  if (dim == 0) throw DomainError("enumeration dimension must be positive");
  return Enumeration(dim, Scheme::DiagonalCantor);
}

Enumeration Enumeration::explicit_table(std::vector<MultiIndex> table, bool extend_graded) {
  if (table.empty()) throw DomainError("explicit enumeration table is empty");
  const std::size_t dim = table.front().size();
  if (dim == 0) throw DomainError("enumeration dimension must be positive");
  std::set<MultiIndex> seen;
  for (const auto& m : table) {
    if (m.size() != dim) throw DimensionError("explicit enumeration table mixes dimensions");
    if (!seen.insert(m).second) throw DomainError("explicit enumeration table repeats " + m.str());
  }
  if (extend_graded) {
    for (std::uint64_t k = 0; k < table.size(); ++k)
      if (!seen.count(graded_lex_unrank(dim, k)))
        throw DomainError("extended explicit table must permute a graded-lex prefix");
  }
  Enumeration e(dim, Scheme::ExplicitTable);
  e.table_ = std::move(table);
  e.extend_graded_ = extend_graded;
  return e;
}

Enumeration Enumeration::from_tag(std::string_view tag, std::size_t dim) {
  if (tag == "graded-lex") return graded_lex(dim);
  if (tag == "graded-revlex") return graded_revlex(dim);
  if (tag == "diagonal-cantor") return diagonal_cantor(dim);
  throw SchemaError("unknown enumeration tag '" + std::string(tag) + "'");
}

std::string Enumeration::tag() const {
  switch (scheme_) {
    case Scheme::GradedLex: return "graded-lex";
    case Scheme::GradedRevlex: return "graded-revlex";
    case Scheme::DiagonalCantor: return "diagonal-cantor";
    case Scheme::ExplicitTable: return "explicit-table";
  }
  return "?";
}

bool Enumeration::graded() const {
  switch (scheme_) {
    case Scheme::GradedLex:
    case Scheme::GradedRevlex: return true;
    case Scheme::DiagonalCantor: return dim_ == 1;
    case Scheme::ExplicitTable: {
      for (std::size_t k = 1; k < table_.size(); ++k)
        if (table_[k].total() < table_[k - 1].total()) return false;
      return extend_graded_;
    }
  }
  return false;
}

MultiIndex Enumeration::unrank(std::uint64_t k) const {
  switch (scheme_) {
    case Scheme::GradedLex: return graded_lex_unrank(dim_, k);
    case Scheme::GradedRevlex: return reversed(graded_lex_unrank(dim_, k));
    case Scheme::DiagonalCantor: {
      std::vector<int> out;
      out.reserve(dim_);
      cantor_unrank(k, dim_, out);
      return MultiIndex(std::move(out));
    }
    case Scheme::ExplicitTable:
      if (k < table_.size()) return table_[k];
      if (!extend_graded_) throw DomainError("index " + std::to_string(k) + " beyond explicit enumeration table");
      return graded_lex_unrank(dim_, k);
  }
  throw DomainError("unknown scheme");
}

std::uint64_t Enumeration::rank(const MultiIndex& m) const {
  if (m.size() != dim_) throw DimensionError("rank: multi-index has dimension " + std::to_string(m.size()) +
                                             ", enumeration has " + std::to_string(dim_));
  switch (scheme_) {
    case Scheme::GradedLex: return graded_lex_rank(m);
    case Scheme::GradedRevlex: return graded_lex_rank(reversed(m));
    case Scheme::DiagonalCantor: return cantor_rank(m.entries());
    case Scheme::ExplicitTable: {
      for (std::size_t k = 0; k < table_.size(); ++k)
        if (table_[k] == m) return k;
      if (!extend_graded_) throw DomainError(m.str() + " not in explicit enumeration table");
      return graded_lex_rank(m);
    }
  }
  throw DomainError("unknown scheme");
}

std::uint64_t capture_index(const Enumeration& enumeration, const MultiIndex& degrees) {
  if (degrees.size() != enumeration.dimension()) throw DimensionError("capture_index: dimension mismatch");
  const bool tableless_graded =
      enumeration.scheme() == Scheme::GradedLex || enumeration.scheme() == Scheme::GradedRevlex;
  // In a graded scheme the box corner is the unique element of maximal degree.
  if (tableless_graded) return enumeration.rank(degrees);

  std::uint64_t box = 1;
  for (int l : degrees.entries()) {
    box *= static_cast<std::uint64_t>(l) + 1;
    if (box > 10'000'000) throw DomainError("capture_index: box too large for scan");
  }
  std::uint64_t best = 0;
  MultiIndex m(degrees.size());
  for (std::uint64_t idx = 0; idx < box; ++idx) {
    std::uint64_t rest = idx;
    for (std::size_t i = 0; i < degrees.size(); ++i) {
      const auto side = static_cast<std::uint64_t>(degrees[i]) + 1;
      m.set(i, static_cast<int>(rest % side));
      rest /= side;
    }
    best = std::max(best, enumeration.rank(m));
  }
  return best;
}

// ---------------------------------------------------------------------------

IndexSet IndexSet::all() { return IndexSet{}; }

IndexSet IndexSet::arithmetic(std::uint64_t a, std::uint64_t b) {
  if (b == 0) throw DomainError("arithmetic index set needs step >= 1");
  IndexSet s;
  s.kind_ = Kind::Arithmetic;
  s.a_ = a;
  s.b_ = b;
  return s;
}

IndexSet IndexSet::list(std::vector<std::uint64_t> values) {
  if (values.empty()) throw DomainError("listed index set needs at least one value");
  if (!std::is_sorted(values.begin(), values.end()) ||
      std::adjacent_find(values.begin(), values.end()) != values.end())
    throw DomainError("listed index set must be strictly increasing");
  IndexSet s;
  s.kind_ = Kind::List;
  s.values_ = std::move(values);
  return s;
}

IndexSet IndexSet::from_tag(std::string_view tag) {
  if (tag == "mu:all") return all();
  constexpr std::string_view arith = "mu:arith:";
  constexpr std::string_view lst = "mu:list:";
  if (tag.starts_with(arith)) {
    auto body = tag.substr(arith.size());
    const auto comma = body.find(',');
    if (comma == std::string_view::npos) throw SchemaError("mu:arith needs 'a,b'");
    return arithmetic(parse_u64(body.substr(0, comma)), parse_u64(body.substr(comma + 1)));
  }
  if (tag.starts_with(lst)) {
    auto body = tag.substr(lst.size());
    if (!body.ends_with('+')) throw SchemaError("mu:list must end with '+' (the set continues beyond the last value)");
    body.remove_suffix(1);
    std::vector<std::uint64_t> values;
    while (!body.empty()) {
      const auto comma = body.find(',');
      values.push_back(parse_u64(body.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
    return list(std::move(values));
  }
  throw SchemaError("unknown index-set tag '" + std::string(tag) + "'");
}

std::string IndexSet::tag() const {
  switch (kind_) {
    case Kind::All: return "mu:all";
    case Kind::Arithmetic: return "mu:arith:" + std::to_string(a_) + "," + std::to_string(b_);
    case Kind::List: {
      std::string s = "mu:list:";
      for (std::size_t i = 0; i < values_.size(); ++i) s += (i ? "," : "") + std::to_string(values_[i]);
      return s + "+";
    }
  }
  return "?";
}

bool IndexSet::contains(std::uint64_t n) const {
  switch (kind_) {
    case Kind::All: return true;
    case Kind::Arithmetic: return n >= a_ && (n - a_) % b_ == 0;
    case Kind::List: return n >= values_.back() || std::binary_search(values_.begin(), values_.end(), n);
  }
  return false;
}

std::optional<std::uint64_t> IndexSet::first_at_or_after(std::uint64_t n, std::uint64_t scan_bound) const {
  std::uint64_t candidate = n;
  switch (kind_) {
    case Kind::All: break;
    case Kind::Arithmetic:
      if (n <= a_) candidate = a_;
      else candidate = a_ + ((n - a_ + b_ - 1) / b_) * b_;
      break;
    case Kind::List:
      if (n >= values_.back()) break;
      candidate = *std::lower_bound(values_.begin(), values_.end(), n);
      break;
  }
  if (candidate - n > scan_bound) return std::nullopt;
  return candidate;
}

// ---------------------------------------------------------------------------

std::string DiffOp::str() const {
  if (is_identity()) return "id";
  return "d" + exponents.str();
}

std::vector<DiffOp> family_Fl(std::size_t r, std::size_t d, int l) {
  if (l < 1) throw DomainError("family_Fl needs l >= 1");
  const std::size_t n = r + d;
  if (n == 0) return {DiffOp{MultiIndex(0)}};
  const std::uint64_t count = binomial(static_cast<std::uint64_t>(l) + n, n);
  std::vector<DiffOp> out;
  out.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) out.push_back(DiffOp{graded_lex_unrank(n, k)});
  return out;
}

}  // namespace uts
