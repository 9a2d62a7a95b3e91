#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uts {

/// A tuple of non-negative integers of fixed length.
///
/// Used for exponent tuples of monomials, for the enumeration values N_k and
/// for the orders of mixed partial derivatives.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t dim) : entries_(dim, 0) {}
  MultiIndex(std::initializer_list<int> entries);
  explicit MultiIndex(std::vector<int> entries);

  std::size_t size() const { return entries_.size(); }
  int operator[](std::size_t i) const { return entries_[i]; }
  void set(std::size_t i, int value);

  int total() const;
  std::span<const int> entries() const { return entries_; }

  /// Component-wise <=.
  bool divides(const MultiIndex& other) const;

  MultiIndex operator+(const MultiIndex& other) const;
  /// Concatenation (w-part followed by z-part).
  MultiIndex concat(const MultiIndex& tail) const;
  MultiIndex slice(std::size_t first, std::size_t count) const;

  std::string str() const;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> entries_;
};

enum class Scheme { GradedLex, GradedRevlex, DiagonalCantor, ExplicitTable };

/// A bijection k -> N_k from the naturals onto N^d.
///
/// graded-lex orders by total degree, then lexicographically with the first
/// coordinate most significant; graded-revlex is graded-lex on the reversed
/// tuple; diagonal-cantor iterates the Cantor pairing function. An explicit
/// table lists a prefix; with `extend_graded` the table must be a permutation
/// of the first |table| graded-lex indices and graded-lex continues after it.
class Enumeration {
 public:
  static Enumeration graded_lex(std::size_t dim);
  static Enumeration graded_revlex(std::size_t dim);
  static Enumeration diagonal_cantor(std::size_t dim);
  static Enumeration explicit_table(std::vector<MultiIndex> table, bool extend_graded);
  /// "graded-lex", "graded-revlex" or "diagonal-cantor".
  static Enumeration from_tag(std::string_view tag, std::size_t dim);

  std::size_t dimension() const { return dim_; }
  Scheme scheme() const { return scheme_; }
  std::string tag() const;
  /// Degree-monotone: |N_k| is non-decreasing in k.
  bool graded() const;
  const std::vector<MultiIndex>& table() const { return table_; }
  bool extends_graded() const { return extend_graded_; }

  MultiIndex unrank(std::uint64_t k) const;
  std::uint64_t rank(const MultiIndex& m) const;

  friend bool operator==(const Enumeration&, const Enumeration&) = default;

 private:
  Enumeration(std::size_t dim, Scheme scheme) : dim_(dim), scheme_(scheme) {}

  std::size_t dim_ = 0;
  Scheme scheme_ = Scheme::GradedLex;
  std::vector<MultiIndex> table_;
  bool extend_graded_ = false;
};

/// Least n' such that every N_k inside the box prod [0, l_i] has k <= n'.
std::uint64_t capture_index(const Enumeration& enumeration, const MultiIndex& degrees);

/// Infinite decidable subset of the naturals from which stage indices are drawn.
class IndexSet {
 public:
  enum class Kind { All, Arithmetic, List };

  static IndexSet all();
  /// {a + b k : k >= 0}, b >= 1.
  static IndexSet arithmetic(std::uint64_t a, std::uint64_t b);
  /// The listed values and every integer >= the last one.
  static IndexSet list(std::vector<std::uint64_t> values);
  /// "mu:all", "mu:arith:a,b", "mu:list:v1,v2,...,vk+".
  static IndexSet from_tag(std::string_view tag);

  Kind kind() const { return kind_; }
  std::string tag() const;
  bool contains(std::uint64_t n) const;
  /// Smallest member >= n, provided it is <= n + scan_bound.
  std::optional<std::uint64_t> first_at_or_after(std::uint64_t n,
                                                 std::uint64_t scan_bound = 1'000'000) const;

 private:
  Kind kind_ = Kind::All;
  std::uint64_t a_ = 0;
  std::uint64_t b_ = 1;
  std::vector<std::uint64_t> values_;
};

/// Mixed partial derivative over the r + d coordinates (w first, then z).
struct DiffOp {
  MultiIndex exponents;

  static DiffOp identity(std::size_t nvars) { return DiffOp{MultiIndex(nvars)}; }
  int order() const { return exponents.total(); }
  bool is_identity() const { return order() == 0; }
  std::string str() const;

  friend auto operator<=>(const DiffOp&, const DiffOp&) = default;
  friend bool operator==(const DiffOp&, const DiffOp&) = default;
};

/// All operators of total order <= l in r + d coordinates, identity first.
std::vector<DiffOp> family_Fl(std::size_t r, std::size_t d, int l);

/// Binomial coefficient, saturating at UINT64_MAX on overflow.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t k);

}  // namespace uts
