#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "uts/error.hpp"
#include "uts/poly.hpp"

using namespace uts;

namespace {

Poly z_pow(int k) { return Poly::monomial(0, 1, MultiIndex{k}); }

std::vector<cplx> random_vec(std::mt19937_64& rng, std::size_t n, double radius) {
  std::vector<cplx> v(n);
  for (auto& x : v) x = oracle::random_point(rng, radius);
  return v;
}

}  // namespace

TEST_CASE("evaluation") {
  Poly p(0, 2);
  p.add_term(MultiIndex{1, 1}, 1.0);
  const std::vector<cplx> z = {2.0, 3.0};
  CHECK(p.eval({}, z) == cplx(6.0));
  CHECK(Poly(1, 2).eval(std::vector<cplx>{1.0, 2.0, 3.0}) == cplx(0.0));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const Poly q = oracle::random_poly(rng, 2, 2, 5, 12);
    const auto x = random_vec(rng, 4, 1.2);
    const cplx want = oracle::eval(q, x);
    CHECK(std::abs(q.eval(x) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    CHECK(std::abs(PolyEvaluator(q)(x) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("canonical sparse form and arithmetic") {
  Poly p = z_pow(2) + Poly::constant(0, 1, 1.0);
  p -= z_pow(2);
  CHECK(p.size() == 1);
  CHECK((p - p).is_zero());
  CHECK(p.degree(0) == 0);
  CHECK(Poly(0, 1).degree(0) == -1);
  CHECK_THROWS_AS(Poly(0, 1) + Poly(1, 1), DimensionError);
  const Poly sq = (z_pow(1) + Poly::constant(0, 1, 1.0)) * (z_pow(1) - Poly::constant(0, 1, 1.0));
  CHECK(sq == z_pow(2) - Poly::constant(0, 1, 1.0));
}

TEST_CASE("differentiation") {
  CHECK(differentiate(z_pow(2), DiffOp{MultiIndex{0}}) == z_pow(2));
  CHECK(differentiate(z_pow(2), DiffOp{MultiIndex{1}}) == 2.0 * z_pow(1));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const Poly q = oracle::random_poly(rng, 1, 2, 6, 10);
    const auto x = random_vec(rng, 3, 0.9);
    for (std::size_t v = 0; v < 3; ++v) {
      MultiIndex e(3);
      e.set(v, 1);
      const cplx exact = differentiate(q, DiffOp{e}).eval(x);
      const cplx fd = oracle::central_difference(q, x, v, 1e-3);
      CHECK(std::abs(exact - fd) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("shift_center") {
  const std::vector<cplx> one = {1.0};
  Poly want(0, 1);
  want.add_term(MultiIndex{0}, 1.0);
  want.add_term(MultiIndex{1}, 2.0);
  want.add_term(MultiIndex{2}, 1.0);
  CHECK(shift_center(z_pow(2), one) == want);

  Poly z1z2(0, 2);
  z1z2.add_term(MultiIndex{1, 1}, 1.0);
  const Poly shifted = shift_center(z1z2, std::vector<cplx>{1.0, 1.0});
  for (const auto& m : {MultiIndex{0, 0}, MultiIndex{1, 0}, MultiIndex{0, 1}, MultiIndex{1, 1}})
    CHECK(shifted.coefficient(m) == cplx(1.0));
  CHECK(shifted.size() == 4);

  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const Poly q = oracle::random_poly(rng, 1, 2, 5, 10);
    const auto zeta = random_vec(rng, 2, 1.0);
    const CenteredPoly c = centered(q, zeta);
    for (int s = 0; s < 50; ++s) {
      const auto x = random_vec(rng, 3, 1.5);
      const cplx want_v = oracle::eval(q, x);
      CHECK(std::abs(c.eval({x.data(), 1}, {x.data() + 1, 2}) - want_v) <= 1e-10 * std::max(1.0, std::abs(want_v)));
    }
  }
}

TEST_CASE("gamma") {
  const std::vector<cplx> zero = {0.0};
  CHECK(gamma(z_pow(2), {}, zero, MultiIndex{2}) == cplx(1.0));
  Poly wz(1, 1);
  wz.add_term(MultiIndex{1, 1}, 1.0);
  const std::vector<cplx> w = {3.0};
  CHECK(gamma(wz, w, zero, MultiIndex{1}) == cplx(3.0));

  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    const Poly f = oracle::random_poly(rng, 1, 2, 4, 8);
    const Poly g = oracle::random_poly(rng, 1, 2, 4, 8);
    const auto wv = random_vec(rng, 1, 1.0);
    const auto zeta = random_vec(rng, 2, 1.0);
    const cplx alpha = oracle::random_point(rng, 2.0);
    const cplx beta = oracle::random_point(rng, 2.0);
    const MultiIndex m{static_cast<int>(t % 3), static_cast<int>((t / 3) % 3)};
    const std::vector<int> mv = {m[0], m[1]};
    const cplx gf = gamma(f, wv, zeta, m);
    CHECK(std::abs(gf - oracle::taylor_coefficient(f, wv, zeta, mv)) <= 1e-10 * std::max(1.0, std::abs(gf)));
    const cplx lin = gamma(alpha * f + beta * g, wv, zeta, m);
    const cplx sep = alpha * gf + beta * gamma(g, wv, zeta, m);
    CHECK(std::abs(lin - sep) <= 1e-12 * std::max(1.0, std::abs(sep)));
    // continuity under a coefficient perturbation of size 1e-8
    const Poly bumped = f + 1e-8 * g;
    CHECK(std::abs(gamma(bumped, wv, zeta, m) - gf) <= 1e-6);
  }
}

TEST_CASE("partial sums") {
  const std::vector<cplx> zero = {0.0};
  const Enumeration e1 = Enumeration::graded_lex(1);
  CHECK(partial_sum(z_pow(2), zero, 1, e1).body.is_zero());
  CHECK(partial_sum(z_pow(2), zero, 2, e1).body == z_pow(2));

  std::mt19937_64 rng(5);
  const Enumeration e2 = Enumeration::graded_lex(2);
  for (int t = 0; t < 20; ++t) {
    const Poly f = oracle::random_poly(rng, 1, 2, 4, 8);
    const auto zeta = random_vec(rng, 2, 0.8);
    const std::uint64_t cap = capture_index(e2, f.z_degrees());
    const CenteredPoly full = centered(f, zeta);
    for (std::uint64_t n = cap; n <= cap + 10; ++n) CHECK(partial_sum(f, zeta, n, e2) == full);
    // nesting: consecutive partial sums differ by the single (z - zeta)^{N_n} block
    for (std::uint64_t n = 1; n <= cap; ++n) {
      const Poly diff = partial_sum(f, zeta, n, e2).body - partial_sum(f, zeta, n - 1, e2).body;
      for (const auto& [ex, c] : diff.terms()) CHECK(ex.slice(1, 2) == e2.unrank(n));
    }
  }
}

TEST_CASE("coefficient stream") {
  const Enumeration e = Enumeration::graded_lex(1);
  CoefficientStream s(e, {0.0}, 0);
  CHECK(stream_partial_sum(s, 5).body.is_zero());
  const Poly p = z_pow(3) + 2.0 * z_pow(1);
  StreamBlock b;
  b.stage = 1;
  b.first_index = 0;
  b.last_index = 3;
  b.coefficients = s.coefficients_of(p);
  s.append_block(b);
  CHECK(stream_partial_sum(s, 3).body == p);
  const CenteredPoly before = stream_partial_sum(s, 2);

  StreamBlock bad;
  bad.first_index = 3;
  bad.last_index = 5;
  CHECK_THROWS_AS(s.append_block(bad), DomainError);
  StreamBlock backwards;
  backwards.first_index = 6;
  backwards.last_index = 5;
  CHECK_THROWS_AS(s.append_block(backwards), DomainError);

  StreamBlock next;
  next.stage = 2;
  next.first_index = 4;
  next.last_index = 6;
  next.coefficients = s.coefficients_of(z_pow(5));
  s.append_block(next);
  CHECK(stream_partial_sum(s, 2) == before);
  CHECK(stream_partial_sum(s, 6).body == p + z_pow(5));
  CHECK_THROWS_AS(stream_partial_sum(s, 7), DomainError);
}
