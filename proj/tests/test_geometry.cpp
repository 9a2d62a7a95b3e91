#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "uts/error.hpp"
#include "uts/geometry.hpp"

using namespace uts;

namespace {

const DomainProduct unit_disk{{OpenDisk{0.0, 1.0}}};

double max_abs(const SampleGrid& g) {
  double m = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) m = std::max(m, std::abs(g.point(i)[0]));
  return m;
}

}  // namespace

TEST_CASE("boundary sampling of circles") {
  const PlanarCompact circle = PlanarCompact::disk(0.0, 1.0);
  const SampleGrid g = sample(circle, std::numbers::pi / 2);
  REQUIRE(g.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(std::abs(g.point(i)[0]) - 1.0) < 1e-15);
  CHECK(max_abs(sample(circle, 0.01)) == doctest::Approx(1.0).epsilon(1e-15));

  const ProductCompact two{{circle, PlanarCompact::disk(1.0, 0.5)}};
  const SampleGrid a = sample(circle, 0.1);
  const SampleGrid b = sample(PlanarCompact::disk(1.0, 0.5), 0.1);
  CHECK(sample(two, 0.1).size() == a.size() * b.size());
}

TEST_CASE("sup norms") {
  const SampleGrid g = sample(PlanarCompact::disk(0.0, 1.0), 0.05);
  CHECK(sup_norm(Poly::variable(0, 1, 0), g) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sup_norm(Poly(0, 1), g) == 0.0);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    const Poly p = oracle::random_poly(rng, 0, 1, 8, 6);
    double lip = 0.0;
    for (const auto& [e, c] : p.terms()) lip += std::abs(c) * e[0];
    const double h = 0.05;
    const PlanarCompact k = PlanarCompact::disk(0.0, 1.0);
    const double coarse = sup_norm(p, sample(k, h));
    const double fine = sup_norm(p, sample(k, h / 2));
    CHECK(std::abs(fine - coarse) <= lip * h);
  }
}

TEST_CASE("containment and shapes") {
  const PlanarCompact sa = PlanarCompact::slit_annulus(0.0, 1.0, 2.0, 0.5, std::numbers::pi);
  CHECK(contains(sa, 1.5));
  CHECK_FALSE(contains(sa, -1.5));
  CHECK_FALSE(contains(sa, 0.5));
  CHECK(contains(PlanarCompact::rect({0, 0}, {1, 2}), cplx(0.5, 1.9)));
  CHECK(contains(PlanarCompact::segment(0.0, 1.0), 0.25));
  CHECK_FALSE(incircle(PlanarCompact::segment(0.0, 1.0)).has_value());
  CHECK(incircle(PlanarCompact::disk(2.0, 0.5))->radius == doctest::Approx(0.5));
  const auto [lo, hi] = bounding_box(PlanarCompact::disk(cplx(1, 1), 2.0));
  CHECK(lo == cplx(-1, -1));
  CHECK(hi == cplx(3, 3));
  CHECK_THROWS_AS(PlanarCompact::disk(0.0, -1.0), DomainError);
  CHECK_THROWS_AS(PlanarCompact::rect({1, 1}, {0, 0}), DomainError);
}

TEST_CASE("unions require separated parts") {
  const auto u = PlanarCompact::make_union({PlanarCompact::disk(0.0, 0.5), PlanarCompact::disk(2.0, 0.25)});
  CHECK(u.complement_connected());
  CHECK(contains(u, 2.1));
  CHECK_THROWS_AS(PlanarCompact::make_union({PlanarCompact::disk(0.0, 1.0), PlanarCompact::disk(1.5, 1.0)}),
                  DomainError);
}

TEST_CASE("exhaustions") {
  const PlanarCompact m1 = exhaustion_factor(OpenDisk{0.0, 1.0}, 1, false);
  CHECK(m1 == PlanarCompact::disk(0.0, 0.5));
  CHECK(exhaustion_factor(OpenDisk{0.0, 1.0}, 2, true) == PlanarCompact::disk(0.0, 1.0));
  CHECK(exhaustion_factor(OpenDisk{3.0, 1.0}, 3, true).kind() == "clipped");
  for (const Domain dom : {Domain{OpenDisk{0.0, 1.0}}, Domain{OpenRect{{-1, -2}, {3, 1}}}}) {
    for (int p = 1; p < 8; ++p) {
      const ProductCompact a{{exhaustion_factor(dom, p, false)}};
      const ProductCompact b{{exhaustion_factor(dom, p + 1, false)}};
      CHECK(sampled_subset(a, b, 0.02));
      const ProductCompact ca{{exhaustion_factor(dom, p, true)}};
      const ProductCompact cb{{exhaustion_factor(dom, p + 1, true)}};
      CHECK(sampled_subset(ca, cb, 0.05));
    }
  }
  // every point of the domain lies in some M_p with p <= 64
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> rad(0.0, 1.0 - 1e-9);
  std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
  for (int t = 0; t < 200; ++t) {
    const cplx z = std::polar(rad(rng), ang(rng));
    bool found = false;
    for (int p = 1; p <= 64 && !found; ++p) found = contains(exhaustion_factor(OpenDisk{0.0, 1.0}, p, false), z);
    CHECK(found);
  }
}

TEST_CASE("outer compacts") {
  CHECK(outer_compacts(OpenDisk{0.0, 1.0}, 2, false) ==
        PlanarCompact::slit_annulus(0.0, 1.0, 2.0, 0.5, std::numbers::pi));
  const PlanarCompact closed = outer_compacts(OpenDisk{0.0, 1.0}, 2, true);
  CHECK(closed == PlanarCompact::slit_annulus(0.0, 1.5, 2.0, 0.5, std::numbers::pi));
  for (cplx z : fill_samples(closed, 0.02)) CHECK(distance_to_closure(OpenDisk{0.0, 1.0}, z) > 0.0);
  const ProductCompact test{{PlanarCompact::disk(1.5, 0.25)}};
  CHECK(sampled_subset(test, ProductCompact{{outer_compacts(OpenDisk{0.0, 1.0}, 2, false)}}, 0.02));
  for (int j = 1; j < 6; ++j)
    CHECK(sampled_subset(ProductCompact{{outer_compacts(OpenDisk{0.0, 1.0}, j, false)}},
                         ProductCompact{{outer_compacts(OpenDisk{0.0, 1.0}, j + 1, false)}}, 0.05));
}

TEST_CASE("slit annuli pass the complement escape test") {
  for (int j = 1; j <= 4; ++j) {
    const PlanarCompact r = outer_compacts(OpenDisk{0.0, 1.0}, j, false);
    CHECK(r.complement_connected());
    CHECK(escape_failures(r, complement_probes(r, 24)) == 0);
  }
}

TEST_CASE("T_m enumeration") {
  for (int m = 1; m < 6; ++m) CHECK(enumerate_Tm(unit_disk, m, false).compact.factors[0] ==
                                    outer_compacts(OpenDisk{0.0, 1.0}, m, false));
  const DomainProduct two{{OpenDisk{0.0, 1.0}, OpenDisk{0.0, 1.0}}};
  const TmEntry t1 = enumerate_Tm(two, 1, false);
  CHECK(t1.i0 == 0);
  CHECK(t1.compact.factors[0] == outer_compacts(OpenDisk{0.0, 1.0}, 1, false));
  CHECK(t1.compact.factors[1] == PlanarCompact::disk(0.0, 1.0));
  for (int m = 1; m <= 40; ++m) {
    const TmEntry t = enumerate_Tm(two, m, false);
    int disjoint = 0;
    for (std::size_t i = 0; i < 2; ++i) {
      bool outside = true;
      for (cplx z : fill_samples(t.compact.factors[i], 0.1)) outside = outside && std::abs(z) >= 1.0 - 1e-9;
      disjoint += outside ? 1 : 0;
    }
    CHECK(disjoint == 1);
  }
}

TEST_CASE("T_m cofinality for scenario compacts") {
  for (const auto& k : {PlanarCompact::disk(2.0, 0.25), PlanarCompact::disk(2.0, 0.125), PlanarCompact::disk(3.0, 0.25)}) {
    const auto m = find_Tm_containing(unit_disk, ProductCompact{{k}}, false, 0.02);
    REQUIRE(m.has_value());
    CHECK(*m <= 10'000);
  }
  const DomainProduct two{{OpenDisk{0.0, 1.0}, OpenDisk{0.0, 1.0}}};
  const ProductCompact k2{{PlanarCompact::disk(0.3, 0.2), PlanarCompact::disk(2.5, 0.25)}};
  const auto m2 = find_Tm_containing(two, k2, false, 0.05);
  REQUIRE(m2.has_value());
  CHECK(*m2 <= 10'000);
}
