#include <doctest.h>

#include <cmath>

#include "uts/error.hpp"
#include "uts/mergelyan.hpp"

using namespace uts;

namespace {

ApproxTask two_piece(double tol, std::vector<int> sweep) {
  const ProductCompact inner{{PlanarCompact::disk(0.0, 0.5)}};
  const ProductCompact outer{{PlanarCompact::disk(2.0, 0.25)}};
  ApproxTask task = glue_target(Poly(0, 1), Poly::constant(0, 1, 1.0), inner, outer);
  task.degree_budget = uniform_budget(0, 1, 0, 60);
  task.degree_sweep = std::move(sweep);
  task.tolerance = tol;
  return task;
}

}  // namespace

TEST_CASE("two-piece fit meets 1e-3 within degree 60") {
  const FitReport rep = fit(two_piece(1e-3, {10, 20, 40, 60}));
  CHECK(rep.success);
  CHECK(rep.max_error() < 1e-3);
  CHECK(rep.degree_cap <= 60);
  CHECK(rep.fitted().total_z_degree() <= 60);
}

TEST_CASE("residual history is weakly decreasing over the sweep") {
  const FitReport rep = fit(two_piece(1e-15, {10, 20, 40, 60}));
  REQUIRE(rep.residual_history.size() == 4);
  for (std::size_t i = 1; i < rep.residual_history.size(); ++i)
    CHECK(rep.residual_history[i].achieved_error <= rep.residual_history[i - 1].achieved_error * (1 + 1e-9));
  CHECK_FALSE(rep.success);
  CHECK(rep.max_error() == doctest::Approx(rep.residual_history.back().achieved_error));
}

TEST_CASE("the three routes agree on an easy target") {
  ApproxTask task = two_piece(1e-3, {});
  task.degree_budget = uniform_budget(0, 1, 0, 40);
  const FitReport raw = fit(task);
  const FitReport scaled = fit_with_scaling(task, false);
  const FitReport orth = fit_with_scaling(task, true);
  CHECK(raw.max_error() < 1e-2);
  CHECK(scaled.max_error() < 1e-2);
  CHECK(orth.max_error() < 1e-2);
  // the fitted polynomial reproduces the targets pointwise
  for (const Poly& p : {raw.fitted(), orth.fitted()}) {
    const std::vector<cplx> a{0.3}, b{2.1};
    CHECK(std::abs(p.eval({}, a)) < 1e-2);
    CHECK(std::abs(p.eval({}, b) - 1.0) < 1e-2);
  }
}

TEST_CASE("a polynomial target inside the basis is matched to rounding") {
  ApproxTask task;
  task.r = 0;
  task.d = 1;
  Poly target = Poly::variable(0, 1, 0) * Poly::variable(0, 1, 0) + Poly::constant(0, 1, cplx(0, 1));
  task.pieces.push_back({ProductCompact{{PlanarCompact::disk(0.0, 1.0)}}, target, {}});
  task.degree_budget = uniform_budget(0, 1, 0, 4);
  task.tolerance = 1e-10;
  const FitReport rep = fit(task);
  CHECK(rep.max_error() < 1e-10);
  CHECK(std::abs(rep.fitted().coefficient(MultiIndex{2}) - 1.0) < 1e-10);
}

TEST_CASE("derivative matching") {
  ApproxTask task = two_piece(1e-1, {});
  task.degree_budget = uniform_budget(0, 1, 0, 40);
  task.derivative_orders = family_Fl(0, 1, 1);
  const FitReport rep = fit(task);
  REQUIRE(rep.achieved_errors.size() == 2);
  CHECK(rep.achieved_errors[1].first == DiffOp{MultiIndex{1}});
  CHECK(rep.max_error() < 1e-1);
}

TEST_CASE("basis premultiplier keeps low coefficients at zero") {
  ApproxTask task = two_piece(1e-2, {});
  task.degree_budget = uniform_budget(0, 1, 0, 30);
  task.factor = BasisFactor{0, 3};
  const Poly p = fit(task).fitted();
  for (int k = 0; k < 3; ++k) CHECK(p.coefficient(MultiIndex{k}) == cplx(0.0));
}

TEST_CASE("glue_target validation") {
  const ProductCompact a{{PlanarCompact::disk(0.0, 1.0)}};
  const ProductCompact b{{PlanarCompact::disk(1.5, 1.0)}};
  CHECK_THROWS_AS(glue_target(Poly(0, 1), Poly(0, 1), a, b), DomainError);
  CHECK_THROWS_AS(glue_target(Poly(0, 1), Poly(1, 1), a, a), DimensionError);
  ApproxTask bad = two_piece(1e-3, {});
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(fit(bad), DomainError);
  bad = two_piece(1e-3, {});
  bad.degree_budget = MultiIndex{1, 2};
  CHECK_THROWS_AS(fit(bad), DimensionError);

  // differing non-separating factors are replaced by a common enclosing disk
  const ProductCompact in2{{PlanarCompact::disk(0.0, 0.5), PlanarCompact::disk(0.0, 0.5)}};
  const ProductCompact out2{{PlanarCompact::disk(3.0, 0.5), PlanarCompact::disk(0.2, 0.3)}};
  const ApproxTask glued = glue_target(Poly(0, 2), Poly::constant(0, 2, 1.0), in2, out2);
  REQUIRE(glued.pieces.size() == 2);
  CHECK(glued.pieces[0].support.factors[1] == glued.pieces[1].support.factors[1]);
}
