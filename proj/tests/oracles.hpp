#pragma once

// Reference implementations that share no code paths with the library
// beyond the Poly container: brute-force enumeration orders, direct
// monomial sums, term-by-term Taylor coefficients and finite differences.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "uts/multiindex.hpp"
#include "uts/poly.hpp"
#include "uts/verify.hpp"

namespace oracle {

using uts::cplx;
using uts::MultiIndex;
using uts::Poly;

/// All tuples of length d and total <= max_total, sorted by (total, lexicographic).
std::vector<std::vector<int>> graded_lex_list(std::size_t d, int max_total);

/// Position of `target` in a list, scanning from the front; -1 if absent.
std::int64_t position(const std::vector<std::vector<int>>& list, const std::vector<int>& target);

/// Smallest n such that every tuple inside the box prod [0, l_i] sits at a position <= n.
std::uint64_t brute_capture(const std::vector<std::vector<int>>& list, const std::vector<int>& degrees);

/// sum over terms of c * prod x_i^e_i with std::pow.
cplx eval(const Poly& p, const std::vector<cplx>& x);

/// Coefficient of (z - zeta)^m of z -> f(w, z), term by term with binomials.
cplx taylor_coefficient(const Poly& f, const std::vector<cplx>& w, const std::vector<cplx>& zeta,
                        const std::vector<int>& m);

/// D applied to S_n(f, w, zeta)(z) - g(w, z), with D given by exponents over
/// (w, z), where the enumeration is the first n + 1 entries of `order`.
cplx deviation(const Poly& f, const Poly& g, const std::vector<std::vector<int>>& order, std::uint64_t n,
               const std::vector<cplx>& w, const std::vector<cplx>& zeta, const std::vector<cplx>& z,
               const std::vector<int>& op);

/// sup over grid pairs and centers of |deviation|; centers are all used even
/// when the capture shortcut would apply.
double sup_deviation(const Poly& f, const Poly& g, const std::vector<std::vector<int>>& order, std::uint64_t n,
                     const uts::PredicateGrids& grids, const std::vector<int>& op);

/// Central difference of f along coordinate `var` with complex step h.
cplx central_difference(const Poly& p, std::vector<cplx> x, std::size_t var, double h);

/// Random polynomial with `terms` terms, exponents <= max_degree per
/// coordinate and coefficients uniform in the unit square.
Poly random_poly(std::mt19937_64& rng, std::size_t r, std::size_t d, int max_degree, int terms);
cplx random_point(std::mt19937_64& rng, double radius);

/// Exact slice residual of f = conj(z) on a circle of radius rho (any center):
/// the mean-value defect is 0 and the contour term is rho^2.
double conj_slice_value(double rho);

}  // namespace oracle
