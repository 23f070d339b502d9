// Helpers shared by the algebra unit tests and the acceptance suite: random exact forms and exact
// integrals over the reference simplex and its boundary.

#pragma once

#include "feec/basis.hpp"
#include "feec/polynomial.hpp"
#include "feec/reference_element.hpp"

#include <random>
#include <vector>

namespace feec::testing
{

using ExactForm = PolyForm<Rational>;

/// Binomial coefficient with C(a, 0) = 1 for every a and zero outside 0 <= b <= a.
inline long long choose(int a, int b)
{
  if (b == 0)
    return 1;
  if (b < 0 || a < b)
    return 0;
  long long c = 1;
  for (int i = 1; i <= b; ++i)
    c = c * (a - b + i) / i;
  return c;
}

/// Polynomial k-form of degree <= r with small random rational coefficients.
inline ExactForm random_form(std::mt19937& rng, int n, int k, int r)
{
  std::uniform_int_distribution<int> coef(-3, 3);
  ExactForm a(n, k);
  for (std::size_t i = 0; i < a.ncomp(); ++i)
    for (const Monomial& m : Monomial::all(n, r))
      a.comp(i).add_term(m, Rational(coef(rng)) / (1 + (coef(rng) + 3) % 3));
  return a;
}

/// Constant-coefficient k-form with small random rational coefficients.
inline AltForm<Rational> random_alt(std::mt19937& rng, int n, int k)
{
  std::uniform_int_distribution<int> coef(-4, 4);
  AltForm<Rational> a(n, k);
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = Rational(coef(rng)) / (1 + (coef(rng) + 4) % 4);
  return a;
}

/// Integral of an n-form over the reference n-simplex.
inline Rational integrate_top(const ExactForm& a) { return a.comp(0).integrate_reference(); }

/// Integral of an (n-1)-form over the boundary of the reference simplex with the outward orientation.
inline Rational integrate_boundary(const ExactForm& a)
{
  const int n = a.n();
  Rational total = 0;
  for (int i = 0; i <= n; ++i) {
    std::vector<Rational> b, A;
    reference_facet_chart(n, i, b, A);
    // outward direction of facet i: -e_i for i >= 1, (1, ..., 1) for the facet opposite the origin
    std::vector<Rational> frame(static_cast<std::size_t>(n * n));
    for (int row = 0; row < n; ++row) {
      frame[row * n] = i == 0 ? Rational(1) : Rational(row == i - 1 ? -1 : 0);
      for (int j = 0; j < n - 1; ++j)
        frame[row * n + 1 + j] = A[row * (n - 1) + j];
    }
    const Rational orient = small_determinant(frame, n) > 0 ? 1 : -1;
    const ExactForm t = pullback(a, b, A, n - 1);
    total += orient * t.comp(0).integrate_reference();
  }
  return total;
}

/// tau ^ star v, whose integral is the L^2 pairing of tau and v.
inline ExactForm wedge_star(const ExactForm& tau, const ExactForm& v) { return wedge(tau, hodge_star(v)); }

}  // namespace feec::testing
