// Simplex quadrature: weights, barycentric points and polynomial exactness up to the requested degree.

#include "feec/errors.hpp"
#include "feec/polynomial.hpp"
#include "feec/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

namespace
{

double factorial(int m) { return m <= 1 ? 1.0 : m * factorial(m - 1); }

/// prod a_i! / (|a| + m)!, the integral of x^a over the reference m-simplex
double monomial_integral(const feec::Monomial& a, int m)
{
  double num = 1.0;
  for (int i = 0; i < m; ++i)
    num *= factorial(a.e[i]);
  return num / factorial(a.degree() + m);
}

double evaluate_monomial(const feec::Monomial& a, const std::vector<double>& x)
{
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    v *= std::pow(x[i], a.e[i]);
  return v;
}

}  // namespace

TEST_CASE("quadrature weights sum to the simplex volume and points are barycentric")
{
  for (int m = 1; m <= 3; ++m)
    for (int d : {1, 3, 7, 13, 21}) {
      const auto& rule = feec::quad_rule(m, d);
      CHECK(rule.degree >= d);
      CHECK(rule.degree % 2 == 1);
      const double total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
      CHECK(total == doctest::Approx(1.0 / factorial(m)).epsilon(1e-12));
      for (const auto& p : rule.points) {
        CHECK(p.size() == static_cast<std::size_t>(m + 1));
        CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
        for (double x : p)
          CHECK(x >= 0.0);
      }
    }
}

TEST_CASE("quadrature integrates every monomial up to its degree exactly")
{
  for (int m = 1; m <= 3; ++m)
    for (int d : {1, 2, 5, 8, 12}) {
      const auto& rule = feec::quad_rule(m, d);
      for (const auto& a : feec::Monomial::all(m, rule.degree)) {
        double q = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i)
          q += rule.weights[i] * evaluate_monomial(a, rule.reference_point(i));
        const double exact = monomial_integral(a, m);
        CHECK(std::abs(q - exact) <= 1e-13 * std::max(1.0, exact));
      }
    }
}

TEST_CASE("quadrature of a degree above the rule is not exact")
{
  const auto& rule = feec::quad_rule(2, 3);
  feec::Monomial a;
  a.e[0] = 6;
  double q = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    q += rule.weights[i] * evaluate_monomial(a, rule.reference_point(i));
  CHECK(std::abs(q - monomial_integral(a, 2)) > 1e-6);
}

TEST_CASE("integration over a physical simplex uses the affine volume factor")
{
  const auto& rule = feec::quad_rule(2, 5);
  const std::vector<std::vector<double>> tri{{1.0, 1.0}, {3.0, 1.0}, {1.0, 4.0}};
  CHECK(feec::integrate([](const std::vector<double>&) { return 1.0; }, rule, tri) == doctest::Approx(3.0));
  // centroid (5/3, 2) times the area
  CHECK(feec::integrate([](const std::vector<double>& x) { return x[0]; }, rule, tri) == doctest::Approx(5.0));
  const auto& rule1 = feec::quad_rule(1, 3);
  const std::vector<std::vector<double>> seg{{0.0, 0.0, 0.0}, {1.0, 2.0, 2.0}};
  CHECK(feec::integrate([](const std::vector<double>& x) { return x[2] * x[2]; }, rule1, seg) ==
        doctest::Approx(3.0 * 4.0 / 3.0));
}

TEST_CASE("quadrature requests outside the supported range throw")
{
  CHECK_THROWS_AS(feec::quad_rule(2, feec::max_quad_degree + 2), feec::ConfigError);
  CHECK_THROWS_AS(feec::quad_rule(4, 3), feec::ConfigError);
}
