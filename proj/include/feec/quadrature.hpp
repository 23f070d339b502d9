// Grundmann-Moller quadrature on the reference m-simplex.

#pragma once

#include <functional>
#include <vector>

namespace feec
{

struct QuadRule
{
  int dim = 0;
  int degree = 0;                           ///< polynomial exactness degree (odd)
  std::vector<std::vector<double>> points;  ///< barycentric coordinates, dim+1 entries each
  std::vector<double> weights;              ///< sum to 1/dim!

  std::size_t size() const { return weights.size(); }

  /// Cartesian reference coordinates (drops the first barycentric coordinate).
  std::vector<double> reference_point(std::size_t q) const
  {
    return std::vector<double>(points[q].begin() + 1, points[q].end());
  }
};

constexpr int max_quad_degree = 31;

/// Rule on conv{0, e_1, ..., e_m} exact for total degree <= d (d is rounded up to odd).
/// Throws ConfigError when d exceeds max_quad_degree or m is outside 0..3.
const QuadRule& quad_rule(int m, int d);

/// Integral of g over the simplex with the given vertices (m+1 points in R^n).
double integrate(const std::function<double(const std::vector<double>&)>& g, const QuadRule& rule,
                 const std::vector<std::vector<double>>& vertices);

}  // namespace feec
