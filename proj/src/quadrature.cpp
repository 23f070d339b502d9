#include "feec/quadrature.hpp"

#include "feec/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>

namespace feec
{

namespace
{

QuadRule grundmann_moller(int m, int s)
{
  QuadRule rule;
  rule.dim = m;
  const int d = 2 * s + 1;
  rule.degree = d;
  if (m == 0) {
    rule.points = {{1.0}};
    rule.weights = {1.0};
    return rule;
  }
  std::vector<double> fact(d + m + 2, 1.0);
  for (std::size_t i = 1; i < fact.size(); ++i)
    fact[i] = fact[i - 1] * static_cast<double>(i);

  for (int i = 0; i <= s; ++i) {
    double w = std::pow(2.0, -2 * s) * std::pow(static_cast<double>(d + m - 2 * i), d) / (fact[i] * fact[d + m - i]);
    if (i % 2)
      w = -w;
    const int total = s - i;
    const double denom = static_cast<double>(d + m - 2 * i);
    // all beta in N^{m+1} with |beta| = total
    std::vector<int> beta(m + 1, 0);
    beta[0] = total;
    while (true) {
      std::vector<double> lam(m + 1);
      for (int j = 0; j <= m; ++j)
        lam[j] = (2.0 * beta[j] + 1.0) / denom;
      rule.points.push_back(lam);
      rule.weights.push_back(w);
      int p = m - 1;
      while (p >= 0 && beta[p] == 0)
        --p;
      if (p < 0)
        break;
      --beta[p];
      int rest = 0;
      for (int j = p + 1; j <= m; ++j)
        rest += beta[j];
      for (int j = p + 1; j <= m; ++j)
        beta[j] = 0;
      beta[p + 1] = rest + 1;
    }
  }
  return rule;
}

}  // namespace

const QuadRule& quad_rule(int m, int d)
{
  if (m < 0 || m > 3)
    throw ConfigError("quad_rule: simplex dimension must be in 0..3");
  if (d > max_quad_degree)
    throw ConfigError("quad_rule: unsupported degree " + std::to_string(d));
  const int s = d <= 1 ? 0 : d / 2;  // smallest s with 2s+1 >= d
  static std::mutex mutex;
  static std::map<std::pair<int, int>, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({m, s});
  if (it == cache.end())
    it = cache.emplace(std::make_pair(m, s), grundmann_moller(m, s)).first;
  return it->second;
}

double integrate(const std::function<double(const std::vector<double>&)>& g, const QuadRule& rule,
                 const std::vector<std::vector<double>>& vertices)
{
  const int m = rule.dim;
  if (static_cast<int>(vertices.size()) != m + 1)
    throw DimensionMismatch("integrate: vertex count does not match rule dimension");
  const std::size_t n = vertices[0].size();
  // measure = sqrt(det(J^T J)) with J the edge matrix
  Eigen::MatrixXd J(n, m);
  for (int j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i)
      J(i, j) = vertices[j + 1][i] - vertices[0][i];
  const double scale = m == 0 ? 1.0 : std::sqrt(std::abs((J.transpose() * J).determinant()));
  double sum = 0.0;
  std::vector<double> x(n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = 0.0;
      for (int j = 0; j <= m; ++j)
        x[i] += rule.points[q][j] * vertices[j][i];
    }
    sum += rule.weights[q] * g(x);
  }
  return sum * scale;
}

}  // namespace feec
