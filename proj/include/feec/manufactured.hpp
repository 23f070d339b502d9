// Closed-form manufactured solutions on the unit square and cube.
//
// Every component is a finite sum of products c * prod_i g_i(pi x_i) with g_i in {1, sin, cos}.
// That set is closed under differentiation, so d, the Hodge star and the codifferential are exact
// and sigma = delta u, rho = d u and f = (d delta + delta d) u come out in closed form.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace feec
{

class TrigPoly
{
public:
  enum Factor : std::uint8_t
  {
    One = 0,
    Sin = 1,
    Cos = 2
  };
  using Key = std::array<std::uint8_t, 3>;

  TrigPoly() = default;
  explicit TrigPoly(int nvars) : m_(nvars) {}
  static TrigPoly term(int nvars, double c, Key factors);

  int nvars() const { return m_; }
  const std::map<Key, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  TrigPoly derivative(int i) const;
  double evaluate(const double* x) const;

  TrigPoly& operator+=(const TrigPoly& b);
  TrigPoly& operator*=(double s);
  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator*(double s, TrigPoly a) { return a *= s; }

private:
  void add(const Key& key, double c);
  int m_ = 0;
  std::map<Key, double> terms_;
};

struct TrigForm
{
  int n = 0;
  int k = 0;
  std::vector<TrigPoly> comps;  ///< ordered as subsets(n, k)

  TrigForm() = default;
  TrigForm(int n_, int k_);
  void evaluate(const double* x, double* out) const;
  TrigForm& operator+=(const TrigForm& b);
};

TrigForm ext_derivative(const TrigForm& a);
TrigForm hodge_star(const TrigForm& a);
TrigForm inverse_hodge_star(const TrigForm& b);
TrigForm codifferential(const TrigForm& a);

struct ManufacturedCase
{
  int n = 0;
  int k = 0;
  std::string id;
  TrigForm u;          ///< k-form
  TrigForm sigma;      ///< delta u, (k-1)-form
  TrigForm rho;        ///< d u, (k+1)-form
  TrigForm f;          ///< d sigma + delta rho
  TrigForm delta_rho;  ///< delta d u
  double p = 0.0;      ///< harmonic part of f (zero for all cases here)
};

/// Known ids: "full", "exact-only", "coexact-only" for (n,k) in {(2,1),(3,1),(3,2)};
/// k = n supports "full"/"exact-only", k = 0 supports "full"/"coexact-only". Throws ConfigError otherwise.
ManufacturedCase manufactured_case(int n, int k, const std::string& id);

}  // namespace feec
