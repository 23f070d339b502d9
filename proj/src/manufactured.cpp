#include "feec/manufactured.hpp"

#include "feec/combinatorics.hpp"
#include "feec/errors.hpp"
#include "feec/exterior.hpp"

#include <cmath>
#include <numbers>

namespace feec
{

namespace
{
constexpr double pi = std::numbers::pi;
}

TrigPoly TrigPoly::term(int nvars, double c, Key factors)
{
  TrigPoly p(nvars);
  p.add(factors, c);
  return p;
}

void TrigPoly::add(const Key& key, double c)
{
  if (c == 0.0)
    return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (std::abs(it->second) < 1e-14 * std::abs(c))
      terms_.erase(it);
  }
}

TrigPoly TrigPoly::derivative(int i) const
{
  TrigPoly out(m_);
  for (const auto& [key, c] : terms_) {
    Key k2 = key;
    switch (key[i]) {
    case One:
      continue;
    case Sin:
      k2[i] = Cos;
      out.add(k2, pi * c);
      break;
    case Cos:
      k2[i] = Sin;
      out.add(k2, -pi * c);
      break;
    }
  }
  return out;
}

double TrigPoly::evaluate(const double* x) const
{
  double s = 0.0;
  for (const auto& [key, c] : terms_) {
    double t = c;
    for (int i = 0; i < m_; ++i) {
      if (key[i] == Sin)
        t *= std::sin(pi * x[i]);
      else if (key[i] == Cos)
        t *= std::cos(pi * x[i]);
    }
    s += t;
  }
  return s;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& b)
{
  if (m_ == 0)
    m_ = b.m_;
  for (const auto& [key, c] : b.terms_)
    add(key, c);
  return *this;
}

TrigPoly& TrigPoly::operator*=(double s)
{
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, c] : terms_)
    c *= s;
  return *this;
}

TrigForm::TrigForm(int n_, int k_) : n(n_), k(k_)
{
  comps.assign((k_ >= 0 && k_ <= n_) ? binomial(n_, k_) : 0, TrigPoly(n_));
}

void TrigForm::evaluate(const double* x, double* out) const
{
  for (std::size_t i = 0; i < comps.size(); ++i)
    out[i] = comps[i].evaluate(x);
}

TrigForm& TrigForm::operator+=(const TrigForm& b)
{
  if (n != b.n || k != b.k)
    throw DegreeMismatch("TrigForm: mismatched forms");
  for (std::size_t i = 0; i < comps.size(); ++i)
    comps[i] += b.comps[i];
  return *this;
}

TrigForm ext_derivative(const TrigForm& a)
{
  TrigForm out(a.n, a.k + 1);
  if (a.k + 1 > a.n)
    return out;
  const auto& sa = subsets(a.n, a.k);
  for (std::size_t i = 0; i < sa.size(); ++i)
    for (int j = 0; j < a.n; ++j) {
      const int s = shuffle_sign(1u << j, sa[i]);
      if (s == 0)
        continue;
      out.comps[subset_position(a.n, sa[i] | (1u << j))] += static_cast<double>(s) * a.comps[i].derivative(j);
    }
  return out;
}

TrigForm hodge_star(const TrigForm& a)
{
  TrigForm out(a.n, a.n - a.k);
  const auto& sa = subsets(a.n, a.k);
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const unsigned c = full_mask(a.n) & ~sa[i];
    out.comps[subset_position(a.n, c)] += static_cast<double>(hodge_sign(a.n, sa[i])) * a.comps[i];
  }
  return out;
}

TrigForm inverse_hodge_star(const TrigForm& b)
{
  const int k = b.n - b.k;
  TrigForm out = hodge_star(b);
  if ((k * (b.n - k)) % 2)
    for (auto& c : out.comps)
      c *= -1.0;
  return out;
}

TrigForm codifferential(const TrigForm& a)
{
  if (a.k == 0)
    return TrigForm(a.n, -1);
  TrigForm out = inverse_hodge_star(ext_derivative(hodge_star(a)));
  if (a.k % 2)
    for (auto& c : out.comps)
      c *= -1.0;
  return out;
}

namespace
{

using K = TrigPoly::Key;
constexpr auto O = TrigPoly::One;
constexpr auto S = TrigPoly::Sin;
constexpr auto C = TrigPoly::Cos;

TrigForm one_form(int n, const std::vector<TrigPoly>& proxy)
{
  TrigForm u(n, 1);
  for (int i = 0; i < n; ++i)
    u.comps[i] = proxy[i];
  return u;
}

TrigPoly t(int n, double c, K key) { return TrigPoly::term(n, c, key); }

/// The exact (first) and coexact (second) terms of u for each case.
std::pair<TrigForm, TrigForm> case_terms(int n, int k)
{
  if (n == 2 && k == 1) {
    TrigForm a = one_form(2, {t(2, 1, {S, O, O}), t(2, 1, {O, S, O})});
    TrigForm b = one_form(2, {t(2, 1, {S, C, O}), t(2, -1, {C, S, O})});
    return {a, b};
  }
  if (n == 3 && k == 1) {
    TrigForm a = one_form(3, {t(3, 1, {S, O, O}), t(3, 1, {O, S, O}), t(3, 1, {O, O, S})});
    TrigForm b = one_form(3, {t(3, 1, {S, C, O}), t(3, -1, {C, S, O}), TrigPoly(3)});
    return {a, b};
  }
  if (n == 3 && k == 2) {
    // 2-forms given by their vector proxies v, i.e. u = star(v^flat).
    TrigForm a = hodge_star(one_form(3, {t(3, 1, {O, S, S}), t(3, 1, {S, O, S}), t(3, 1, {S, S, O})}));
    TrigForm b = hodge_star(one_form(3, {t(3, 1, {C, S, S}), t(3, 1, {S, C, S}), t(3, 1, {S, S, C})}));
    return {a, b};
  }
  if (k == n) {
    TrigForm a(n, n);
    a.comps[0] = t(n, 1, {S, S, n == 3 ? S : O});
    return {a, TrigForm(n, n)};
  }
  if (k == 0) {
    TrigForm b(n, 0);
    b.comps[0] = t(n, 1, {C, C, n == 3 ? C : O});
    return {TrigForm(n, 0), b};
  }
  throw ConfigError("manufactured_case: unsupported (n, k)");
}

}  // namespace

ManufacturedCase manufactured_case(int n, int k, const std::string& id)
{
  if (n < 2 || n > 3 || k < 0 || k > n)
    throw ConfigError("manufactured_case: (n, k) out of range");
  if (id != "full" && id != "exact-only" && id != "coexact-only")
    throw ConfigError("manufactured_case: unknown case id '" + id + "'");
  if (k == n && id == "coexact-only")
    throw ConfigError("manufactured_case: n-forms have no coexact part on this domain");
  if (k == 0 && id == "exact-only")
    throw ConfigError("manufactured_case: 0-forms have no exact part");
  auto [a, b] = case_terms(n, k);
  ManufacturedCase m;
  m.n = n;
  m.k = k;
  m.id = id;
  m.u = TrigForm(n, k);
  if (id != "coexact-only")
    m.u += a;
  if (id != "exact-only")
    m.u += b;
  m.sigma = codifferential(m.u);
  m.rho = ext_derivative(m.u);
  m.delta_rho = k < n ? codifferential(m.rho) : TrigForm(n, k);
  m.f = k > 0 ? ext_derivative(m.sigma) : TrigForm(n, k);
  m.f += m.delta_rho;
  return m;
}

}  // namespace feec
