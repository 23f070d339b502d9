// Polynomials and polynomial differential forms with exact or floating coefficients.
//
// Poly<T> is a sparse polynomial in m variables; PolyForm<T> is a k-form on R^n whose
// components (one per k-subset, ordered as in feec::subsets) are Poly<T> in n variables.

#pragma once

#include "feec/combinatorics.hpp"
#include "feec/errors.hpp"
#include "feec/exterior.hpp"
#include "feec/rational.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <vector>

namespace feec
{

/// Exponent tuple of a monomial in up to four variables.
struct Monomial
{
  std::array<int, max_ambient_dim> e{};

  int degree() const
  {
    int d = 0;
    for (int x : e)
      d += x;
    return d;
  }

  std::uint32_t key() const
  {
    std::uint32_t k = 0;
    for (int i = 0; i < max_ambient_dim; ++i)
      k |= static_cast<std::uint32_t>(e[i]) << (8 * i);
    return k;
  }

  static Monomial from_key(std::uint32_t k)
  {
    Monomial m;
    for (int i = 0; i < max_ambient_dim; ++i)
      m.e[i] = static_cast<int>((k >> (8 * i)) & 0xffu);
    return m;
  }

  /// All monomials in m variables with total degree <= r (or == r when homogeneous).
  static std::vector<Monomial> all(int m, int r, bool homogeneous = false);
};

template <class T>
class Poly
{
public:
  using Terms = std::map<std::uint32_t, T>;

  Poly() = default;
  explicit Poly(int nvars) : m_(nvars) {}

  static Poly constant(int nvars, const T& c)
  {
    Poly p(nvars);
    p.add_term(Monomial{}, c);
    return p;
  }
  static Poly variable(int nvars, int i)
  {
    Poly p(nvars);
    Monomial mono;
    mono.e[i] = 1;
    p.add_term(mono, T(1));
    return p;
  }

  int nvars() const { return m_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const
  {
    int d = -1;
    for (const auto& [key, c] : terms_)
      d = std::max(d, Monomial::from_key(key).degree());
    return d;
  }

  void add_term(const Monomial& mono, const T& c)
  {
    if (c == 0)
      return;
    auto [it, inserted] = terms_.try_emplace(mono.key(), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0)
        terms_.erase(it);
    }
  }

  Poly& operator+=(const Poly& b)
  {
    for (const auto& [key, c] : b.terms_)
      add_term(Monomial::from_key(key), c);
    return *this;
  }
  Poly& operator-=(const Poly& b)
  {
    for (const auto& [key, c] : b.terms_)
      add_term(Monomial::from_key(key), T(-c));
    return *this;
  }
  Poly& operator*=(const T& s)
  {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [key, c] : terms_)
      c *= s;
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const T& s, Poly a) { return a *= s; }

  friend Poly operator*(const Poly& a, const Poly& b)
  {
    Poly out(std::max(a.m_, b.m_));
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_)
        out.add_term(Monomial::from_key(ka + kb), T(ca * cb));
    return out;
  }

  bool operator==(const Poly& b) const { return terms_ == b.terms_; }

  Poly derivative(int i) const
  {
    Poly out(m_);
    for (const auto& [key, c] : terms_) {
      Monomial mono = Monomial::from_key(key);
      if (mono.e[i] == 0)
        continue;
      T nc = c * T(mono.e[i]);
      --mono.e[i];
      out.add_term(mono, nc);
    }
    return out;
  }

  double evaluate(const double* x) const
  {
    double s = 0.0;
    for (const auto& [key, c] : terms_) {
      Monomial mono = Monomial::from_key(key);
      double t = to_double(c);
      for (int i = 0; i < m_; ++i)
        for (int p = 0; p < mono.e[i]; ++p)
          t *= x[i];
      s += t;
    }
    return s;
  }

  /// Substitutes x_i = b_i + sum_j A[i][j] t_j (A is nvars x new_nvars, row-major).
  Poly compose_affine(int new_nvars, const std::vector<T>& b, const std::vector<T>& A) const
  {
    std::vector<Poly> lin(m_);
    for (int i = 0; i < m_; ++i) {
      lin[i] = Poly::constant(new_nvars, b[i]);
      for (int j = 0; j < new_nvars; ++j)
        lin[i] += A[i * new_nvars + j] * Poly::variable(new_nvars, j);
    }
    // powers[i][p] = lin[i]^p, built on demand
    std::vector<std::vector<Poly>> powers(m_);
    auto power = [&](int i, int p) -> const Poly& {
      auto& pw = powers[i];
      if (pw.empty())
        pw.push_back(Poly::constant(new_nvars, T(1)));
      while (static_cast<int>(pw.size()) <= p)
        pw.push_back(pw.back() * lin[i]);
      return pw[p];
    };
    Poly out(new_nvars);
    for (const auto& [key, c] : terms_) {
      Monomial mono = Monomial::from_key(key);
      Poly t = Poly::constant(new_nvars, c);
      for (int i = 0; i < m_; ++i)
        if (mono.e[i] > 0)
          t = t * power(i, mono.e[i]);
      out += t;
    }
    return out;
  }

  /// Exact integral over the reference simplex conv{0, e_1, ..., e_m}.
  T integrate_reference() const
  {
    T s(0);
    for (const auto& [key, c] : terms_) {
      Monomial mono = Monomial::from_key(key);
      // prod a_i! / (|a| + m)!
      T num(1), den(1);
      for (int i = 0; i < m_; ++i)
        for (int p = 2; p <= mono.e[i]; ++p)
          num *= T(p);
      for (int p = 2; p <= mono.degree() + m_; ++p)
        den *= T(p);
      s += c * num / den;
    }
    return s;
  }

private:
  int m_ = 0;
  Terms terms_;
};

template <class T>
class PolyForm
{
public:
  PolyForm() = default;
  PolyForm(int n, int k) : n_(n), k_(k)
  {
    if (n < 0 || n > max_ambient_dim)
      throw DimensionMismatch("PolyForm: ambient dimension out of range");
    if (k < 0)
      throw DegreeMismatch("PolyForm: negative degree");
    comps_.assign(k <= n ? binomial(n, k) : 0, Poly<T>(n));
  }

  /// c * x^mono dx^I.
  static PolyForm monomial(int n, const Monomial& mono, unsigned mask, const T& c = T(1))
  {
    PolyForm f(n, popcount(mask));
    f.comps_[subset_position(n, mask)].add_term(mono, c);
    return f;
  }

  static PolyForm from_alt(const AltForm<T>& a)
  {
    PolyForm f(a.n(), a.k());
    for (std::size_t i = 0; i < a.size(); ++i)
      f.comps_[i].add_term(Monomial{}, a[i]);
    return f;
  }

  int n() const { return n_; }
  int k() const { return k_; }
  std::size_t ncomp() const { return comps_.size(); }
  Poly<T>& comp(std::size_t i) { return comps_[i]; }
  const Poly<T>& comp(std::size_t i) const { return comps_[i]; }
  Poly<T>& comp_mask(unsigned mask) { return comps_[subset_position(n_, mask)]; }
  const Poly<T>& comp_mask(unsigned mask) const { return comps_[subset_position(n_, mask)]; }

  bool is_zero() const
  {
    for (const auto& p : comps_)
      if (!p.is_zero())
        return false;
    return true;
  }

  int degree() const
  {
    int d = -1;
    for (const auto& p : comps_)
      d = std::max(d, p.degree());
    return d;
  }

  PolyForm& operator+=(const PolyForm& b)
  {
    check_same(b);
    for (std::size_t i = 0; i < comps_.size(); ++i)
      comps_[i] += b.comps_[i];
    return *this;
  }
  PolyForm& operator-=(const PolyForm& b)
  {
    check_same(b);
    for (std::size_t i = 0; i < comps_.size(); ++i)
      comps_[i] -= b.comps_[i];
    return *this;
  }
  PolyForm& operator*=(const T& s)
  {
    for (auto& p : comps_)
      p *= s;
    return *this;
  }
  friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
  friend PolyForm operator*(const T& s, PolyForm a) { return a *= s; }
  friend PolyForm operator*(const Poly<T>& p, const PolyForm& a)
  {
    PolyForm out(a.n_, a.k_);
    for (std::size_t i = 0; i < a.comps_.size(); ++i)
      out.comps_[i] = p * a.comps_[i];
    return out;
  }
  bool operator==(const PolyForm& b) const
  {
    return n_ == b.n_ && k_ == b.k_ && comps_ == b.comps_;
  }

  /// Component values at x (length n), ordered as subsets(n, k).
  void evaluate(const double* x, double* out) const
  {
    for (std::size_t i = 0; i < comps_.size(); ++i)
      out[i] = comps_[i].evaluate(x);
  }
  AltForm<double> evaluate(const std::vector<double>& x) const
  {
    AltForm<double> a(n_, k_);
    for (std::size_t i = 0; i < comps_.size(); ++i)
      a[i] = comps_[i].evaluate(x.data());
    return a;
  }

private:
  void check_same(const PolyForm& b) const
  {
    if (n_ != b.n_)
      throw DimensionMismatch("PolyForm: ambient dimensions differ");
    if (k_ != b.k_)
      throw DegreeMismatch("PolyForm: degrees differ");
  }

  int n_ = 0;
  int k_ = 0;
  std::vector<Poly<T>> comps_;
};

/// Exterior derivative: sum_I sum_j d_j a_I dx^j ^ dx^I.
template <class T>
PolyForm<T> ext_derivative(const PolyForm<T>& a)
{
  const int n = a.n();
  PolyForm<T> out(n, a.k() + 1);
  if (a.k() + 1 > n)
    return out;
  const auto& sa = subsets(n, a.k());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (a.comp(i).is_zero())
      continue;
    for (int j = 0; j < n; ++j) {
      const int s = shuffle_sign(1u << j, sa[i]);
      if (s == 0)
        continue;
      Poly<T> dp = a.comp(i).derivative(j);
      if (s < 0)
        dp *= T(-1);
      out.comp_mask(sa[i] | (1u << j)) += dp;
    }
  }
  return out;
}

/// Contraction with the position field x^i e_i; zero for 0-forms.
template <class T>
PolyForm<T> koszul(const PolyForm<T>& a)
{
  const int n = a.n();
  if (a.k() == 0)
    return PolyForm<T>(n, 0);
  PolyForm<T> out(n, a.k() - 1);
  const auto& sa = subsets(n, a.k());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (a.comp(i).is_zero())
      continue;
    int pos = 0;
    for (unsigned m = sa[i]; m; m &= m - 1, ++pos) {
      const int idx = std::countr_zero(m);
      Poly<T> term = Poly<T>::variable(n, idx) * a.comp(i);
      if (pos % 2)
        term *= T(-1);
      out.comp_mask(sa[i] & ~(1u << idx)) += term;
    }
  }
  return out;
}

/// Pointwise contraction with a constant vector.
template <class T>
PolyForm<T> contract(const std::vector<T>& v, const PolyForm<T>& a)
{
  const int n = a.n();
  if (static_cast<int>(v.size()) != n)
    throw DimensionMismatch("contract: vector length differs from ambient dimension");
  if (a.k() == 0)
    return PolyForm<T>(n, 0);
  PolyForm<T> out(n, a.k() - 1);
  const auto& sa = subsets(n, a.k());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    int pos = 0;
    for (unsigned m = sa[i]; m; m &= m - 1, ++pos) {
      const int idx = std::countr_zero(m);
      if (v[idx] == 0)
        continue;
      Poly<T> term = a.comp(i);
      term *= (pos % 2) ? T(-v[idx]) : T(v[idx]);
      out.comp_mask(sa[i] & ~(1u << idx)) += term;
    }
  }
  return out;
}

template <class T>
PolyForm<T> hodge_star(const PolyForm<T>& a)
{
  const int n = a.n();
  PolyForm<T> out(n, n - a.k());
  const auto& sa = subsets(n, a.k());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    Poly<T> p = a.comp(i);
    if (hodge_sign(n, sa[i]) < 0)
      p *= T(-1);
    out.comp_mask(full_mask(n) & ~sa[i]) = p;
  }
  return out;
}

template <class T>
PolyForm<T> inverse_hodge_star(const PolyForm<T>& b)
{
  const int n = b.n();
  const int k = n - b.k();
  PolyForm<T> out = hodge_star(b);
  if ((k * (n - k)) % 2)
    out *= T(-1);
  return out;
}

/// Codifferential (-1)^k star^{-1} d star on k-forms.
template <class T>
PolyForm<T> codifferential(const PolyForm<T>& a)
{
  if (a.k() == 0)
    return PolyForm<T>(a.n(), 0);
  if (a.k() > a.n())
    return PolyForm<T>(a.n(), a.k() - 1);
  PolyForm<T> out = inverse_hodge_star(ext_derivative(hodge_star(a)));
  if (a.k() % 2)
    out *= T(-1);
  return out;
}

template <class T>
PolyForm<T> wedge(const PolyForm<T>& a, const PolyForm<T>& b)
{
  if (a.n() != b.n())
    throw DimensionMismatch("wedge: ambient dimensions differ");
  const int n = a.n();
  PolyForm<T> out(n, a.k() + b.k());
  if (a.k() + b.k() > n)
    return out;
  const auto& sa = subsets(n, a.k());
  const auto& sb = subsets(n, b.k());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (a.comp(i).is_zero())
      continue;
    for (std::size_t j = 0; j < sb.size(); ++j) {
      const int s = shuffle_sign(sa[i], sb[j]);
      if (s == 0 || b.comp(j).is_zero())
        continue;
      Poly<T> prod = a.comp(i) * b.comp(j);
      if (s < 0)
        prod *= T(-1);
      out.comp_mask(sa[i] | sb[j]) += prod;
    }
  }
  return out;
}

/// Determinant of a small square matrix given as row-major values (exact for Rational).
template <class T>
T small_determinant(std::vector<T> a, int m)
{
  T det(1);
  for (int c = 0; c < m; ++c) {
    int piv = -1;
    for (int r = c; r < m; ++r)
      if (a[r * m + c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0)
      return T(0);
    if (piv != c) {
      for (int j = 0; j < m; ++j)
        std::swap(a[piv * m + j], a[c * m + j]);
      det = -det;
    }
    det *= a[c * m + c];
    for (int r = c + 1; r < m; ++r) {
      if (a[r * m + c] == 0)
        continue;
      T f = a[r * m + c] / a[c * m + c];
      for (int j = c; j < m; ++j)
        a[r * m + j] -= f * a[c * m + j];
    }
  }
  return det;
}

/// k-th compound of an n x m matrix (row-major): entry (I, J) = det A[I, J] over
/// k-subsets I of rows and J of columns, both in subsets() order.
template <class T>
std::vector<T> compound_matrix(const std::vector<T>& A, int n, int m, int k)
{
  const auto& rows = subsets(n, k);
  const auto& cols = subsets(m, k);
  std::vector<T> out(rows.size() * cols.size(), T(0));
  if (k == 0) {
    out.assign(1, T(1));
    return out;
  }
  for (std::size_t I = 0; I < rows.size(); ++I) {
    auto ri = mask_indices(rows[I]);
    for (std::size_t J = 0; J < cols.size(); ++J) {
      auto cj = mask_indices(cols[J]);
      std::vector<T> sub(k * k);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          sub[a * k + b] = A[ri[a] * m + cj[b]];
      out[I * cols.size() + J] = small_determinant(sub, k);
    }
  }
  return out;
}

/// Pullback of a form on R^n by the affine map t -> b + A t from R^m (A is n x m, row-major).
template <class T>
PolyForm<T> pullback(const PolyForm<T>& a, const std::vector<T>& b, const std::vector<T>& A, int m)
{
  const int n = a.n();
  const int k = a.k();
  PolyForm<T> out(m, k);
  if (k > m)
    return out;
  const auto C = compound_matrix(A, n, m, k);
  const std::size_t ncol = subsets(m, k).size();
  for (std::size_t I = 0; I < a.ncomp(); ++I) {
    if (a.comp(I).is_zero())
      continue;
    Poly<T> p = a.comp(I).compose_affine(m, b, A);
    for (std::size_t J = 0; J < ncol; ++J) {
      const T& c = C[I * ncol + J];
      if (c == 0)
        continue;
      out.comp(J) += c * p;
    }
  }
  return out;
}

template <class U, class T>
PolyForm<U> convert(const PolyForm<T>& a)
{
  PolyForm<U> out(a.n(), a.k());
  for (std::size_t i = 0; i < a.ncomp(); ++i)
    for (const auto& [key, c] : a.comp(i).terms())
      out.comp(i).add_term(Monomial::from_key(key), U(to_double(c)));
  return out;
}

}  // namespace feec
