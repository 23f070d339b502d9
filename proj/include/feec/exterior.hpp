// Constant-coefficient alternating forms on R^n: wedge, contraction, Hodge star, inner product.
//
// Components are stored densely, one per k-subset of {1..n}, in the order given by
// feec::subsets(n, k). Index sets inserted in any order are normalized with the sign
// of the sorting permutation.

#pragma once

#include "feec/combinatorics.hpp"
#include "feec/errors.hpp"

#include <algorithm>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace feec
{

/// Strictly increasing tuple of indices in 1..n, stored as a bitmask (bit i-1 for index i).
struct IndexSet
{
  int n = 0;
  unsigned mask = 0;

  /// Builds from a strictly increasing list of 1-based indices.
  static IndexSet of(int n, std::initializer_list<int> indices)
  {
    IndexSet s{n, 0u};
    int prev = 0;
    for (int i : indices) {
      if (i <= prev || i > n)
        throw ConfigError("IndexSet indices must be strictly increasing in 1..n");
      s.mask |= 1u << (i - 1);
      prev = i;
    }
    return s;
  }

  int degree() const { return popcount(mask); }

  std::vector<int> indices() const
  {
    auto out = mask_indices(mask);
    for (int& i : out)
      ++i;
    return out;
  }

  bool operator==(const IndexSet&) const = default;
};

template <class T>
class AltForm
{
public:
  AltForm() = default;
  AltForm(int n, int k) : n_(n), k_(k)
  {
    if (n < 0 || n > max_ambient_dim)
      throw DimensionMismatch("ambient dimension out of range");
    if (k < 0)
      throw DegreeMismatch("negative form degree");
    c_.assign(k <= n ? binomial(n, k) : 0, T(0));
  }

  /// c * dx^{i1} ^ ... ^ dx^{ik} for 1-based indices in any order (zero on repeats).
  static AltForm basis(int n, std::initializer_list<int> indices, const T& c = T(1))
  {
    AltForm a(n, static_cast<int>(indices.size()));
    std::vector<int> idx(indices);
    for (int i : idx)
      if (i < 1 || i > n)
        throw DimensionMismatch("index outside 1..n");
    int sign = 1;
    // bubble sort keeps track of the permutation sign
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j + 1 < idx.size() - i; ++j)
        if (idx[j] > idx[j + 1]) {
          std::swap(idx[j], idx[j + 1]);
          sign = -sign;
        }
    unsigned mask = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i > 0 && idx[i] == idx[i - 1])
        return a;
      mask |= 1u << (idx[i] - 1);
    }
    if (a.size() > 0)
      a.coeff(mask) = sign > 0 ? T(c) : T(-c);
    return a;
  }

  int n() const { return n_; }
  int k() const { return k_; }
  std::size_t size() const { return c_.size(); }

  T& coeff(unsigned mask) { return c_[subset_position(n_, mask)]; }
  const T& coeff(unsigned mask) const { return c_[subset_position(n_, mask)]; }
  T& coeff(const IndexSet& s) { return coeff(s.mask); }
  const T& coeff(const IndexSet& s) const { return coeff(s.mask); }

  /// Component by position in subsets(n, k).
  T& operator[](std::size_t i) { return c_[i]; }
  const T& operator[](std::size_t i) const { return c_[i]; }
  const std::vector<T>& coeffs() const { return c_; }

  bool is_zero() const
  {
    return std::all_of(c_.begin(), c_.end(), [](const T& x) { return x == 0; });
  }

  AltForm& operator+=(const AltForm& b)
  {
    check_same(b);
    for (std::size_t i = 0; i < c_.size(); ++i)
      c_[i] += b.c_[i];
    return *this;
  }
  AltForm& operator-=(const AltForm& b)
  {
    check_same(b);
    for (std::size_t i = 0; i < c_.size(); ++i)
      c_[i] -= b.c_[i];
    return *this;
  }
  AltForm& operator*=(const T& s)
  {
    for (auto& x : c_)
      x *= s;
    return *this;
  }
  friend AltForm operator+(AltForm a, const AltForm& b) { return a += b; }
  friend AltForm operator-(AltForm a, const AltForm& b) { return a -= b; }
  friend AltForm operator*(const T& s, AltForm a) { return a *= s; }
  friend AltForm operator-(AltForm a) { return a *= T(-1); }

  bool operator==(const AltForm& b) const { return n_ == b.n_ && k_ == b.k_ && c_ == b.c_; }

  friend std::ostream& operator<<(std::ostream& os, const AltForm& a)
  {
    bool first = true;
    const auto& sets = subsets(a.n_, a.k_);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0)
        continue;
      if (!first)
        os << " + ";
      first = false;
      os << a.c_[i];
      if (a.k_ > 0) {
        os << "*dx";
        for (int j : mask_indices(sets[i]))
          os << j + 1;
      }
    }
    if (first)
      os << "0";
    return os;
  }

private:
  void check_same(const AltForm& b) const
  {
    if (n_ != b.n_)
      throw DimensionMismatch("forms live in different ambient dimensions");
    if (k_ != b.k_)
      throw DegreeMismatch("forms have different degrees");
  }

  int n_ = 0;
  int k_ = 0;
  std::vector<T> c_;
};

/// Exterior product via the shuffle sign; degree k+l > n gives the (empty) zero form.
template <class T>
AltForm<T> wedge(const AltForm<T>& a, const AltForm<T>& b)
{
  if (a.n() != b.n())
    throw DimensionMismatch("wedge: ambient dimensions differ");
  const int n = a.n();
  AltForm<T> out(n, a.k() + b.k());
  if (a.k() + b.k() > n)
    return out;
  const auto& sa = subsets(n, a.k());
  const auto& sb = subsets(n, b.k());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (a[i] == 0)
      continue;
    for (std::size_t j = 0; j < sb.size(); ++j) {
      const int s = shuffle_sign(sa[i], sb[j]);
      if (s == 0 || b[j] == 0)
        continue;
      T prod = a[i] * b[j];
      if (s > 0)
        out.coeff(sa[i] | sb[j]) += prod;
      else
        out.coeff(sa[i] | sb[j]) -= prod;
    }
  }
  return out;
}

/// Interior product iota_v a; the zero form of degree 0 when a has degree 0.
template <class T>
AltForm<T> contract(const std::vector<T>& v, const AltForm<T>& a)
{
  if (static_cast<int>(v.size()) != a.n())
    throw DimensionMismatch("contract: vector length differs from ambient dimension");
  const int n = a.n();
  if (a.k() == 0)
    return AltForm<T>(n, 0);
  AltForm<T> out(n, a.k() - 1);
  const auto& sa = subsets(n, a.k());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (a[i] == 0)
      continue;
    int pos = 0;
    for (unsigned m = sa[i]; m; m &= m - 1, ++pos) {
      const int idx = std::countr_zero(m);
      if (v[idx] == 0)
        continue;
      T term = v[idx] * a[i];
      if (pos % 2)
        out.coeff(sa[i] & ~(1u << idx)) -= term;
      else
        out.coeff(sa[i] & ~(1u << idx)) += term;
    }
  }
  return out;
}

/// Sign s with star(e^I) = s e^{I^c}, namely the sign of the shuffle (I, I^c).
inline int hodge_sign(int n, unsigned mask) { return shuffle_sign(mask, full_mask(n) & ~mask); }

template <class T>
AltForm<T> hodge_star(const AltForm<T>& a)
{
  const int n = a.n();
  AltForm<T> out(n, n - a.k());
  const auto& sa = subsets(n, a.k());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const unsigned comp = full_mask(n) & ~sa[i];
    if (hodge_sign(n, sa[i]) > 0)
      out.coeff(comp) = a[i];
    else
      out.coeff(comp) = -a[i];
  }
  return out;
}

/// Inverse Hodge star: maps an (n-k)-form b to the k-form a with star(a) = b.
template <class T>
AltForm<T> inverse_hodge_star(const AltForm<T>& b)
{
  const int n = b.n();
  const int k = n - b.k();
  AltForm<T> out = hodge_star(b);
  if ((k * (n - k)) % 2)
    out *= T(-1);
  return out;
}

template <class T>
T inner(const AltForm<T>& a, const AltForm<T>& b)
{
  if (a.n() != b.n())
    throw DimensionMismatch("inner: ambient dimensions differ");
  if (a.k() != b.k())
    throw DegreeMismatch("inner: form degrees differ");
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

template <class T>
AltForm<T> volume_form(int n)
{
  AltForm<T> v(n, n);
  v[0] = T(1);
  return v;
}

}  // namespace feec
