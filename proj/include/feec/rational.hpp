// Exact rational scalar used for basis construction.

#pragma once

#include <gmpxx.h>

#include <cmath>

namespace feec
{

using Rational = mpq_class;

template <class T>
inline double to_double(const T& x)
{
  return static_cast<double>(x);
}

template <>
inline double to_double<Rational>(const Rational& x)
{
  return x.get_d();
}

template <class T>
inline bool is_zero(const T& x)
{
  return x == 0;
}

}  // namespace feec
