// Exterior algebra on R^n: wedge, contraction and Hodge star identities, checked exhaustively on basis forms.

#include "feec/exterior.hpp"
#include "feec/rational.hpp"

#include <doctest.h>

#include <vector>

using feec::AltForm;
using feec::Rational;

namespace
{

std::vector<AltForm<Rational>> basis_forms(int n, int k)
{
  std::vector<AltForm<Rational>> out;
  for (std::size_t i = 0; i < feec::subsets(n, k).size(); ++i) {
    AltForm<Rational> a(n, k);
    a[i] = 1;
    out.push_back(a);
  }
  return out;
}

AltForm<Rational> from_indices(int n, const std::vector<int>& idx)
{
  // built by repeated wedging with 1-forms, so the sign comes from AltForm::basis one index at a time
  AltForm<Rational> a(n, 0);
  a[0] = 1;
  for (int i : idx)
    a = feec::wedge(a, AltForm<Rational>::basis(n, {i}));
  return a;
}

}  // namespace

TEST_CASE("combinatorics: binomials and subset ordering")
{
  CHECK(feec::binomial(3, 0) == 1);
  CHECK(feec::binomial(3, 2) == 3);
  CHECK(feec::binomial(6, 3) == 20);
  CHECK(feec::binomial(2, 3) == 0);
  for (int n = 0; n <= 4; ++n)
    for (int k = 0; k <= n; ++k) {
      const auto& s = feec::subsets(n, k);
      REQUIRE(static_cast<long long>(s.size()) == feec::binomial(n, k));
      for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(feec::popcount(s[i]) == k);
        CHECK(feec::subset_position(n, s[i]) == static_cast<int>(i));
      }
    }
  // dx2 ^ dx1 = -dx1 ^ dx2
  CHECK(feec::shuffle_sign(0b10, 0b01) == -1);
  CHECK(feec::shuffle_sign(0b01, 0b10) == 1);
}

TEST_CASE("IndexSet rejects non-increasing indices")
{
  CHECK(feec::IndexSet::of(3, {1, 3}).degree() == 2);
  CHECK_THROWS_AS(feec::IndexSet::of(3, {2, 1}), feec::ConfigError);
  CHECK_THROWS_AS(feec::IndexSet::of(3, {4}), feec::ConfigError);
}

TEST_CASE("AltForm::basis sorts indices with the permutation sign")
{
  const auto a = AltForm<Rational>::basis(3, {3, 1, 2});  // even permutation of (1,2,3)
  CHECK(a.coeff(0b111u) == 1);
  const auto b = AltForm<Rational>::basis(3, {2, 1});
  CHECK(b.coeff(0b011u) == -1);
  CHECK(AltForm<Rational>::basis(3, {2, 2}).is_zero());
}

TEST_CASE("wedge of coordinate 1-forms matches the sorted basis")
{
  CHECK(from_indices(3, {2, 1}) == AltForm<Rational>::basis(3, {2, 1}));
  CHECK(from_indices(3, {3, 1, 2}) == AltForm<Rational>::basis(3, {1, 2, 3}));
  CHECK(from_indices(3, {3, 2, 1}) == Rational(-1) * AltForm<Rational>::basis(3, {1, 2, 3}));
}

TEST_CASE("wedge is graded anticommutative and associative")
{
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k <= n; ++k)
      for (int l = 0; l <= n; ++l)
        for (const auto& a : basis_forms(n, k))
          for (const auto& b : basis_forms(n, l)) {
            const Rational sign = (k * l) % 2 ? -1 : 1;
            CHECK(feec::wedge(a, b) == sign * feec::wedge(b, a));
            for (int m = 0; m + k + l <= n; ++m)
              for (const auto& c : basis_forms(n, m))
                CHECK(feec::wedge(feec::wedge(a, b), c) == feec::wedge(a, feec::wedge(b, c)));
          }
}

TEST_CASE("contraction obeys the Leibniz rule")
{
  const std::vector<std::vector<Rational>> vectors{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {Rational(1, 2), -2, 3}};
  for (int n = 1; n <= 3; ++n)
    for (const auto& v3 : vectors) {
      const std::vector<Rational> v(v3.begin(), v3.begin() + n);
      for (int k = 1; k <= n; ++k)
        for (int l = 0; k + l <= n; ++l)
          for (const auto& a : basis_forms(n, k))
            for (const auto& b : basis_forms(n, l)) {
              const Rational sign = k % 2 ? -1 : 1;
              AltForm<Rational> rhs = feec::wedge(feec::contract(v, a), b);
              if (l >= 1)
                rhs += sign * feec::wedge(a, feec::contract(v, b));
              CHECK(feec::contract(v, feec::wedge(a, b)) == rhs);
            }
    }
}

TEST_CASE("contraction of a 1-form is evaluation and contraction squares to zero")
{
  const std::vector<Rational> v{2, -1, 5};
  AltForm<Rational> a(3, 1);
  a[0] = 3;
  a[1] = 4;
  a[2] = -1;
  CHECK(feec::contract(v, a)[0] == Rational(2 * 3 - 4 - 5));
  for (int k = 2; k <= 3; ++k)
    for (const auto& b : basis_forms(3, k))
      CHECK(feec::contract(v, feec::contract(v, b)).is_zero());
}

TEST_CASE("Hodge star: defining relation, isometry and double star sign")
{
  for (int n = 1; n <= 3; ++n) {
    const auto vol = feec::volume_form<Rational>(n);
    for (int k = 0; k <= n; ++k) {
      const auto forms = basis_forms(n, k);
      for (const auto& a : forms)
        for (const auto& b : forms) {
          CHECK(feec::wedge(a, feec::hodge_star(b)) == feec::inner(a, b) * vol);
          CHECK(feec::inner(feec::hodge_star(a), feec::hodge_star(b)) == feec::inner(a, b));
        }
      const Rational sign = (k * (n - k)) % 2 ? -1 : 1;
      for (const auto& a : forms) {
        CHECK(feec::hodge_star(feec::hodge_star(a)) == sign * a);
        CHECK(feec::inverse_hodge_star(feec::hodge_star(a)) == a);
      }
    }
  }
}

TEST_CASE("Hodge star in R^3 maps dx1 to dx2 ^ dx3 and dx2 to -dx1 ^ dx3")
{
  CHECK(feec::hodge_star(AltForm<Rational>::basis(3, {1})) == AltForm<Rational>::basis(3, {2, 3}));
  CHECK(feec::hodge_star(AltForm<Rational>::basis(3, {2})) == AltForm<Rational>::basis(3, {3, 1}));
  CHECK(feec::hodge_star(AltForm<Rational>::basis(2, {1})) == AltForm<Rational>::basis(2, {2}));
}

TEST_CASE("operations reject mismatched operands")
{
  CHECK_THROWS_AS(AltForm<Rational>(2, 1) + AltForm<Rational>(3, 1), feec::DimensionMismatch);
  CHECK_THROWS_AS(AltForm<Rational>(3, 1) + AltForm<Rational>(3, 2), feec::DegreeMismatch);
  CHECK_THROWS_AS(feec::inner(AltForm<Rational>(3, 1), AltForm<Rational>(3, 2)), feec::DegreeMismatch);
}
