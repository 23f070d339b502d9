// Bases of the full and trimmed polynomial form spaces on the reference simplex.

#pragma once

#include "feec/polynomial.hpp"
#include "feec/rational.hpp"

#include <string>
#include <vector>

namespace feec
{

enum class Family
{
  Full,
  Trimmed
};

std::string to_string(Family f);
Family family_from_string(const std::string& s);

/// Basis of P_r Lambda^k or P_r^- Lambda^k on the reference n-simplex conv{0, e_1, ..., e_n}.
struct FormBasis
{
  Family family = Family::Full;
  int r = 0;
  int k = 0;
  int n = 0;
  std::vector<PolyForm<Rational>> elements;
};

/// Highest polynomial degree accepted by build_basis.
constexpr int max_basis_degree = 6;

/// Full: every monomial x IndexSet of degree <= r. Trimmed: P_{r-1} Lambda^k together with
/// koszul(P_{r-1} Lambda^{k+1}), thinned to a basis by exact elimination.
/// Throws ConfigError for Trimmed with r < 1, negative r, k outside 0..n, or r too large.
FormBasis build_basis(Family family, int r, int k, int n);

/// C(n,k) C(r+n,n).
long long dim_full(int r, int k, int n);
/// C(r+k-1,k) C(n+r,n-k); zero for r < 1.
long long dim_trimmed(int r, int k, int n);
/// C(r-1,n-k) C(r+k,k): forms in P_r Lambda^k with vanishing trace on the boundary.
long long dim_full_vanishing_trace(int r, int k, int n);
/// C(n,k) C(r+k-1,n): forms in P_r^- Lambda^k with vanishing trace on the boundary.
long long dim_trimmed_vanishing_trace(int r, int k, int n);

/// Exact rank of a list of forms (all of equal n and k).
int exact_rank(const std::vector<PolyForm<Rational>>& forms);

/// Indices of a maximal linearly independent sub-list, chosen greedily in order.
std::vector<int> independent_subset(const std::vector<PolyForm<Rational>>& forms);

/// Dimension of the subspace of span(basis) whose trace vanishes on every facet of the
/// reference simplex, computed by exact elimination of the stacked trace map.
int vanishing_trace_dimension(const FormBasis& basis);

/// True when every element of `forms` lies in span(target), checked exactly.
bool in_span(const std::vector<PolyForm<Rational>>& forms, const std::vector<PolyForm<Rational>>& target);

/// Exact linear algebra helpers on dense rational matrices (row-major).
struct RationalMatrix
{
  int rows = 0;
  int cols = 0;
  std::vector<Rational> a;

  RationalMatrix() = default;
  RationalMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, Rational(0)) {}
  Rational& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const Rational& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

int rank(RationalMatrix m);
/// Inverse of a square matrix; throws Error when singular.
RationalMatrix inverse(const RationalMatrix& m);

/// Coefficient matrix of a list of forms: one row per form, one column per (component, monomial).
RationalMatrix coefficient_matrix(const std::vector<PolyForm<Rational>>& forms);

/// Facet charts of the reference n-simplex. Facet i is opposite vertex i, with its
/// remaining vertices taken in ascending order; returns the affine map t -> b + A t.
void reference_facet_chart(int n, int i, std::vector<Rational>& b, std::vector<Rational>& A);

/// Chart of the sub-simplex spanned by the (ascending) reference vertices in `vertex_mask`.
void reference_subsimplex_chart(int n, unsigned vertex_mask, std::vector<Rational>& b, std::vector<Rational>& A);

}  // namespace feec
