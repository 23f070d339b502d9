// Reference elements with bases dual to the standard moment degrees of freedom.
//
// For P_r^- Lambda^k the degrees of freedom on a d-dimensional sub-simplex f are the
// moments  u -> int_f tr_f u ^ eta  with eta in P_{r+k-d-1} Lambda^{d-k}(f); for P_r Lambda^k
// eta ranges over P^-_{r+k-d} Lambda^{d-k}(f). Each sub-simplex is parametrized from the
// reference d-simplex through its vertices in ascending order, so two simplices sharing f
// (with local vertices numbered in ascending global order) evaluate identical functionals.

#pragma once

#include "feec/basis.hpp"

#include <array>
#include <vector>

namespace feec
{

struct DofLabel
{
  unsigned vertex_mask = 0;  ///< reference vertices spanning the carrying sub-simplex
  int moment = 0;            ///< index of the moment on that sub-simplex
  int subdim() const { return popcount(vertex_mask) - 1; }
};

struct ReferenceElement
{
  Family family = Family::Full;
  int degree = 0;
  int k = 0;
  int dim = 0;
  std::vector<PolyForm<Rational>> exact;  ///< nodal basis, exact
  std::vector<PolyForm<double>> basis;    ///< same basis in floating point
  std::vector<DofLabel> dofs;
  std::array<int, max_ambient_dim + 1> moments{};  ///< moments per sub-simplex, by dimension

  int size() const { return static_cast<int>(basis.size()); }
  /// Local indices of the degrees of freedom carried by the simplex interior.
  std::vector<int> interior_dofs() const;
};

/// Cached reference element; the zero space (empty) for trimmed degree 0.
const ReferenceElement& reference_element(Family family, int degree, int k, int dim);

/// Moment space family/degree used on a sub-simplex of dimension `subdim`; degree < 0 means none.
struct MomentSpace
{
  Family family;
  int degree;
  int form_degree;
};
MomentSpace moment_space(Family family, int degree, int k, int subdim);

}  // namespace feec
