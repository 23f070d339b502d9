// Finite element spaces over a mesh: broken and conforming volume spaces, trace spaces on the
// skeleton, stable pairs, and discrete Hodge decompositions.
//
// Local basis functions are the nodal functions of the reference element, and cells number their
// vertices in ascending global order. A degree of freedom on a sub-simplex f is therefore the same
// functional from every cell containing f, and conforming gluing needs no orientation signs.

#pragma once

#include "feec/mesh.hpp"
#include "feec/reference_element.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace feec
{

/// One finite element family member P_r Lambda^k or P_r^- Lambda^k.
struct ElementSpec
{
  Family family = Family::Trimmed;
  int degree = 1;
  int k = 0;

  bool operator==(const ElementSpec&) const = default;
};

std::string to_string(const ElementSpec& e);

/// V^{k-1} = P^+-_{r+1} Lambda^{k-1} and V^k = P_r Lambda^k (r >= 1) or P^-_{r+1} Lambda^k.
struct StablePair
{
  int n = 2;
  int k = 1;
  int r = 0;
  Family sigma_family = Family::Trimmed;
  Family u_family = Family::Trimmed;

  /// Throws ConfigError for combinations outside the stable families.
  void validate() const;
  bool has_sigma() const { return k >= 1; }
  ElementSpec sigma() const { return {sigma_family, r + 1, k - 1}; }
  ElementSpec u() const { return {u_family, u_family == Family::Full ? r : r + 1, k}; }
};

enum class SpaceKind
{
  Broken,
  Conforming
};

class FeSpace
{
public:
  const Mesh* mesh = nullptr;
  ElementSpec spec;
  SpaceKind kind = SpaceKind::Broken;
  const ReferenceElement* ref = nullptr;
  int dim = 0;
  std::array<int, max_ambient_dim + 2> offsets{};  ///< conforming: first id per entity dimension

  int local_size() const { return ref->size(); }
  int global_dof(int cell, int local) const;
  std::vector<int> cell_dofs(int cell) const;
  /// Relative orientation of a local basis function against its global one (always +1 here).
  int sign(int, int) const { return 1; }
};

/// Throws ConfigError for unsupported (family, degree, k) such as trimmed degree 0.
FeSpace build_space(const Mesh& mesh, Family family, int degree, int k, SpaceKind kind);

enum class TraceKind
{
  SingleValued,  ///< traces of the conforming space, one DOF set per skeleton entity
  Broken         ///< traces of the broken space, one DOF set per cell boundary
};

/// Tangential traces of a volume family on the skeleton. On each cell boundary the basis is the set of
/// traces of the nodal functions whose DOFs live on the boundary; on a facet these coincide with the
/// nodal basis of the same family on the (n-1)-simplex.
class TraceSpace
{
public:
  const Mesh* mesh = nullptr;
  ElementSpec spec;
  TraceKind kind = TraceKind::Broken;
  const ReferenceElement* ref = nullptr;        ///< volume element
  const ReferenceElement* facet_ref = nullptr;  ///< the same family on the facet simplex
  std::vector<int> boundary_local;              ///< volume-local indices of boundary DOFs
  int dim = 0;

  int boundary_size() const { return static_cast<int>(boundary_local.size()); }
  /// Global id of the j-th boundary DOF of a cell.
  int global_dof(int cell, int j) const;
  std::vector<int> cell_dofs(int cell) const;
  /// Global ids of the facet-element DOFs on a facet (SingleValued only); the order matches facet_ref.
  std::vector<int> facet_dofs(int facet) const;
  /// Positions in boundary_local of the DOFs carried by the closure of a local facet,
  /// ordered like facet_ref.
  std::vector<int> facet_local(int local_facet) const;

private:
  std::array<int, max_ambient_dim + 2> offsets_{};
  friend TraceSpace build_trace_space(const Mesh&, Family, int, int, TraceKind);
};

/// Throws ConfigError when k = n (tangential traces of n-forms vanish).
TraceSpace build_trace_space(const Mesh& mesh, Family family, int degree, int k, TraceKind kind);

/// Mutually orthogonal bases (columns are coefficient vectors) of the exact, harmonic and
/// coexact parts of a finite element space.
struct HodgeDecomposition
{
  Eigen::MatrixXd exact;
  Eigen::MatrixXd harmonic;
  Eigen::MatrixXd coexact;
};

/// Decomposes a space with SPD mass matrix `mass`, given the matrix of d from the previous space
/// (columns: coefficients of d of each previous basis function) and the matrix of d into the next space.
/// Either d-matrix may have zero columns/rows. Throws Error on an indefinite mass matrix.
HodgeDecomposition hodge_decompose(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& d_prev,
                                   const Eigen::MatrixXd& d_next, double tol = 1e-10);

}  // namespace feec
