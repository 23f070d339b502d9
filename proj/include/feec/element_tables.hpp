// Tabulated physical basis functions per Jacobian class.
//
// For a reference basis function psi, the physical function on a cell with Jacobian J is the
// pullback of psi by x -> J^{-1}(x - v_0); it is formed symbolically, so d, the codifferential and
// delta d are exact polynomials before tabulation. Dual spaces are the inverse Hodge stars of a
// primal family on the physical cell.
//
// Layout: a table with C components per point stores value component c at point q in row q*C + c.

#pragma once

#include "feec/fespace.hpp"
#include "feec/geometry.hpp"
#include "feec/polynomial.hpp"

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

namespace feec
{

/// A local space: the primal family P^+-_degree Lambda^k, or (dual) its inverse Hodge star,
/// which consists of (n-k)-forms.
struct SpaceSpec
{
  Family family = Family::Trimmed;
  int degree = 1;
  int k = 0;
  bool dual = false;

  static SpaceSpec primal(const ElementSpec& e) { return {e.family, e.degree, e.k, false}; }
  int form_degree(int n) const { return dual ? n - k : k; }
  auto key() const { return std::make_tuple(static_cast<int>(family), degree, k, dual); }
};

struct VolumeTable
{
  int nb = 0;
  int nq = 0;
  int k = 0;  ///< form degree of the tabulated functions
  Eigen::MatrixXd val;      ///< k-form values
  Eigen::MatrixXd dval;     ///< d, (k+1)-form
  Eigen::MatrixXd cod;      ///< codifferential, (k-1)-form
  Eigen::MatrixXd coddval;  ///< delta d, k-form
  Eigen::VectorXd w;        ///< physical quadrature weights
  Eigen::MatrixXd points;   ///< n x nq offsets from the first cell vertex
};

struct FacetTable
{
  int nq = 0;
  Eigen::MatrixXd tr;      ///< tangential trace in an orthonormal facet frame, C(n-1,k) comps
  Eigen::MatrixXd nor;     ///< normal trace in the same frame, C(n-1,k-1) comps
  Eigen::VectorXd w;       ///< physical facet quadrature weights
  Eigen::MatrixXd points;  ///< n x nq offsets from the first cell vertex
};

struct SpaceTables
{
  SpaceSpec spec;
  int n = 0;
  int k = 0;  ///< form degree
  int nb = 0;
  std::vector<PolyForm<double>> physical;  ///< in offsets y = x - v_0
  VolumeTable vol;
  std::vector<FacetTable> facets;  ///< per local facet
};

/// Quadrature points and weights of a class, independent of the space.
struct ClassQuadrature
{
  Eigen::MatrixXd points;  ///< n x nq offsets
  Eigen::VectorXd w;
  std::vector<Eigen::MatrixXd> facet_points;
  std::vector<Eigen::VectorXd> facet_w;
};

/// Lazily built, thread-safe cache of class geometries and space tables for one mesh and
/// one pair of quadrature degrees.
class ElementTables
{
public:
  ElementTables(const Mesh& mesh, int volume_degree, int facet_degree);

  const Mesh& mesh() const { return *mesh_; }
  int volume_degree() const { return volume_degree_; }
  int facet_degree() const { return facet_degree_; }
  const ClassGeometry& geometry(int cls) const { return geometry_[cls]; }
  const ClassQuadrature& quadrature(int cls) const { return quadrature_[cls]; }
  const SpaceTables& get(const SpaceSpec& spec, int cls) const;

private:
  const Mesh* mesh_;
  int volume_degree_;
  int facet_degree_;
  std::vector<ClassGeometry> geometry_;
  std::vector<ClassQuadrature> quadrature_;
  mutable std::mutex mutex_;
  mutable std::map<std::tuple<int, int, int, bool, int>, std::unique_ptr<SpaceTables>> cache_;
};

/// Number of components of a k-form in R^n (0 outside 0..n).
int ncomp(int n, int k);

/// sum_q w_q sum_c A(q*C+c, i) B(q*C+c, j).
Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::VectorXd& w, int C);

/// Local basis functions of a space on the reference simplex (nodal for primal spaces).
const ReferenceElement& space_reference(const SpaceSpec& spec, int n);

}  // namespace feec
