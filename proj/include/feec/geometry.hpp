// Affine cell and facet geometry shared by all cells of one Jacobian class.
//
// Cells of a structured mesh fall into a handful of classes that differ only by translation.
// For a class with Jacobian J (columns v_j - v_0), a reference point xh maps to the local
// offset y = J xh from the first cell vertex.

#pragma once

#include "feec/mesh.hpp"

#include <Eigen/Dense>

#include <vector>

namespace feec
{

/// k-th compound matrix of an n x m matrix: entries det A[I, J] over k-subsets I, J.
Eigen::MatrixXd compound(const Eigen::MatrixXd& A, int k);

/// Matrix of the contraction a -> iota_v a acting on k-form coefficients (size C(n,k-1) x C(n,k)).
Eigen::MatrixXd contraction_matrix(const Eigen::VectorXd& v, int k);

struct FacetGeometry
{
  int local_facet = -1;
  Eigen::MatrixXd JF;        ///< n x (n-1) chart Jacobian, in local offsets
  Eigen::VectorXd origin;    ///< chart origin as an offset from the cell's first vertex
  Eigen::VectorXd normal;    ///< outward unit normal
  double measure_factor = 0; ///< sqrt(det JF^T JF)
  /// frame[k] maps ambient k-form coefficients to the tangential trace in an orthonormal
  /// frame of the facet (C(n-1,k) x C(n,k)); frame[k] is empty for k = n.
  std::vector<Eigen::MatrixXd> frame;
  /// normal_frame[k] maps ambient k-form coefficients to the normal trace iota_n a restricted to
  /// the facet, in the same orthonormal frame (C(n-1,k-1) x C(n,k)); empty for k = 0.
  std::vector<Eigen::MatrixXd> normal_frame;
};

struct ClassGeometry
{
  int n = 0;
  Eigen::MatrixXd J;
  Eigen::MatrixXd Jinv;
  double detJ = 0.0;
  std::vector<FacetGeometry> facets;  ///< indexed by local facet
};

ClassGeometry class_geometry(const Mesh& mesh, int cls);

}  // namespace feec
