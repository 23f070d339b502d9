// Element matrices and global systems for the mixed Hodge-Laplace problem: the standard mixed
// system over conforming spaces and the hybrid system over broken spaces with trace multipliers.
//
// Hybrid variables. Local to each cell: sigma, u, pbar (k = n), uhat^nor (k >= 1), rhohat^nor (k <= n-1).
// Global: p (k = 0), ubar (k = n, one per cell), sigmahat^tan (k >= 1), uhat^tan (k <= n-1).
// The broken normal-trace multipliers live on the whole cell boundary: their basis is the set of traces of
// the volume nodal functions whose DOFs sit on the boundary, paired with tangential traces in L^2(dK).
// The sigma-rows are negated with respect to the textbook form so that the local block is symmetric:
//
//   tau  :  -M sigma + D^T u - T^T uhat^nor                         = 0
//   v    :   D sigma + K u + Q pbar - R^T rhohat^nor   (+ Q p, k = 0) = (f, v)
//   qbar :   Q^T u                      - |K| ubar                   = 0
//   vnor :  -T sigma                    + Gs sigmahat^tan            = 0
//   etanor: -R u                        + Gu uhat^tan                = 0
//
// with the global rows  p: Q^T u,  ubar: -|K| pbar,  sigmahat: Gs uhat^nor,  uhat: Gu rhohat^nor (all = 0).

#pragma once

#include "feec/element_tables.hpp"
#include "feec/fespace.hpp"
#include "feec/solve.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace feec
{

/// Pointwise closed-form field: writes the components of a form at an absolute point x.
using FormFunction = std::function<void(const double* x, double* out)>;

/// Local matrices on one cell. Only the load depends on the cell itself; the rest depends on its class.
struct ElementMatrices
{
  Eigen::MatrixXd mass_sigma;   ///< (tau_j, tau_i)
  Eigen::MatrixXd mass_u;       ///< (v_j, v_i)
  Eigen::MatrixXd mixed;        ///< (d tau_j, v_i), rows v
  Eigen::MatrixXd stiff;        ///< (d v_j, d v_i)
  Eigen::VectorXd harmonic;     ///< (v_i, q) for the constant harmonic form q (k = 0 or k = n), else empty
  Eigen::MatrixXd trace_sigma;  ///< <phi_a, tau_j^tan>_dK for boundary trace functions phi_a of the sigma space
  Eigen::MatrixXd trace_u;      ///< <psi_b, v_i^tan>_dK for boundary trace functions psi_b of the u space
  Eigen::MatrixXd gram_sigma;   ///< <phi_a, phi_b>_dK
  Eigen::MatrixXd gram_u;       ///< <psi_a, psi_b>_dK
  double volume = 0.0;
  Eigen::VectorXd load;         ///< (f, v_i); empty when no load was requested
};

/// Spaces, tables and cached class matrices for one mesh and one stable pair.
class Discretization
{
public:
  /// quad_degree is used for both volume and facet rules; 0 selects max(2 (r + 3) + 2, 12).
  Discretization(const Mesh& mesh, const StablePair& pair, int quad_degree = 0);

  const Mesh& mesh() const { return *mesh_; }
  const StablePair& pair() const { return pair_; }
  int n() const { return pair_.n; }
  int k() const { return pair_.k; }
  bool has_sigma() const { return pair_.k >= 1; }
  bool has_u_trace() const { return pair_.k <= pair_.n - 1; }
  bool local_harmonic() const { return pair_.k == pair_.n; }
  bool global_harmonic() const { return pair_.k == 0; }

  const ElementTables& tables() const { return *tables_; }
  SpaceSpec sigma_spec() const { return SpaceSpec::primal(pair_.sigma()); }
  SpaceSpec u_spec() const { return SpaceSpec::primal(pair_.u()); }

  /// Conforming spaces V^{k-1} (if k >= 1) and V^k.
  const FeSpace& sigma_space() const { return *sigma_space_; }
  const FeSpace& u_space() const { return u_space_; }
  /// Single-valued trace spaces.
  const TraceSpace& sigma_trace() const { return *sigma_trace_; }
  const TraceSpace& u_trace() const { return *u_trace_; }

  int sigma_local_size() const { return has_sigma() ? sigma_space_->local_size() : 0; }
  int u_local_size() const { return u_space_.local_size(); }
  int sigma_boundary_size() const { return has_sigma() ? sigma_trace_->boundary_size() : 0; }
  int u_boundary_size() const { return has_u_trace() ? u_trace_->boundary_size() : 0; }

  const ElementMatrices& class_matrices(int cls) const { return class_matrices_[cls]; }
  /// Absolute coordinates of the first vertex of a cell.
  Eigen::VectorXd cell_origin(int cell) const;
  /// (f, v_i) over the cell for a function in a space given by its tables.
  Eigen::VectorXd load(int cell, const SpaceTables& t, const FormFunction& f) const;

private:
  const Mesh* mesh_;
  StablePair pair_;
  std::unique_ptr<ElementTables> tables_;
  std::optional<FeSpace> sigma_space_;
  FeSpace u_space_;
  std::optional<TraceSpace> sigma_trace_;
  std::optional<TraceSpace> u_trace_;
  std::vector<ElementMatrices> class_matrices_;
};

/// Geometry matrices of the cell and, when f is given, its load (f, v_i).
ElementMatrices element_matrices(const Discretization& disc, int cell, const FormFunction* f = nullptr);

/// Standard mixed system over (sigma, u, p) on conforming spaces; p only for k = 0.
struct StandardSystem
{
  const Discretization* disc = nullptr;
  SparseSym matrix;
  Eigen::VectorXd rhs;
  int sigma_offset = 0;
  int u_offset = 0;
  int p_offset = -1;  ///< -1 when k > 0
  int size() const { return matrix.size(); }
};

/// Throws ConfigError for unstable pairs.
/// An empty f gives a zero load.
StandardSystem assemble_standard(const Discretization& disc, const FormFunction& f);

/// Index layout of the hybrid variables.
struct HybridLayout
{
  // local block, per cell
  int sigma = 0, u = 0, pbar = 0, uhat_nor = 0, rhohat_nor = 0;
  int off_sigma = 0, off_u = 0, off_pbar = 0, off_uhat_nor = 0, off_rhohat_nor = 0;
  int local_size = 0;
  // global block
  int p = 0, ubar = 0, sigmahat = 0, uhat = 0;
  int off_p = 0, off_ubar = 0, off_sigmahat = 0, off_uhat = 0;
  int global_size = 0;
};

struct HybridSystem
{
  const Discretization* disc = nullptr;
  HybridLayout layout;
  std::vector<Eigen::MatrixXd> A;  ///< local block per Jacobian class
  std::vector<Eigen::MatrixXd> B;  ///< local coupling per class; rows follow cell_globals(cell)
  std::vector<Eigen::VectorXd> F;  ///< local load per cell
  Eigen::VectorXd G;               ///< global load (zero for this problem)

  int num_cells() const { return static_cast<int>(F.size()); }
  const Eigen::MatrixXd& A_block(int cell) const;
  const Eigen::MatrixXd& B_block(int cell) const;
  /// Global indices coupled to a cell, in the row order of its B block.
  std::vector<int> cell_globals(int cell) const;
  /// Total number of unknowns of the uncondensed system (locals first, then globals).
  int full_size() const { return num_cells() * layout.local_size + layout.global_size; }
  SparseSym full_matrix() const;
  Eigen::VectorXd full_rhs() const;
};

/// An empty f gives a zero load.
HybridSystem assemble_hybrid(const Discretization& disc, const FormFunction& f);

/// Discrete fields of a solve, stored per cell in the local (broken) bases.
struct DiscreteSolution
{
  std::vector<Eigen::VectorXd> sigma;       ///< per cell
  std::vector<Eigen::VectorXd> u;           ///< per cell
  std::vector<double> pbar;                 ///< per cell (k = n)
  std::vector<Eigen::VectorXd> uhat_nor;    ///< per cell boundary coefficients (k >= 1)
  std::vector<Eigen::VectorXd> rhohat_nor;  ///< per cell boundary coefficients (k <= n-1)
  double p = 0.0;                           ///< global harmonic multiplier (k = 0)
  Eigen::VectorXd ubar;                     ///< per cell (k = n)
  Eigen::VectorXd sigmahat;                 ///< single-valued trace coefficients (k >= 1)
  Eigen::VectorXd uhat;                     ///< single-valued trace coefficients (k <= n-1)
  bool hybrid = false;                      ///< multipliers and local harmonic parts present
};

/// Splits a standard-system solution into per-cell fields; traces are the traces of sigma_h and u_h
/// and ubar is the cell mean coefficient of u_h.
DiscreteSolution unpack_standard(const StandardSystem& sys, const Eigen::VectorXd& x);
/// Splits a full hybrid solution vector (locals then globals).
DiscreteSolution unpack_hybrid(const HybridSystem& sys, const Eigen::VectorXd& xy);
/// Builds the solution from the global vector and the per-cell local vectors.
DiscreteSolution unpack_hybrid(const HybridSystem& sys, const std::vector<Eigen::VectorXd>& locals,
                               const Eigen::VectorXd& y);

}  // namespace feec
