// Local postprocessing on the Hodge-dual complex.
//
// On each cell the dual spaces are W*^{k+1} = star^{-1} P^+-_{r*+1} Lambda^{n-k-1} and
// W*^k = star^{-1} P_{r*} Lambda^{n-k} or star^{-1} P^-_{r*+1} Lambda^{n-k}. The local problem
//
//   (rho*, eta) - (u*, delta eta)                  =  <uhat^tan, eta^nor>_dK
//   (delta rho*, v) + (delta u*, delta v) + (pbar*, v) = (f - p_h, v) - <sigmahat^tan, v^nor>_dK
//   (u*, qbar)                                      =  (ubar, qbar)          (k = n)
//
// uses only the global variables of the hybrid method. For k = n it is Stenberg's postprocessing.

#pragma once

#include "feec/assembly.hpp"
#include "feec/condense.hpp"

#include <vector>

namespace feec
{

/// Smallest dual degree r* allowed by the approximation assumption (case analysis on the family of
/// W^{k-1} and of the dual space W*^k); a coexact f (orthogonal to the exact forms) only needs r* = r.
int select_dual_degree(Family sigma_family, int r, int k, int n, bool f_coexact, Family dual_family = Family::Trimmed);

struct DualLocalSpaces
{
  int rstar = 0;
  bool has_rho = false;       ///< k <= n-1
  bool harmonic = false;      ///< k = n: constant n-forms
  SpaceSpec rho;              ///< star W*^{k+1}: family of degree r*+1 on (n-k-1)-forms, dual = true
  SpaceSpec u;                ///< star W*^k on (n-k)-forms, dual = true
};

/// Throws ConfigError when r* is below the range of the chosen family (full dual needs r* >= 1).
DualLocalSpaces dual_spaces(int n, int k, int rstar, Family rho_family = Family::Trimmed,
                            Family u_family = Family::Trimmed);

struct PostprocessedFields
{
  DualLocalSpaces spaces;
  std::vector<Eigen::VectorXd> rho;  ///< per cell, coefficients in the dual rho basis
  std::vector<Eigen::VectorXd> u;    ///< per cell, coefficients in the dual u basis
  std::vector<double> pbar;          ///< per cell (k = n)
};

/// Solves the local dual problem on every cell (the spaces' tables come from disc.tables()).
/// Throws ConfigError if a local problem is singular.
PostprocessedFields postprocess(const Discretization& disc, const DiscreteSolution& sol, const FormFunction& f,
                                const DualLocalSpaces& spaces);

/// The local matrix and right-hand side of one cell, in the order (rho*, u*, pbar*).
struct PostprocessLocal
{
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  int nrho = 0, nu = 0, npbar = 0;
};
PostprocessLocal postprocess_element(const Discretization& disc, int cell, const DiscreteSolution& sol,
                                     const FormFunction& f, const DualLocalSpaces& spaces);

}  // namespace feec
