// Shared helpers for the unit tests: one-call solves in each mode and broken L^2 differences.

#pragma once

#include "feec/assembly.hpp"
#include "feec/condense.hpp"
#include "feec/manufactured.hpp"
#include "feec/solve.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace feec::testing
{

inline FormFunction load_of(const ManufacturedCase& mc)
{
  const TrigForm f = mc.f;
  return [f](const double* x, double* out) { f.evaluate(x, out); };
}

inline DiscreteSolution solve_standard(const Discretization& disc, const FormFunction& f)
{
  const StandardSystem sys = assemble_standard(disc, f);
  return unpack_standard(sys, solve_sym_indefinite(sys.matrix, sys.rhs, {SolverKind::Direct, 1e-12}));
}

inline DiscreteSolution solve_hybrid_full(const HybridSystem& sys)
{
  return unpack_hybrid(sys, solve_sym_indefinite(sys.full_matrix(), sys.full_rhs(), {SolverKind::Direct, 1e-12}));
}

inline DiscreteSolution solve_condensed(const HybridSystem& sys)
{
  const CondensedSystem cs = condense(sys);
  const Eigen::VectorXd y = solve_sym_indefinite(cs.S, cs.rhs, {SolverKind::Direct, 1e-12});
  return unpack_hybrid(sys, recover_local(cs, y), y);
}

/// sum_K a_K^T M_K a_K with the class mass matrix selected by `mass`.
template <class MassOf>
double broken_norm_sq(const Discretization& disc, const std::vector<Eigen::VectorXd>& a, MassOf mass)
{
  double s = 0.0;
  for (int c = 0; c < disc.mesh().num_cells(); ++c)
    s += a[c].dot(mass(disc.class_matrices(disc.mesh().cell_class[c])) * a[c]);
  return s;
}

inline std::vector<Eigen::VectorXd> difference(const std::vector<Eigen::VectorXd>& a,
                                               const std::vector<Eigen::VectorXd>& b)
{
  std::vector<Eigen::VectorXd> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    d[i] = a[i] - b[i];
  return d;
}

/// (||sigma_a - sigma_b|| + ||u_a - u_b||) / (||sigma_b|| + ||u_b||)
inline double relative_difference(const Discretization& disc, const DiscreteSolution& a, const DiscreteSolution& b)
{
  auto ms = [](const ElementMatrices& em) -> const Eigen::MatrixXd& { return em.mass_sigma; };
  auto mu = [](const ElementMatrices& em) -> const Eigen::MatrixXd& { return em.mass_u; };
  double num = std::sqrt(broken_norm_sq(disc, difference(a.u, b.u), mu));
  double den = std::sqrt(broken_norm_sq(disc, b.u, mu));
  if (disc.has_sigma()) {
    num += std::sqrt(broken_norm_sq(disc, difference(a.sigma, b.sigma), ms));
    den += std::sqrt(broken_norm_sq(disc, b.sigma, ms));
  }
  return num / den;
}

}  // namespace feec::testing
