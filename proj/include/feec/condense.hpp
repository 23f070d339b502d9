// Static condensation of the hybrid system and degree-of-freedom accounting.
//
// With x the local and y the global unknowns, [A B^T; B 0] [x; y] = [F; G] reduces to
//   S y = G - B A^{-1} F,   S = -B A^{-1} B^T,
// after which every cell recovers x_K = A_K^{-1} (F_K - B_K^T y).

#pragma once

#include "feec/assembly.hpp"

#include <iosfwd>
#include <vector>

namespace feec
{

/// Dense symmetric-indefinite (Bunch-Kaufman) factorization of one local block, after symmetric
/// equilibration. rcond refers to the equilibrated matrix.
class LocalFactor
{
public:
  LocalFactor() = default;
  /// Throws SingularLocalBlock (with `cell` and the reciprocal condition estimate) if A is singular.
  LocalFactor(const Eigen::MatrixXd& A, int cell);
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  double rcond() const { return rcond_; }
  int size() const { return static_cast<int>(ldl_.rows()); }

private:
  Eigen::MatrixXd ldl_;
  Eigen::VectorXd scale_;
  std::vector<int> ipiv_;
  double rcond_ = 0.0;
};

/// Reciprocal condition numbers below this count as singular.
constexpr double singular_rcond = 1e-14;

struct CondensedSystem
{
  const HybridSystem* system = nullptr;
  SparseSym S;
  Eigen::VectorXd rhs;
  std::vector<LocalFactor> factors;  ///< per Jacobian class (blocks are translation invariant)

  int size() const { return S.size(); }
};

CondensedSystem condense(const HybridSystem& system);

/// Local fields x_K = A_K^{-1} (F_K - B_K^T y), one vector per cell in the local layout.
std::vector<Eigen::VectorXd> recover_local(const CondensedSystem& condensed, const Eigen::VectorXd& y);

/// Sizes of the standard and condensed systems and the per-cell counts of eliminated unknowns.
struct DofReport
{
  int n = 0, k = 0, r = 0;
  Family sigma_family = Family::Trimmed;
  Family u_family = Family::Trimmed;
  int N = 0;
  int cells = 0;
  long long standard_size = 0;
  long long condensed_size = 0;
  long long hybrid_size = 0;        ///< uncondensed hybrid system
  int interior_sigma = 0;           ///< dim of the vanishing-trace part of W^{k-1}(K)
  int interior_exact = 0;           ///< dim of d applied to it
  int interior_coexact = 0;         ///< dim of the complement of the kernel of d in the vanishing-trace part of W^k(K)
  int interior_harmonic = 0;        ///< 1 when k = n, else 0
  long long identity_residual = 0;  ///< (standard - condensed) - cells * (sum of the three counts)
  bool strictly_smaller = false;
  bool predicted_smaller = false;   ///< threshold rule on (r, n - k) for the family of V^k

  bool identity_holds() const { return identity_residual == 0; }
};

DofReport dof_report(const Mesh& mesh, const StablePair& pair);
/// Threshold rule alone: r >= 1 and (r >= n-k+1 for P_r, r >= n-k for P^-_{r+1}).
bool predicted_strict_reduction(const StablePair& pair);

std::ostream& operator<<(std::ostream& os, const DofReport& report);

}  // namespace feec
