// Static condensation: the Schur complement against a dense reference, recovery against the full hybrid
// solve, and the degree-of-freedom identity with exact interior counts on the reference simplex.

#include "feec/basis.hpp"
#include "feec/harness.hpp"
#include "feec/reference_element.hpp"
#include "support.hpp"

#include <doctest.h>

#include <sstream>

using feec::Family;
using feec::StablePair;

namespace
{

/// Exact rank of d applied to the interior (vanishing-trace) nodal functions of a reference element.
int interior_d_rank(const feec::ReferenceElement& ref)
{
  std::vector<feec::PolyForm<feec::Rational>> images;
  for (int i : ref.interior_dofs())
    images.push_back(feec::ext_derivative(ref.exact[i]));
  if (images.empty() || ref.k == ref.dim)
    return 0;
  return feec::exact_rank(images);
}

}  // namespace

TEST_CASE("the condensed matrix is the dense Schur complement")
{
  for (auto [n, k, r] : {std::array{2, 1, 1}, std::array{2, 2, 0}, std::array{2, 0, 1}, std::array{3, 2, 0}}) {
    const feec::Mesh m = feec::build_structured_mesh(n, n == 2 ? 2 : 1);
    const feec::Discretization disc(m, StablePair{n, k, r});
    const auto sys = feec::assemble_hybrid(disc, feec::exact_solution(feec::manufactured_case(n, k, "full")).f);
    const auto cs = feec::condense(sys);
    CHECK(cs.size() == sys.layout.global_size);
    const Eigen::MatrixXd K = sys.full_matrix().full();
    const int nl = sys.num_cells() * sys.layout.local_size;
    const int ng = sys.layout.global_size;
    const Eigen::MatrixXd A = K.topLeftCorner(nl, nl);
    const Eigen::MatrixXd B = K.bottomLeftCorner(ng, nl);
    const Eigen::MatrixXd S = -B * A.partialPivLu().solve(B.transpose()) + K.bottomRightCorner(ng, ng);
    const Eigen::MatrixXd Sc = cs.S.full();
    INFO("n=" << n << " k=" << k << " r=" << r);
    CHECK((S - Sc).norm() <= 1e-10 * S.norm());
    CHECK((Sc - Sc.transpose()).norm() == 0.0);
    const Eigen::VectorXd rhs = sys.full_rhs().tail(ng) -
                                B * A.partialPivLu().solve(sys.full_rhs().head(nl));
    CHECK((rhs - cs.rhs).norm() <= 1e-10 * std::max(1.0, rhs.norm()));
  }
}

TEST_CASE("condensed solve with recovery equals the full hybrid solve")
{
  for (auto [n, k, r] : {std::array{2, 1, 0}, std::array{2, 1, 2}, std::array{2, 0, 0}, std::array{2, 2, 1},
                         std::array{3, 1, 0}, std::array{3, 2, 1}, std::array{3, 3, 0}})
    for (int N : {1, 2}) {
      const feec::Mesh m = feec::build_structured_mesh(n, N);
      const feec::Discretization disc(m, StablePair{n, k, r});
      const auto sys = feec::assemble_hybrid(disc, feec::exact_solution(feec::manufactured_case(n, k, "full")).f);
      const auto a = feec::testing::solve_condensed(sys);
      const auto b = feec::testing::solve_hybrid_full(sys);
      INFO("n=" << n << " k=" << k << " r=" << r << " N=" << N);
      CHECK(feec::testing::relative_difference(disc, a, b) <= 1e-10);
      if (k >= 1)
        CHECK((a.sigmahat - b.sigmahat).norm() <= 1e-10 * std::max(1.0, b.sigmahat.norm()));
      if (k < n)
        CHECK((a.uhat - b.uhat).norm() <= 1e-10 * std::max(1.0, b.uhat.norm()));
    }
}

TEST_CASE("local factors reject singular blocks")
{
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(3, 3);
  A(2, 2) = 0.0;
  CHECK_THROWS_AS(feec::LocalFactor(A, 7), feec::SingularLocalBlock);
  try {
    feec::LocalFactor lf(A, 7);
  } catch (const feec::SingularLocalBlock& e) {
    CHECK(e.cell() == 7);
    CHECK(e.rcond() < feec::singular_rcond);
  }
  Eigen::MatrixXd B(2, 2);
  B << 0.0, 1.0, 1.0, 0.0;  // indefinite, needs a 2 x 2 pivot
  const feec::LocalFactor lf(B, 0);
  CHECK((B * lf.solve(Eigen::VectorXd(Eigen::VectorXd::Ones(2))) - Eigen::VectorXd::Ones(2)).norm() <= 1e-15);
}

TEST_CASE("degree-of-freedom identity and interior counts over the family grid")
{
  for (int n : {2, 3})
    for (int k = 0; k <= n; ++k)
      for (int r = 0; r <= 3; ++r)
        for (Family sf : {Family::Trimmed, Family::Full})
          for (Family uf : {Family::Trimmed, Family::Full}) {
            if (uf == Family::Full && r == 0)
              continue;
            if (n == 3 && r == 3)
              continue;
            const StablePair pair{n, k, r, sf, uf};
            const feec::Mesh m = feec::build_structured_mesh(n, 2);
            const auto rep = feec::dof_report(m, pair);
            INFO("n=" << n << " k=" << k << " r=" << r << " sigma " << feec::to_string(sf) << " u "
                      << feec::to_string(uf));
            CHECK(rep.identity_holds());
            CHECK(rep.condensed_size <= rep.standard_size);
            CHECK(rep.strictly_smaller == (rep.condensed_size < rep.standard_size));
            CHECK(rep.strictly_smaller == rep.predicted_smaller);
            CHECK(rep.predicted_smaller == feec::predicted_strict_reduction(pair));
            CHECK(rep.interior_harmonic == (k == n ? 1 : 0));
            // independent exact counts on the reference simplex
            const auto& ru = feec::reference_element(pair.u().family, pair.u().degree, k, n);
            if (k >= 1) {
              const auto& rs = feec::reference_element(pair.sigma().family, pair.sigma().degree, k - 1, n);
              CHECK(rep.interior_sigma == static_cast<int>(rs.interior_dofs().size()));
              CHECK(rep.interior_exact == interior_d_rank(rs));
            } else {
              CHECK(rep.interior_sigma == 0);
            }
            CHECK(rep.interior_coexact == interior_d_rank(ru));
            // the cell harmonic part stays global through the mean value u-bar
            const long long per_cell = rep.interior_sigma + rep.interior_exact + rep.interior_coexact;
            CHECK(rep.standard_size - rep.condensed_size == static_cast<long long>(m.num_cells()) * per_cell);
          }
}

TEST_CASE("strict reduction thresholds")
{
  // P_r Lambda^k needs r >= n - k + 1, P^-_{r+1} Lambda^k needs r >= n - k, and r >= 1 for both
  CHECK_FALSE(feec::predicted_strict_reduction({2, 1, 0, Family::Trimmed, Family::Trimmed}));
  CHECK(feec::predicted_strict_reduction({2, 1, 1, Family::Trimmed, Family::Trimmed}));
  CHECK_FALSE(feec::predicted_strict_reduction({2, 1, 1, Family::Trimmed, Family::Full}));
  CHECK(feec::predicted_strict_reduction({2, 1, 2, Family::Trimmed, Family::Full}));
  CHECK_FALSE(feec::predicted_strict_reduction({3, 1, 1, Family::Trimmed, Family::Trimmed}));
  CHECK(feec::predicted_strict_reduction({3, 1, 2, Family::Trimmed, Family::Trimmed}));
  CHECK(feec::predicted_strict_reduction({3, 3, 1, Family::Trimmed, Family::Full}));
}

TEST_CASE("DOF report prints its identity check")
{
  const feec::Mesh m = feec::build_structured_mesh(2, 4);
  const auto rep = feec::dof_report(m, {2, 1, 1});
  CHECK(rep.cells == 32);
  CHECK(rep.hybrid_size > rep.standard_size);
  std::ostringstream os;
  os << rep;
  CHECK(os.str().find("holds") != std::string::npos);
}
