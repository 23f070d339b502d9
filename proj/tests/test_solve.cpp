// Sparse symmetric storage and the direct and iterative solvers.

#include "feec/harness.hpp"
#include "support.hpp"

#include <doctest.h>

using feec::SolverKind;
using feec::SparseSym;

TEST_CASE("symmetric storage keeps the upper triangle and sums duplicates")
{
  std::vector<Eigen::Triplet<double>> full{{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}, {1, 1, 1.0}};
  const SparseSym a = SparseSym::from_full_triplets(2, full);
  CHECK(a.size() == 2);
  CHECK(a.nnz() == 3);
  Eigen::MatrixXd expected(2, 2);
  expected << 2.0, 1.0, 1.0, 4.0;
  CHECK(Eigen::MatrixXd(a.full()) == expected);
  CHECK(a.multiply(Eigen::Vector2d(1.0, -1.0)) == Eigen::Vector2d(1.0, -3.0));
  std::vector<Eigen::Triplet<double>> upper{{0, 0, 2.0}, {0, 1, 1.0}, {1, 1, 4.0}};
  CHECK(Eigen::MatrixXd(SparseSym::from_upper_triplets(2, upper).full()) == expected);
}

TEST_CASE("direct solve of a small indefinite system")
{
  // saddle point [[1, 1], [1, 0]]
  const SparseSym a = SparseSym::from_upper_triplets(2, {{0, 0, 1.0}, {0, 1, 1.0}});
  feec::SolveInfo info;
  const Eigen::VectorXd x = feec::solve_sym_indefinite(a, Eigen::Vector2d(3.0, 1.0), {}, &info);
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(2.0));
  CHECK(info.residual <= 1e-14);
}

TEST_CASE("singular systems raise SolverError with the best residual")
{
  const SparseSym a = SparseSym::from_upper_triplets(2, {{0, 0, 1.0}});
  try {
    feec::solve_sym_indefinite(a, Eigen::Vector2d(1.0, 1.0));
    FAIL("expected a solver failure");
  } catch (const feec::SolverError& e) {
    CHECK(e.best_residual() >= 0.0);
  }
  CHECK_THROWS_AS(feec::solve_sym_indefinite(a, Eigen::Vector2d(1.0, 1.0), {SolverKind::Iterative, 1e-10, 50}),
                  feec::SolverError);
}

TEST_CASE("an unreachable residual target is reported as a failure")
{
  const feec::Mesh m = feec::build_structured_mesh(2, 2);
  const feec::Discretization disc(m, {2, 1, 1});
  const auto sys = feec::assemble_hybrid(disc, feec::exact_solution(feec::manufactured_case(2, 1, "full")).f);
  const auto cs = feec::condense(sys);
  CHECK_THROWS_AS(feec::solve_sym_indefinite(cs.S, cs.rhs, {SolverKind::Direct, 1e-30}), feec::SolverError);
}

TEST_CASE("direct and iterative solvers agree on harness systems")
{
  for (auto [n, k, r, N] : {std::array{2, 1, 1, 4}, std::array{2, 2, 0, 4}, std::array{3, 2, 0, 2}, std::array{2, 0, 1, 2}}) {
    INFO("n=" << n << " k=" << k << " r=" << r << " N=" << N);
    const feec::Mesh m = feec::build_structured_mesh(n, N);
    const feec::Discretization disc(m, {n, k, r});
    const auto sys = feec::assemble_hybrid(disc, feec::exact_solution(feec::manufactured_case(n, k, "full")).f);
    const auto cs = feec::condense(sys);
    feec::SolveInfo di, ii;
    const Eigen::VectorXd xd = feec::solve_sym_indefinite(cs.S, cs.rhs, {SolverKind::Direct, 1e-12}, &di);
    const Eigen::VectorXd xi = feec::solve_sym_indefinite(cs.S, cs.rhs, {SolverKind::Iterative, 1e-12}, &ii);
    CHECK(ii.iterations > 0);
    CHECK((xd - xi).norm() <= 1e-8 * xd.norm());
    // the standard system too
    const auto st = feec::assemble_standard(disc, feec::exact_solution(feec::manufactured_case(n, k, "full")).f);
    const Eigen::VectorXd sd = feec::solve_sym_indefinite(st.matrix, st.rhs, {SolverKind::Direct, 1e-12});
    INFO("standard system");
    const Eigen::VectorXd si = feec::solve_sym_indefinite(st.matrix, st.rhs, {SolverKind::Iterative, 1e-12});
    CHECK((sd - si).norm() <= 1e-8 * sd.norm());
  }
}
