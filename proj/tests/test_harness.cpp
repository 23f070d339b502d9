// Error evaluation: exact discrete fields give zero error, the two trace-norm routes agree, rates and CSV
// output behave as documented, and the broken delta d column stagnates for the lowest order.

#include "feec/harness.hpp"
#include "feec/study.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using feec::ErrorColumn;
using feec::StablePair;

namespace
{

/// Linear 1-form u = (2x + 3y) dx + (x - y) dy: sigma = delta u = -1, rho = du = -2, delta rho = 0, f = 0.
feec::ExactSolution linear_solution()
{
  feec::ExactSolution e;
  e.n = 2;
  e.k = 1;
  e.u = [](const double* x, double* out) {
    out[0] = 2.0 * x[0] + 3.0 * x[1];
    out[1] = x[0] - x[1];
  };
  e.sigma = [](const double*, double* out) { out[0] = -1.0; };
  e.rho = [](const double*, double* out) { out[0] = -2.0; };
  e.delta_rho = [](const double*, double* out) { out[0] = out[1] = 0.0; };
  e.f = [](const double*, double* out) { out[0] = out[1] = 0.0; };
  return e;
}

/// Single-valued trace coefficients read off the boundary DOFs of a conforming field stored per cell.
Eigen::VectorXd traces(const feec::TraceSpace& ts, const std::vector<Eigen::VectorXd>& cells)
{
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ts.dim);
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (int j = 0; j < ts.boundary_size(); ++j)
      out[ts.global_dof(static_cast<int>(c), j)] = cells[c][ts.boundary_local[j]];
  return out;
}

feec::ErrorRecord record(int N, double e)
{
  feec::ErrorRecord r;
  r.n = 2;
  r.k = 1;
  r.N = N;
  r.h = std::sqrt(2.0) / N;
  r.error[0] = e;
  return r;
}

}  // namespace

TEST_CASE("fields reproduced exactly by the spaces have zero error")
{
  const feec::Mesh m = feec::build_structured_mesh(2, 2);
  const feec::Discretization disc(m, StablePair{2, 1, 1}, 12);
  const auto exact = linear_solution();
  feec::DiscreteSolution sol;
  sol.hybrid = true;
  sol.sigma = feec::project_broken(disc, disc.sigma_spec(), exact.sigma);
  sol.u = feec::project_broken(disc, disc.u_spec(), exact.u);
  sol.sigmahat = traces(disc.sigma_trace(), sol.sigma);
  sol.uhat = traces(disc.u_trace(), sol.u);
  const auto spaces = feec::dual_spaces(2, 1, 2);
  feec::PostprocessedFields pp{spaces, feec::project_broken(disc, spaces.rho, exact.rho),
                               feec::project_broken(disc, spaces.u, exact.u), {}};
  const auto rec = feec::compute_errors(disc, exact, sol, &pp);
  for (ErrorColumn c : {ErrorColumn::Sigma, ErrorColumn::SigmaTan, ErrorColumn::U, ErrorColumn::UTan, ErrorColumn::DU,
                        ErrorColumn::DeltaDU, ErrorColumn::SigmaPost, ErrorColumn::UPost, ErrorColumn::RhoPost,
                        ErrorColumn::DeltaRhoPost}) {
    INFO(std::string(feec::column_info(c).key));
    REQUIRE(rec.has(c));
    CHECK(rec[c] <= 1e-9);
    CHECK(rec[c] >= 0.0);
  }
  // no multipliers were given
  CHECK_FALSE(rec.has(ErrorColumn::UNor));
  CHECK_FALSE(rec.has(ErrorColumn::RhoNor));
}

TEST_CASE("a known perturbation gives the expected volume error")
{
  // sigma = -1 lies in the P_1 sigma space, so shifting sigma_h by c gives ||sigma - sigma_h|| = |c|
  const feec::Mesh m = feec::build_structured_mesh(2, 3);
  const feec::Discretization disc(m, StablePair{2, 1, 0}, 8);
  auto exact = linear_solution();
  feec::DiscreteSolution sol;
  sol.sigma = feec::project_broken(disc, disc.sigma_spec(), [](const double*, double* out) { out[0] = -1.5; });
  sol.u = feec::project_broken(disc, disc.u_spec(), exact.u);
  const auto rec = feec::compute_errors(disc, exact, sol);
  CHECK(rec[ErrorColumn::Sigma] == doctest::Approx(0.5).epsilon(1e-12));
  // the lowest-order Whitney space does not contain the linear u
  CHECK(rec[ErrorColumn::U] > 1e-3);
}

TEST_CASE("the facet-loop and cell-boundary routes of the trace norms agree")
{
  for (auto [n, k, r] : {std::array{2, 1, 0}, std::array{2, 1, 1}, std::array{3, 2, 0}, std::array{3, 1, 0},
                         std::array{2, 2, 1}, std::array{2, 0, 1}}) {
    const feec::Mesh m = feec::build_structured_mesh(n, 2);
    const feec::Discretization disc(m, StablePair{n, k, r}, 12);
    const auto exact = feec::exact_solution(feec::manufactured_case(n, k, "full"));
    const auto sol = feec::testing::solve_condensed(feec::assemble_hybrid(disc, exact.f));
    const auto rec = feec::compute_errors(disc, exact, sol);
    for (int c = 0; c < feec::num_error_columns; ++c) {
      const auto col = static_cast<ErrorColumn>(c);
      if (!feec::column_info(col).trace || !rec.has(col))
        continue;
      INFO("n=" << n << " k=" << k << " r=" << r << " column " << feec::column_info(col).key);
      CHECK(std::abs(rec.error[c] - rec.error_alt[c]) <= 1e-12 * std::max(1.0, rec.error[c]));
    }
  }
}

TEST_CASE("columns apply according to the form degree and the solve mode")
{
  const feec::Mesh m = feec::build_structured_mesh(2, 1);
  {
    const feec::Discretization disc(m, StablePair{2, 0, 1});
    const auto exact = feec::exact_solution(feec::manufactured_case(2, 0, "full"));
    const auto rec = feec::compute_errors(disc, exact, feec::testing::solve_condensed(feec::assemble_hybrid(disc, exact.f)));
    CHECK_FALSE(rec.has(ErrorColumn::Sigma));
    CHECK_FALSE(rec.has(ErrorColumn::UNor));
    CHECK(rec.has(ErrorColumn::RhoNor));
  }
  {
    const feec::Discretization disc(m, StablePair{2, 2, 1});
    const auto exact = feec::exact_solution(feec::manufactured_case(2, 2, "full"));
    const auto rec = feec::compute_errors(disc, exact, feec::testing::solve_condensed(feec::assemble_hybrid(disc, exact.f)));
    CHECK(rec.has(ErrorColumn::UNor));
    CHECK_FALSE(rec.has(ErrorColumn::UTan));
    CHECK_FALSE(rec.has(ErrorColumn::DU));
  }
  {
    const feec::Discretization disc(m, StablePair{2, 1, 0});
    const auto exact = feec::exact_solution(feec::manufactured_case(2, 1, "full"));
    const auto rec = feec::compute_errors(disc, exact, feec::testing::solve_standard(disc, exact.f));
    CHECK(rec.has(ErrorColumn::SigmaTan));
    CHECK_FALSE(rec.has(ErrorColumn::UNor));
    CHECK_FALSE(rec.has(ErrorColumn::SigmaPost));
  }
}

TEST_CASE("rates are log2 ratios along doubling chains")
{
  std::vector<feec::ErrorRecord> recs{record(1, 4.0), record(2, 1.0), record(4, 0.125)};
  feec::rate_table(recs);
  CHECK(std::isnan(recs[0].rate[0]));
  CHECK(recs[1].rate[0] == doctest::Approx(2.0));
  CHECK(recs[2].rate[0] == doctest::Approx(3.0));
  CHECK(std::isnan(recs[1].rate[1]));  // absent column

  // a new chain starts when the degree changes
  std::vector<feec::ErrorRecord> two{record(1, 4.0), record(2, 1.0), record(1, 3.0), record(2, 3.0)};
  two[2].r = two[3].r = 1;
  feec::rate_table(two);
  CHECK(std::isnan(two[2].rate[0]));
  CHECK(two[3].rate[0] == doctest::Approx(0.0));

  std::vector<feec::ErrorRecord> bad{record(1, 4.0), record(3, 1.0)};
  CHECK_THROWS_AS(feec::rate_table(bad), feec::ConfigError);
}

TEST_CASE("CSV output: header, formatting and byte-stable reruns")
{
  feec::RunConfig cfg;
  cfg.n = 2;
  cfg.k = 1;
  cfg.r_list = {0, 1};
  cfg.N_list = {1, 2};
  cfg.postprocess = true;
  const auto a = feec::run_study(cfg);
  const auto b = feec::run_study(cfg);
  std::ostringstream sa, sb;
  feec::write_csv(sa, a.records);
  feec::write_csv(sb, b.records);
  CHECK(sa.str() == sb.str());
  const std::string csv = sa.str();
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header.rfind("n,k,r,sigma_family,u_family,N,h,rstar,sigma,sigma_rate,sigma_full,", 0) == 0);
  CHECK(header.find("delta_rho_post_full") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(csv.find("---") != std::string::npos);
  // 3 significant digits in scientific notation
  CHECK(csv.find("e-0") != std::string::npos);

  std::ostringstream table;
  feec::write_text_table(table, a.records, feec::trace_table_columns());
  const std::string text = table.str();
  CHECK(text.find(feec::column_info(ErrorColumn::SigmaTan).title) != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') >= 5);
}

TEST_CASE("the broken delta d error stagnates for the lowest order")
{
  feec::RunConfig cfg;
  cfg.n = 2;
  cfg.k = 1;
  cfg.r_list = {0};
  cfg.N_list = {2, 4, 8};
  const auto res = feec::run_study(cfg);
  for (std::size_t i = 1; i < res.records.size(); ++i)
    CHECK(std::abs(res.records[i].rate_of(ErrorColumn::DeltaDU)) < 0.1);
  CHECK(res.records.back()[ErrorColumn::DeltaDU] == doctest::Approx(14.0).epsilon(0.02));
}
