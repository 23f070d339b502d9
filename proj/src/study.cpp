#include "feec/study.hpp"

#include "feec/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <ostream>

namespace feec
{

std::string to_string(Mode m)
{
  switch (m) {
  case Mode::Standard: return "standard";
  case Mode::Hybrid: return "hybrid";
  case Mode::HybridCondense: return "hybrid+condense";
  }
  return "?";
}

Mode mode_from_string(const std::string& s)
{
  if (s == "standard")
    return Mode::Standard;
  if (s == "hybrid")
    return Mode::Hybrid;
  if (s == "hybrid+condense")
    return Mode::HybridCondense;
  throw ConfigError(fmt::format("unknown mode '{}' (expected standard, hybrid or hybrid+condense)", s));
}

void RunConfig::validate() const
{
  if (n != 2 && n != 3)
    throw ConfigError("n must be 2 or 3");
  if (r_list.empty() || N_list.empty())
    throw ConfigError("the degree and level lists must not be empty");
  for (int r : r_list)
    StablePair{n, k, r, sigma_family, u_family}.validate();
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    if (N_list[i] < 1)
      throw ConfigError("refinement levels must be positive");
    if (i > 0 && N_list[i] != 2 * N_list[i - 1])
      throw ConfigError(fmt::format("refinement levels must double: {} follows {}", N_list[i], N_list[i - 1]));
  }
  if (!(tol > 0.0))
    throw ConfigError("solver tolerance must be positive");
  if (quad_degree < 0)
    throw ConfigError("quadrature degree must be nonnegative");
  manufactured_case(n, k, case_id);
  if (rstar && *rstar < 0)
    throw ConfigError("r* must be nonnegative");
}

namespace
{

int dual_degree(const RunConfig& c, int r)
{
  if (c.rstar)
    return *c.rstar;
  return select_dual_degree(c.sigma_family, r, c.k, c.n, c.case_id == "coexact-only", c.dual_family);
}

}  // namespace

SingleRun run_single(const RunConfig& config, int r, int N)
{
  const StablePair pair{config.n, config.k, r, config.sigma_family, config.u_family};
  pair.validate();
  const ManufacturedCase mc = manufactured_case(config.n, config.k, config.case_id);
  const ExactSolution exact = exact_solution(mc);

  std::optional<DualLocalSpaces> spaces;
  int quad = config.quad_degree;
  if (config.postprocess) {
    spaces = dual_spaces(config.n, config.k, dual_degree(config, r), Family::Trimmed, config.dual_family);
    if (quad == 0)
      quad = std::max({2 * (spaces->rstar + 2) + 2, 2 * (r + 3) + 2, 12});
  }

  const Mesh mesh = build_structured_mesh(config.n, N, {config.diagonal});
  const Discretization disc(mesh, pair, quad);
  const SolveOptions opts{config.solver, config.tol, 0};

  SingleRun out;
  DiscreteSolution sol;
  if (config.mode == Mode::Standard) {
    const StandardSystem sys = assemble_standard(disc, exact.f);
    sol = unpack_standard(sys, solve_sym_indefinite(sys.matrix, sys.rhs, opts, &out.info));
  } else {
    const HybridSystem sys = assemble_hybrid(disc, exact.f);
    if (config.mode == Mode::Hybrid) {
      sol = unpack_hybrid(sys, solve_sym_indefinite(sys.full_matrix(), sys.full_rhs(), opts, &out.info));
    } else {
      const CondensedSystem cs = condense(sys);
      const Eigen::VectorXd y = solve_sym_indefinite(cs.S, cs.rhs, opts, &out.info);
      sol = unpack_hybrid(sys, recover_local(cs, y), y);
      out.dofs = dof_report(mesh, pair);
    }
  }

  std::optional<PostprocessedFields> pp;
  if (spaces)
    pp = postprocess(disc, sol, exact.f, *spaces);
  out.record = compute_errors(disc, exact, sol, pp ? &*pp : nullptr);
  return out;
}

RunResult run_study(const RunConfig& config, std::ostream* log)
{
  config.validate();
  RunResult res;
  for (int r : config.r_list) {
    for (int N : config.N_list) {
      const auto t0 = std::chrono::steady_clock::now();
      SingleRun one = run_single(config, r, N);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (log) {
        *log << fmt::format("n={} k={} r={} N={} mode={} residual={:.2e} time={:.2f}s\n", config.n, config.k, r, N,
                            to_string(config.mode), one.info.residual, secs);
        if (one.dofs)
          *log << *one.dofs;
      }
      res.records.push_back(one.record);
      if (one.dofs)
        res.dof_reports.push_back(*one.dofs);
      res.solve_info.push_back(one.info);
    }
  }
  rate_table(res.records);
  return res;
}

}  // namespace feec
