// Convergence studies: mesh, spaces, assembly, optional condensation, solve, recovery, optional
// postprocessing and error evaluation for a list of degrees and refinement levels.

#pragma once

#include "feec/condense.hpp"
#include "feec/harness.hpp"
#include "feec/mesh.hpp"
#include "feec/solve.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace feec
{

enum class Mode
{
  Standard,
  Hybrid,
  HybridCondense
};

std::string to_string(Mode m);
/// Accepts "standard", "hybrid" and "hybrid+condense"; throws ConfigError otherwise.
Mode mode_from_string(const std::string& s);

struct RunConfig
{
  int n = 2;
  int k = 1;
  Family u_family = Family::Trimmed;
  Family sigma_family = Family::Trimmed;
  std::vector<int> r_list{0};
  std::vector<int> N_list{1, 2, 4};
  Mode mode = Mode::HybridCondense;
  bool postprocess = false;
  std::optional<int> rstar;            ///< overrides the selected dual degree
  Family dual_family = Family::Trimmed;
  std::string case_id = "full";
  double tol = 1e-10;
  SolverKind solver = SolverKind::Direct;
  int quad_degree = 0;                 ///< 0: max(2 (r* + 2) + 2, 2 (r + 3) + 2, 12)
  Diagonal diagonal = Diagonal::AntiDiagonal;

  /// Throws ConfigError on unstable pairs, unknown cases and non-doubling level lists.
  void validate() const;
};

struct RunResult
{
  std::vector<ErrorRecord> records;       ///< ordered by r, then N; rates filled
  std::vector<DofReport> dof_reports;     ///< one per record when condensing
  std::vector<SolveInfo> solve_info;      ///< one per record
};

/// One discretization and solve. The returned solution refers to nothing outside the result.
struct SingleRun
{
  ErrorRecord record;
  std::optional<DofReport> dofs;
  SolveInfo info;
};
SingleRun run_single(const RunConfig& config, int r, int N);

/// Runs every (r, N) of the configuration in order and fills the rates. Progress lines go to log.
RunResult run_study(const RunConfig& config, std::ostream* log = nullptr);

}  // namespace feec
