// Error norms of a discrete solution against closed-form fields, convergence rates, and CSV output.
//
// Trace norms use the scaled norm |||w|||^2 = sum_K h_K ||w||^2_{dK} over the disjoint union of cell
// boundaries, so an interior facet contributes once from each side. The projected normal-trace
// columns first project the exact normal trace onto the broken trace space of the cell (L^2 on dK).

#pragma once

#include "feec/assembly.hpp"
#include "feec/manufactured.hpp"
#include "feec/postprocess.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace feec
{

/// Closed-form fields of a solution; empty functions stand for absent fields.
struct ExactSolution
{
  int n = 0;
  int k = 0;
  FormFunction sigma;      ///< (k-1)-form
  FormFunction u;          ///< k-form
  FormFunction rho;        ///< (k+1)-form, d u
  FormFunction delta_rho;  ///< k-form, delta d u
  FormFunction f;          ///< k-form
  double p = 0.0;
};

ExactSolution exact_solution(const ManufacturedCase& mc);

enum class ErrorColumn
{
  Sigma,           ///< ||sigma - sigma_h||
  SigmaTan,        ///< |||sigma^tan - sigmahat^tan|||
  U,               ///< ||u - u_h||
  UTan,            ///< |||u^tan - uhat^tan|||
  UNor,            ///< |||P u^nor - uhat^nor|||
  DU,              ///< ||d(u - u_h)||
  RhoNor,          ///< |||P rho^nor - rhohat^nor|||
  SigmaPost,       ///< ||sigma - delta u*||
  UPost,           ///< ||u - u*||
  RhoPost,         ///< ||du - rho*||
  DeltaDU,         ///< ||delta d(u - u_h)||, broken
  DeltaRhoPost,    ///< ||delta(du - rho*)||
};
constexpr int num_error_columns = 12;

struct ColumnInfo
{
  const char* key;    ///< CSV name
  const char* title;  ///< plain-text header
  bool trace;         ///< scaled trace norm
};
const ColumnInfo& column_info(ErrorColumn c);
/// Columns of the hybrid-trace table and of the postprocessing table, in display order.
const std::vector<ErrorColumn>& trace_table_columns();
const std::vector<ErrorColumn>& postprocess_table_columns();

struct ErrorRecord
{
  int n = 0, k = 0, r = 0;
  Family sigma_family = Family::Trimmed;
  Family u_family = Family::Trimmed;
  int N = 0;
  double h = 0.0;
  int rstar = -1;                                  ///< -1 without postprocessing
  std::array<double, num_error_columns> error;     ///< NaN when the column does not apply
  std::array<double, num_error_columns> rate;      ///< NaN when undefined
  std::array<double, num_error_columns> error_alt; ///< trace columns: cell-boundary evaluation

  ErrorRecord();
  bool has(ErrorColumn c) const;
  double operator[](ErrorColumn c) const { return error[static_cast<int>(c)]; }
  double rate_of(ErrorColumn c) const { return rate[static_cast<int>(c)]; }
};

/// Computes every applicable column. Trace columns are evaluated by a loop over skeleton facets
/// (error) and by a loop over cell boundaries (error_alt). Columns needing hybrid multipliers are NaN
/// for standard solves; postprocessed columns are NaN when pp is null.
ErrorRecord compute_errors(const Discretization& disc, const ExactSolution& exact, const DiscreteSolution& sol,
                           const PostprocessedFields* pp = nullptr);

/// Oriented integral of tr(u - u_h) over each cell boundary (k = n-1 only).
std::vector<double> boundary_trace_integrals(const Discretization& disc, const ExactSolution& exact,
                                             const DiscreteSolution& sol);

/// Fills rates: rate(N) = log2(e(N/2) / e(N)). Records must share (n, k, r, families) and have N doubling
/// from one record to the next; throws ConfigError otherwise.
void rate_table(std::vector<ErrorRecord>& records);

/// One row per record; each column as 3 significant digits, its rate ("---" on the first row of a
/// chain), and a full-precision companion.
void write_csv(std::ostream& os, const std::vector<ErrorRecord>& records);
/// Plain-text table, one row per record, each column followed by its rate.
void write_text_table(std::ostream& os, const std::vector<ErrorRecord>& records, const std::vector<ErrorColumn>& columns);

/// Local L^2 projection of a closed-form field onto a broken space (coefficients per cell).
std::vector<Eigen::VectorXd> project_broken(const Discretization& disc, const SpaceSpec& spec, const FormFunction& g);

}  // namespace feec
