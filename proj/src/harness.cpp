#include "feec/harness.hpp"

#include "feec/errors.hpp"

#include <fmt/format.h>
#include <tbb/parallel_for.h>

#include <cmath>
#include <limits>
#include <memory>
#include <ostream>

namespace feec
{

namespace
{

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

FormFunction wrap(const TrigForm& form)
{
  if (form.comps.empty())
    return {};
  auto shared = std::make_shared<const TrigForm>(form);
  return [shared](const double* x, double* out) { shared->evaluate(x, out); };
}

int idx(ErrorColumn c) { return static_cast<int>(c); }

}  // namespace

ExactSolution exact_solution(const ManufacturedCase& mc)
{
  ExactSolution e;
  e.n = mc.n;
  e.k = mc.k;
  e.u = wrap(mc.u);
  e.f = wrap(mc.f);
  if (mc.k >= 1)
    e.sigma = wrap(mc.sigma);
  if (mc.k <= mc.n - 1) {
    e.rho = wrap(mc.rho);
    e.delta_rho = wrap(mc.delta_rho);
  }
  e.p = mc.p;
  return e;
}

const ColumnInfo& column_info(ErrorColumn c)
{
  static const ColumnInfo table[num_error_columns] = {
      {"sigma", "sigma", false},
      {"sigma_tan", "sigma^tan-sigmahat^tan", true},
      {"u", "u", false},
      {"u_tan", "u^tan-uhat^tan", true},
      {"u_nor", "Pu^nor-uhat^nor", true},
      {"du", "d(u-u_h)", false},
      {"rho_nor", "Prho^nor-rhohat^nor", true},
      {"sigma_post", "sigma-delta u*", false},
      {"u_post", "u-u*", false},
      {"rho_post", "du-rho*", false},
      {"deltad_u", "delta d(u-u_h)", false},
      {"delta_rho_post", "delta(du-rho*)", false},
  };
  return table[idx(c)];
}

const std::vector<ErrorColumn>& trace_table_columns()
{
  static const std::vector<ErrorColumn> cols = {ErrorColumn::Sigma, ErrorColumn::SigmaTan, ErrorColumn::U,
                                                ErrorColumn::UTan,  ErrorColumn::UNor,     ErrorColumn::DU,
                                                ErrorColumn::RhoNor};
  return cols;
}

const std::vector<ErrorColumn>& postprocess_table_columns()
{
  static const std::vector<ErrorColumn> cols = {ErrorColumn::Sigma,     ErrorColumn::SigmaPost, ErrorColumn::U,
                                                ErrorColumn::UPost,     ErrorColumn::DU,        ErrorColumn::RhoPost,
                                                ErrorColumn::DeltaDU,   ErrorColumn::DeltaRhoPost};
  return cols;
}

ErrorRecord::ErrorRecord()
{
  error.fill(nan);
  rate.fill(nan);
  error_alt.fill(nan);
}

bool ErrorRecord::has(ErrorColumn c) const { return !std::isnan(error[idx(c)]); }

namespace
{

/// Exact field sampled at the points of a table (offsets from the cell origin).
Eigen::VectorXd sample(const FormFunction& g, const Eigen::VectorXd& x0, const Eigen::MatrixXd& points, int C)
{
  const Eigen::Index nq = points.cols();
  Eigen::VectorXd out(nq * C);
  Eigen::VectorXd x(x0.size());
  for (Eigen::Index q = 0; q < nq; ++q) {
    x = x0 + points.col(q);
    g(x.data(), out.data() + q * C);
  }
  return out;
}

/// Applies a per-point linear map (frame) to sampled ambient values.
Eigen::VectorXd apply_frame(const Eigen::MatrixXd& frame, const Eigen::VectorXd& ambient, int nq)
{
  const Eigen::Index Ci = frame.cols();
  const Eigen::Index Co = frame.rows();
  Eigen::VectorXd out(nq * Co);
  for (int q = 0; q < nq; ++q)
    out.segment(q * Co, Co) = frame * ambient.segment(q * Ci, Ci);
  return out;
}

double weighted_sq(const Eigen::VectorXd& e, const Eigen::VectorXd& w, int C)
{
  double s = 0.0;
  for (Eigen::Index q = 0; q < w.size(); ++q)
    s += w(q) * e.segment(q * C, C).squaredNorm();
  return s;
}

Eigen::VectorXd pairing(const Eigen::MatrixXd& table, const Eigen::VectorXd& values, const Eigen::VectorXd& w, int C)
{
  Eigen::VectorXd wv = values;
  for (Eigen::Index q = 0; q < w.size(); ++q)
    wv.segment(q * C, C) *= w(q);
  return table.transpose() * wv;
}

/// Volume error ||g - table * coef||^2 on one cell.
double volume_sq(const FormFunction& g, const Eigen::VectorXd& x0, const VolumeTable& vol, const Eigen::MatrixXd& table,
                 const Eigen::VectorXd& coef, int C)
{
  const Eigen::VectorXd e = sample(g, x0, vol.points, C) - table * coef;
  return weighted_sq(e, vol.w, C);
}

/// Boundary trace basis of a cell on one facet: the tr columns of the boundary DOFs.
Eigen::MatrixXd boundary_columns(const FacetTable& ft, const TraceSpace& ts)
{
  Eigen::MatrixXd out(ft.tr.rows(), ts.boundary_size());
  for (int a = 0; a < ts.boundary_size(); ++a)
    out.col(a) = ft.tr.col(ts.boundary_local[a]);
  return out;
}

Eigen::VectorXd cell_trace_coefficients(const TraceSpace& ts, int cell, const Eigen::VectorXd& global)
{
  Eigen::VectorXd c(ts.boundary_size());
  for (int a = 0; a < ts.boundary_size(); ++a)
    c(a) = global(ts.global_dof(cell, a));
  return c;
}

/// One trace quantity on one cell: an exact trace g_f on every local facet (already in the facet
/// frame), the boundary basis per facet, the Gram matrix and the discrete coefficients.
struct CellTrace
{
  std::vector<Eigen::VectorXd> exact;  ///< per local facet
  std::vector<Eigen::MatrixXd> basis;  ///< per local facet
  Eigen::VectorXd coef;                ///< discrete boundary coefficients
  int C = 0;
};

/// ||g||^2_dK, the pairing b = <g, phi_a>_dK, both from the facet values.
void cell_moments(const CellTrace& t, const std::vector<Eigen::VectorXd>& w, double& norm2, Eigen::VectorXd& b)
{
  norm2 = 0.0;
  b = Eigen::VectorXd::Zero(t.coef.size());
  for (std::size_t f = 0; f < t.exact.size(); ++f) {
    norm2 += weighted_sq(t.exact[f], w[f], t.C);
    b += pairing(t.basis[f], t.exact[f], w[f], t.C);
  }
}

struct CellErrors
{
  std::array<double, num_error_columns> vol{};       ///< squared volume errors
  std::array<double, num_error_columns> cellwise{};  ///< squared trace errors via cell expansions
  /// Facet-pointwise squared trace errors per local facet, for the skeleton loop.
  std::array<std::vector<double>, num_error_columns> facet{};
};

}  // namespace

ErrorRecord compute_errors(const Discretization& disc, const ExactSolution& exact, const DiscreteSolution& sol,
                           const PostprocessedFields* pp)
{
  const Mesh& mesh = disc.mesh();
  const int n = disc.n();
  const int k = disc.k();
  if (exact.n != n || exact.k != k)
    throw DimensionMismatch("compute_errors: exact solution does not match the discretization");
  const int nc = mesh.num_cells();
  if (static_cast<int>(sol.u.size()) != nc)
    throw DimensionMismatch("compute_errors: solution has the wrong number of cells");

  const bool want_sigma = disc.has_sigma() && exact.sigma;
  const bool want_rho = disc.has_u_trace() && exact.rho;
  const bool want_drho = disc.has_u_trace() && exact.delta_rho;
  const bool want_sigma_tan = want_sigma && sol.sigmahat.size() > 0;
  const bool want_u_tan = disc.has_u_trace() && sol.uhat.size() > 0;
  const bool want_u_nor = want_sigma && sol.hybrid && !sol.uhat_nor.empty();
  const bool want_rho_nor = want_rho && sol.hybrid && !sol.rhohat_nor.empty();
  const bool post = pp != nullptr;

  std::vector<CellErrors> per_cell(nc);
  tbb::parallel_for(0, nc, [&](int c) {
    const int cls = mesh.cell_class[c];
    const ClassGeometry& geo = disc.tables().geometry(cls);
    const ElementMatrices& em = disc.class_matrices(cls);
    const Eigen::VectorXd x0 = disc.cell_origin(c);
    const double hK = mesh.h[c];
    CellErrors& ce = per_cell[c];
    for (auto& v : ce.facet)
      v.assign(n + 1, 0.0);

    const SpaceTables& tu = disc.tables().get(disc.u_spec(), cls);
    const int Ck = ncomp(n, k);
    ce.vol[idx(ErrorColumn::U)] = volume_sq(exact.u, x0, tu.vol, tu.vol.val, sol.u[c], Ck);
    if (want_rho)
      ce.vol[idx(ErrorColumn::DU)] = volume_sq(exact.rho, x0, tu.vol, tu.vol.dval, sol.u[c], ncomp(n, k + 1));
    if (want_drho)
      ce.vol[idx(ErrorColumn::DeltaDU)] = volume_sq(exact.delta_rho, x0, tu.vol, tu.vol.coddval, sol.u[c], Ck);

    const SpaceTables* ts = nullptr;
    if (want_sigma) {
      ts = &disc.tables().get(disc.sigma_spec(), cls);
      ce.vol[idx(ErrorColumn::Sigma)] = volume_sq(exact.sigma, x0, ts->vol, ts->vol.val, sol.sigma[c], ncomp(n, k - 1));
    }

    if (post) {
      const SpaceTables& du = disc.tables().get(pp->spaces.u, cls);
      ce.vol[idx(ErrorColumn::UPost)] = volume_sq(exact.u, x0, du.vol, du.vol.val, pp->u[c], Ck);
      if (want_sigma)
        ce.vol[idx(ErrorColumn::SigmaPost)] =
            volume_sq(exact.sigma, x0, du.vol, du.vol.cod, pp->u[c], ncomp(n, k - 1));
      if (pp->spaces.has_rho && want_rho) {
        const SpaceTables& dr = disc.tables().get(pp->spaces.rho, cls);
        ce.vol[idx(ErrorColumn::RhoPost)] = volume_sq(exact.rho, x0, dr.vol, dr.vol.val, pp->rho[c], ncomp(n, k + 1));
        if (want_drho)
          ce.vol[idx(ErrorColumn::DeltaRhoPost)] = volume_sq(exact.delta_rho, x0, dr.vol, dr.vol.cod, pp->rho[c], Ck);
      }
    }

    // Trace columns.
    std::vector<Eigen::VectorXd> fw(n + 1);
    for (int f = 0; f <= n; ++f)
      fw[f] = tu.facets[f].w;
    auto facet_exact = [&](const FormFunction& g, int gk, bool normal, int f) {
      const FacetGeometry& fg = geo.facets[f];
      const Eigen::MatrixXd& frame = normal ? fg.normal_frame[gk] : fg.frame[gk];
      const Eigen::VectorXd amb = sample(g, x0, tu.facets[f].points, ncomp(n, gk));
      return apply_frame(frame, amb, tu.facets[f].nq);
    };
    auto make_trace = [&](const FormFunction& g, int gk, bool normal, const SpaceTables& primal, const TraceSpace& space,
                          Eigen::VectorXd coef, int C) {
      CellTrace t;
      t.C = C;
      t.coef = std::move(coef);
      for (int f = 0; f <= n; ++f) {
        t.exact.push_back(facet_exact(g, gk, normal, f));
        t.basis.push_back(boundary_columns(primal.facets[f], space));
      }
      return t;
    };
    // Tangential: pointwise per facet, and ||g||^2 - 2 c.b + c^T G c on the cell boundary.
    auto tangential = [&](ErrorColumn col, const CellTrace& t, const Eigen::MatrixXd& gram) {
      for (int f = 0; f <= n; ++f)
        ce.facet[idx(col)][f] = hK * weighted_sq(t.exact[f] - t.basis[f] * t.coef, fw[f], t.C);
      double g2 = 0.0;
      Eigen::VectorXd b;
      cell_moments(t, fw, g2, b);
      ce.cellwise[idx(col)] = hK * std::max(0.0, g2 - 2.0 * t.coef.dot(b) + t.coef.dot(gram * t.coef));
    };
    // Projected normal: c = G^{-1} b, then pointwise per facet and (c - chat)^T G (c - chat).
    auto projected = [&](ErrorColumn col, const CellTrace& t, const Eigen::MatrixXd& gram) {
      double g2 = 0.0;
      Eigen::VectorXd b;
      cell_moments(t, fw, g2, b);
      const Eigen::VectorXd proj = gram.ldlt().solve(b);
      const Eigen::VectorXd diff = proj - t.coef;
      for (int f = 0; f <= n; ++f)
        ce.facet[idx(col)][f] = hK * weighted_sq(t.basis[f] * diff, fw[f], t.C);
      ce.cellwise[idx(col)] = hK * std::max(0.0, diff.dot(gram * diff));
    };

    if (want_sigma_tan)
      tangential(ErrorColumn::SigmaTan,
                 make_trace(exact.sigma, k - 1, false, *ts, disc.sigma_trace(),
                            cell_trace_coefficients(disc.sigma_trace(), c, sol.sigmahat), ncomp(n - 1, k - 1)),
                 em.gram_sigma);
    if (want_u_tan)
      tangential(ErrorColumn::UTan,
                 make_trace(exact.u, k, false, tu, disc.u_trace(), cell_trace_coefficients(disc.u_trace(), c, sol.uhat),
                            ncomp(n - 1, k)),
                 em.gram_u);
    if (want_u_nor)
      projected(ErrorColumn::UNor,
                make_trace(exact.u, k, true, *ts, disc.sigma_trace(), sol.uhat_nor[c], ncomp(n - 1, k - 1)),
                em.gram_sigma);
    if (want_rho_nor)
      projected(ErrorColumn::RhoNor,
                make_trace(exact.rho, k + 1, true, tu, disc.u_trace(), sol.rhohat_nor[c], ncomp(n - 1, k)), em.gram_u);
  });

  ErrorRecord rec;
  rec.n = n;
  rec.k = k;
  rec.r = disc.pair().r;
  rec.sigma_family = disc.pair().sigma_family;
  rec.u_family = disc.pair().u_family;
  rec.N = mesh.N;
  rec.h = mesh.hmax;
  rec.rstar = post ? pp->spaces.rstar : -1;

  auto present = [&](ErrorColumn c) {
    switch (c) {
    case ErrorColumn::Sigma: return want_sigma;
    case ErrorColumn::SigmaTan: return want_sigma_tan;
    case ErrorColumn::U: return true;
    case ErrorColumn::UTan: return want_u_tan;
    case ErrorColumn::UNor: return want_u_nor;
    case ErrorColumn::DU: return want_rho;
    case ErrorColumn::RhoNor: return want_rho_nor;
    case ErrorColumn::SigmaPost: return post && want_sigma;
    case ErrorColumn::UPost: return post;
    case ErrorColumn::RhoPost: return post && pp->spaces.has_rho && want_rho;
    case ErrorColumn::DeltaDU: return want_drho;
    case ErrorColumn::DeltaRhoPost: return post && pp->spaces.has_rho && want_drho;
    }
    return false;
  };

  // Skeleton loop: every facet, each one-sided incidence.
  std::vector<double> skeleton_sum(num_error_columns, 0.0);
  for (int f = 0; f < mesh.num_facets(); ++f)
    for (const Incidence& inc : mesh.facet_cells[f])
      for (int col = 0; col < num_error_columns; ++col)
        skeleton_sum[col] += per_cell[inc.cell].facet[col][inc.local_facet];

  for (int col = 0; col < num_error_columns; ++col) {
    const auto column = static_cast<ErrorColumn>(col);
    if (!present(column))
      continue;
    if (column_info(column).trace) {
      double cellwise = 0.0;
      for (const CellErrors& ce : per_cell)
        cellwise += ce.cellwise[col];
      rec.error[col] = std::sqrt(std::max(skeleton_sum[col], 0.0));
      rec.error_alt[col] = std::sqrt(std::max(cellwise, 0.0));
    } else {
      double s = 0.0;
      for (const CellErrors& ce : per_cell)
        s += ce.vol[col];
      // rules with negative weights can leave a roundoff-sized negative sum for an exact field
      rec.error[col] = std::sqrt(std::max(s, 0.0));
    }
  }
  return rec;
}

std::vector<double> boundary_trace_integrals(const Discretization& disc, const ExactSolution& exact,
                                             const DiscreteSolution& sol)
{
  const int n = disc.n();
  const int k = disc.k();
  if (k != n - 1)
    throw ConfigError("boundary_trace_integrals: requires k = n-1");
  const Mesh& mesh = disc.mesh();
  std::vector<double> out(mesh.num_cells(), 0.0);
  tbb::parallel_for(0, mesh.num_cells(), [&](int c) {
    const int cls = mesh.cell_class[c];
    const ClassGeometry& geo = disc.tables().geometry(cls);
    const SpaceTables& tu = disc.tables().get(disc.u_spec(), cls);
    const Eigen::VectorXd x0 = disc.cell_origin(c);
    double total = 0.0;
    for (int f = 0; f <= n; ++f) {
      const FacetGeometry& fg = geo.facets[f];
      const FacetTable& ft = tu.facets[f];
      // Sign of the facet frame against the orientation induced by the outward normal.
      const double s = fg.normal_frame[n](0, 0);
      const Eigen::VectorXd amb = sample(exact.u, x0, ft.points, ncomp(n, k));
      const Eigen::VectorXd e = apply_frame(fg.frame[k], amb, ft.nq) - ft.tr * sol.u[c];
      total += s * ft.w.dot(e);
    }
    out[c] = total;
  });
  return out;
}

void rate_table(std::vector<ErrorRecord>& records)
{
  auto same_chain = [](const ErrorRecord& a, const ErrorRecord& b) {
    return a.n == b.n && a.k == b.k && a.r == b.r && a.sigma_family == b.sigma_family && a.u_family == b.u_family &&
           a.rstar == b.rstar;
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    ErrorRecord& cur = records[i];
    cur.rate.fill(nan);
    if (i == 0 || !same_chain(records[i - 1], cur))
      continue;
    const ErrorRecord& prev = records[i - 1];
    if (cur.N != 2 * prev.N)
      throw ConfigError(fmt::format("rate_table: N = {} follows N = {}; refinement levels must double", cur.N, prev.N));
    for (int col = 0; col < num_error_columns; ++col) {
      const double a = prev.error[col];
      const double b = cur.error[col];
      if (!std::isnan(a) && !std::isnan(b) && a > 0.0 && b > 0.0)
        cur.rate[col] = std::log2(a / b);
    }
  }
}

namespace
{

std::string sig3(double v) { return std::isnan(v) ? "" : fmt::format("{:.2e}", v); }

std::string rate_text(const ErrorRecord& r, int col)
{
  if (std::isnan(r.error[col]))
    return "";
  return std::isnan(r.rate[col]) ? "---" : fmt::format("{:.2f}", r.rate[col]);
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<ErrorRecord>& records)
{
  os << "n,k,r,sigma_family,u_family,N,h,rstar";
  for (int col = 0; col < num_error_columns; ++col) {
    const char* key = column_info(static_cast<ErrorColumn>(col)).key;
    os << ',' << key << ',' << key << "_rate," << key << "_full";
  }
  os << '\n';
  for (const ErrorRecord& r : records) {
    os << fmt::format("{},{},{},{},{},{},{:.17g},{}", r.n, r.k, r.r, to_string(r.sigma_family), to_string(r.u_family),
                      r.N, r.h, r.rstar >= 0 ? std::to_string(r.rstar) : std::string());
    for (int col = 0; col < num_error_columns; ++col) {
      const double e = r.error[col];
      os << ',' << sig3(e) << ',' << rate_text(r, col) << ','
         << (std::isnan(e) ? std::string() : fmt::format("{:.17g}", e));
    }
    os << '\n';
  }
}

void write_text_table(std::ostream& os, const std::vector<ErrorRecord>& records, const std::vector<ErrorColumn>& columns)
{
  std::vector<ErrorColumn> shown;
  for (ErrorColumn c : columns)
    for (const ErrorRecord& r : records)
      if (r.has(c)) {
        shown.push_back(c);
        break;
      }
  std::string header = fmt::format("{:>3} {:>4}", "r", "N");
  for (ErrorColumn c : shown)
    header += fmt::format(" | {:>22}", column_info(c).title);
  os << header << '\n' << std::string(header.size(), '-') << '\n';
  for (const ErrorRecord& r : records) {
    std::string line = fmt::format("{:>3} {:>4}", r.r, r.N);
    for (ErrorColumn c : shown) {
      const int col = idx(c);
      line += fmt::format(" | {:>14} {:>7}", sig3(r.error[col]), rate_text(r, col));
    }
    os << line << '\n';
  }
}

std::vector<Eigen::VectorXd> project_broken(const Discretization& disc, const SpaceSpec& spec, const FormFunction& g)
{
  const Mesh& mesh = disc.mesh();
  std::vector<Eigen::LDLT<Eigen::MatrixXd>> mass(mesh.num_classes());
  for (int cls = 0; cls < mesh.num_classes(); ++cls) {
    const SpaceTables& t = disc.tables().get(spec, cls);
    mass[cls].compute(weighted_gram(t.vol.val, t.vol.val, t.vol.w, ncomp(disc.n(), t.k)));
  }
  std::vector<Eigen::VectorXd> out(mesh.num_cells());
  tbb::parallel_for(0, mesh.num_cells(), [&](int c) {
    const int cls = mesh.cell_class[c];
    out[c] = mass[cls].solve(disc.load(c, disc.tables().get(spec, cls), g));
  });
  return out;
}

}  // namespace feec
