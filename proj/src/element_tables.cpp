#include "feec/element_tables.hpp"

#include "feec/combinatorics.hpp"
#include "feec/errors.hpp"
#include "feec/quadrature.hpp"

namespace feec
{

int ncomp(int n, int k)
{
  return (k < 0 || k > n) ? 0 : static_cast<int>(binomial(n, k));
}

Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::VectorXd& w, int C)
{
  if (C == 0)
    return Eigen::MatrixXd::Zero(A.cols(), B.cols());
  Eigen::MatrixXd WB = B;
  for (Eigen::Index q = 0; q < w.size(); ++q)
    WB.middleRows(q * C, C) *= w(q);
  return A.transpose() * WB;
}

const ReferenceElement& space_reference(const SpaceSpec& spec, int n)
{
  return reference_element(spec.family, spec.degree, spec.k, n);
}

ElementTables::ElementTables(const Mesh& mesh, int volume_degree, int facet_degree)
    : mesh_(&mesh), volume_degree_(volume_degree), facet_degree_(facet_degree)
{
  const int n = mesh.n;
  const QuadRule& vr = quad_rule(n, volume_degree);
  const QuadRule& fr = quad_rule(n - 1, facet_degree);
  for (int c = 0; c < mesh.num_classes(); ++c) {
    geometry_.push_back(class_geometry(mesh, c));
    const ClassGeometry& g = geometry_.back();
    ClassQuadrature cq;
    cq.points.resize(n, static_cast<Eigen::Index>(vr.size()));
    cq.w.resize(static_cast<Eigen::Index>(vr.size()));
    for (std::size_t q = 0; q < vr.size(); ++q) {
      const auto xh = vr.reference_point(q);
      cq.points.col(q) = g.J * Eigen::Map<const Eigen::VectorXd>(xh.data(), n);
      cq.w(q) = vr.weights[q] * std::abs(g.detJ);
    }
    for (int f = 0; f <= n; ++f) {
      const FacetGeometry& fg = g.facets[f];
      Eigen::MatrixXd P(n, static_cast<Eigen::Index>(fr.size()));
      Eigen::VectorXd w(static_cast<Eigen::Index>(fr.size()));
      for (std::size_t q = 0; q < fr.size(); ++q) {
        const auto sh = fr.reference_point(q);
        P.col(q) = fg.origin + fg.JF * Eigen::Map<const Eigen::VectorXd>(sh.data(), n - 1);
        w(q) = fr.weights[q] * fg.measure_factor;
      }
      cq.facet_points.push_back(P);
      cq.facet_w.push_back(w);
    }
    quadrature_.push_back(std::move(cq));
  }
}

namespace
{

Eigen::MatrixXd tabulate(const std::vector<PolyForm<double>>& forms, const Eigen::MatrixXd& points, int C)
{
  const Eigen::Index nq = points.cols();
  Eigen::MatrixXd out(nq * C, static_cast<Eigen::Index>(forms.size()));
  if (C == 0)
    return out;
  std::vector<double> buf(C);
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (Eigen::Index q = 0; q < nq; ++q) {
      forms[i].evaluate(points.col(q).data(), buf.data());
      for (int c = 0; c < C; ++c)
        out(q * C + c, static_cast<Eigen::Index>(i)) = buf[c];
    }
  return out;
}

/// Applies a per-point linear map (rows x C) to a table with C components per point.
Eigen::MatrixXd apply_pointwise(const Eigen::MatrixXd& map, const Eigen::MatrixXd& table, int C)
{
  const Eigen::Index R = map.rows();
  const Eigen::Index nq = C ? table.rows() / C : 0;
  Eigen::MatrixXd out(nq * R, table.cols());
  for (Eigen::Index q = 0; q < nq; ++q)
    out.middleRows(q * R, R) = map * table.middleRows(q * C, C);
  return out;
}

std::unique_ptr<SpaceTables> build_tables(const Mesh& mesh, const ClassGeometry& g, const ClassQuadrature& cq,
                                          const SpaceSpec& spec)
{
  const int n = mesh.n;
  auto t = std::make_unique<SpaceTables>();
  t->spec = spec;
  t->n = n;
  const int k = spec.form_degree(n);
  t->k = k;
  const ReferenceElement& ref = space_reference(spec, n);
  t->nb = ref.size();

  std::vector<double> Jinv(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      Jinv[i * n + j] = g.Jinv(i, j);
  const std::vector<double> zero(n, 0.0);
  std::vector<PolyForm<double>> dforms, cforms, cdforms;
  for (const auto& psi : ref.basis) {
    PolyForm<double> phi = pullback(psi, zero, Jinv, n);
    if (spec.dual)
      phi = inverse_hodge_star(phi);
    PolyForm<double> dphi = ext_derivative(phi);
    cdforms.push_back(codifferential(dphi));
    cforms.push_back(codifferential(phi));
    dforms.push_back(std::move(dphi));
    t->physical.push_back(std::move(phi));
  }

  VolumeTable& v = t->vol;
  v.nb = t->nb;
  v.k = k;
  v.nq = static_cast<int>(cq.points.cols());
  v.w = cq.w;
  v.points = cq.points;
  v.val = tabulate(t->physical, cq.points, ncomp(n, k));
  v.dval = tabulate(dforms, cq.points, ncomp(n, k + 1));
  v.cod = tabulate(cforms, cq.points, ncomp(n, k - 1));
  v.coddval = tabulate(cdforms, cq.points, ncomp(n, k));

  for (int f = 0; f <= n; ++f) {
    const FacetGeometry& fg = g.facets[f];
    FacetTable ft;
    ft.points = cq.facet_points[f];
    ft.w = cq.facet_w[f];
    ft.nq = static_cast<int>(ft.points.cols());
    const Eigen::MatrixXd vals = tabulate(t->physical, ft.points, ncomp(n, k));
    if (k <= n - 1)
      ft.tr = apply_pointwise(fg.frame[k], vals, ncomp(n, k));
    else
      ft.tr = Eigen::MatrixXd(0, t->nb);
    if (k >= 1)
      ft.nor = apply_pointwise(fg.normal_frame[k], vals, ncomp(n, k));
    else
      ft.nor = Eigen::MatrixXd(0, t->nb);
    t->facets.push_back(std::move(ft));
  }
  return t;
}

}  // namespace

const SpaceTables& ElementTables::get(const SpaceSpec& spec, int cls) const
{
  auto key = std::make_tuple(static_cast<int>(spec.family), spec.degree, spec.k, spec.dual, cls);
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(key);
  if (it == cache_.end())
    it = cache_.emplace(key, build_tables(*mesh_, geometry_[cls], quadrature_[cls], spec)).first;
  return *it->second;
}

}  // namespace feec
