#include "feec/geometry.hpp"

#include "feec/basis.hpp"
#include "feec/errors.hpp"
#include "feec/exterior.hpp"

namespace feec
{

Eigen::MatrixXd compound(const Eigen::MatrixXd& A, int k)
{
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(A.cols());
  std::vector<double> a(static_cast<std::size_t>(n) * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      a[i * m + j] = A(i, j);
  const auto c = compound_matrix(a, n, m, k);
  const int nr = static_cast<int>(binomial(n, k));
  const int nc = static_cast<int>(binomial(m, k));
  Eigen::MatrixXd out(nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j)
      out(i, j) = c[i * nc + j];
  return out;
}

Eigen::MatrixXd contraction_matrix(const Eigen::VectorXd& v, int k)
{
  const int n = static_cast<int>(v.size());
  if (k == 0)
    return Eigen::MatrixXd::Zero(1, 1);
  const std::vector<double> vv(v.data(), v.data() + n);
  const auto& sets = subsets(n, k);
  Eigen::MatrixXd out(binomial(n, k - 1), sets.size());
  for (std::size_t j = 0; j < sets.size(); ++j) {
    AltForm<double> e(n, k);
    e[j] = 1.0;
    const AltForm<double> c = contract(vv, e);
    for (std::size_t i = 0; i < c.size(); ++i)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c[i];
  }
  return out;
}

ClassGeometry class_geometry(const Mesh& mesh, int cls)
{
  const int n = mesh.n;
  ClassGeometry g;
  g.n = n;
  g.J.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g.J(i, j) = static_cast<double>(mesh.class_jacobian[cls][i * n + j]) / mesh.N;
  g.detJ = g.J.determinant();
  if (std::abs(g.detJ) < 1e-300)
    throw Error("class_geometry: degenerate cell");
  g.Jinv = g.J.inverse();

  for (int f = 0; f <= n; ++f) {
    FacetGeometry fg;
    fg.local_facet = f;
    std::vector<Rational> b, A;
    reference_facet_chart(n, f, b, A);
    Eigen::MatrixXd Ah(n, n - 1);
    Eigen::VectorXd bh(n);
    for (int i = 0; i < n; ++i) {
      bh(i) = b[i].get_d();
      for (int j = 0; j < n - 1; ++j)
        Ah(i, j) = A[i * (n - 1) + j].get_d();
    }
    fg.JF = g.J * Ah;
    fg.origin = g.J * bh;
    const Eigen::MatrixXd G = fg.JF.transpose() * fg.JF;
    fg.measure_factor = std::sqrt(G.determinant());
    const Eigen::MatrixXd Ginv = G.inverse();

    // Outward normal: orthogonal to JF, pointing away from the opposite vertex.
    Eigen::FullPivLU<Eigen::MatrixXd> lu(fg.JF.transpose());
    Eigen::VectorXd nv = lu.kernel().col(0).normalized();
    Eigen::VectorXd opposite = Eigen::VectorXd::Zero(n);
    if (f > 0)
      opposite = g.J.col(f - 1);
    if (nv.dot(opposite - fg.origin) > 0)
      nv = -nv;
    fg.normal = nv;

    fg.frame.resize(n + 1);
    fg.normal_frame.resize(n + 1);
    for (int k = 0; k <= n - 1; ++k) {
      const Eigen::MatrixXd Ck = compound(fg.JF, k);  // C(n,k) x C(n-1,k)
      const Eigen::MatrixXd Gk = compound(Ginv, k);
      const Eigen::MatrixXd L = Gk.llt().matrixL();
      fg.frame[k] = L.transpose() * Ck.transpose();
    }
    for (int k = 1; k <= n; ++k)
      fg.normal_frame[k] = fg.frame[k - 1] * contraction_matrix(nv, k);
    g.facets.push_back(std::move(fg));
  }
  return g;
}

}  // namespace feec
