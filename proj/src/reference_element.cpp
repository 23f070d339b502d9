#include "feec/reference_element.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace feec
{

std::vector<int> ReferenceElement::interior_dofs() const
{
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (dofs[i].vertex_mask == full_mask(dim + 1))
      out.push_back(i);
  return out;
}

MomentSpace moment_space(Family family, int degree, int k, int subdim)
{
  if (subdim < k)
    return {Family::Full, -1, 0};
  if (family == Family::Trimmed) {
    const int s = degree + k - subdim - 1;
    return {Family::Full, s, subdim - k};
  }
  const int s = degree + k - subdim;
  return {Family::Trimmed, s >= 1 ? s : -1, subdim - k};
}

namespace
{

ReferenceElement build_reference_element(Family family, int degree, int k, int dim)
{
  ReferenceElement el;
  el.family = family;
  el.degree = degree;
  el.k = k;
  el.dim = dim;
  if (family == Family::Trimmed && degree < 1)
    return el;  // the zero space

  const FormBasis raw = build_basis(family, degree, k, dim);
  const int nb = static_cast<int>(raw.elements.size());

  std::vector<std::vector<Rational>> rows;  // rows[i][j] = dof_i(raw_j)
  for (int d = k; d <= dim; ++d) {
    const MomentSpace ms = moment_space(family, degree, k, d);
    if (ms.degree < 0)
      continue;
    const FormBasis eta = build_basis(ms.family, ms.degree, ms.form_degree, d);
    el.moments[d] = static_cast<int>(eta.elements.size());
    for (unsigned vmask : subsets(dim + 1, d + 1)) {
      std::vector<Rational> b, A;
      reference_subsimplex_chart(dim, vmask, b, A);
      std::vector<PolyForm<Rational>> pulled;
      pulled.reserve(nb);
      for (const auto& phi : raw.elements)
        pulled.push_back(pullback(phi, b, A, d));
      for (int m = 0; m < static_cast<int>(eta.elements.size()); ++m) {
        std::vector<Rational> row(nb);
        for (int j = 0; j < nb; ++j) {
          PolyForm<Rational> top = wedge(pulled[j], eta.elements[m]);
          row[j] = top.comp(0).integrate_reference();
        }
        rows.push_back(std::move(row));
        el.dofs.push_back({vmask, m});
      }
    }
  }
  if (static_cast<int>(rows.size()) != nb)
    throw Error("reference element: degree-of-freedom count " + std::to_string(rows.size()) +
                " differs from space dimension " + std::to_string(nb));

  RationalMatrix D(nb, nb);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j)
      D(i, j) = rows[i][j];
  const RationalMatrix Dinv = inverse(D);
  for (int i = 0; i < nb; ++i) {
    PolyForm<Rational> psi(dim, k);
    for (int j = 0; j < nb; ++j)
      if (Dinv(j, i) != 0)
        psi += Dinv(j, i) * raw.elements[j];
    el.exact.push_back(psi);
    el.basis.push_back(convert<double>(psi));
  }
  return el;
}

}  // namespace

const ReferenceElement& reference_element(Family family, int degree, int k, int dim)
{
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int, int>, std::unique_ptr<ReferenceElement>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(static_cast<int>(family), degree, k, dim);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<ReferenceElement>(build_reference_element(family, degree, k, dim))).first;
  return *it->second;
}

}  // namespace feec
