#include "feec/basis.hpp"

#include <map>
#include <utility>

namespace feec
{

std::vector<Monomial> Monomial::all(int m, int r, bool homogeneous)
{
  std::vector<Monomial> out;
  if (r < 0)
    return out;
  // graded lexicographic enumeration
  for (int d = homogeneous ? r : 0; d <= r; ++d) {
    Monomial mono;
    std::vector<int> e(m, 0);
    if (m == 0) {
      if (d == 0)
        out.push_back(mono);
      continue;
    }
    // enumerate compositions of d into m parts in descending lexicographic order
    e[0] = d;
    while (true) {
      Monomial x;
      for (int i = 0; i < m; ++i)
        x.e[i] = e[i];
      out.push_back(x);
      // next composition
      int i = m - 2;
      while (i >= 0 && e[i] == 0)
        --i;
      if (i < 0)
        break;
      --e[i];
      int rest = 0;
      for (int j = i + 1; j < m; ++j)
        rest += e[j];
      for (int j = i + 1; j < m; ++j)
        e[j] = 0;
      e[i + 1] = rest + 1;
    }
  }
  return out;
}

std::string to_string(Family f) { return f == Family::Full ? "full" : "trimmed"; }

Family family_from_string(const std::string& s)
{
  if (s == "full" || s == "P" || s == "+")
    return Family::Full;
  if (s == "trimmed" || s == "P-" || s == "-")
    return Family::Trimmed;
  throw ConfigError("unknown family '" + s + "' (expected full or trimmed)");
}

long long dim_full(int r, int k, int n)
{
  if (r < 0)
    return 0;
  return binomial(n, k) * binomial(r + n, n);
}

long long dim_trimmed(int r, int k, int n)
{
  if (r < 1)
    return 0;
  return binomial(r + k - 1, k) * binomial(n + r, n - k);
}

long long dim_full_vanishing_trace(int r, int k, int n)
{
  if (r < 0)
    return 0;
  if (k == n)
    return binomial(r + n, n);  // n-forms have no trace; also covers r = 0
  return binomial(r - 1, n - k) * binomial(r + k, k);
}

long long dim_trimmed_vanishing_trace(int r, int k, int n)
{
  if (r < 1)
    return 0;
  return binomial(n, k) * binomial(r + k - 1, n);
}

RationalMatrix coefficient_matrix(const std::vector<PolyForm<Rational>>& forms)
{
  std::map<std::pair<std::size_t, std::uint32_t>, int> column;
  for (const auto& f : forms)
    for (std::size_t c = 0; c < f.ncomp(); ++c)
      for (const auto& [key, v] : f.comp(c).terms())
        column.try_emplace({c, key}, 0);
  int next = 0;
  for (auto& [key, idx] : column)
    idx = next++;
  RationalMatrix m(static_cast<int>(forms.size()), next);
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (std::size_t c = 0; c < forms[i].ncomp(); ++c)
      for (const auto& [key, v] : forms[i].comp(c).terms())
        m(static_cast<int>(i), column.at({c, key})) = v;
  return m;
}

namespace
{

/// Row-echelon reduction in place; returns the pivot columns.
std::vector<int> echelon(RationalMatrix& m)
{
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int piv = -1;
    for (int r = row; r < m.rows; ++r)
      if (m(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0)
      continue;
    if (piv != row)
      for (int j = 0; j < m.cols; ++j)
        std::swap(m(piv, j), m(row, j));
    for (int r = row + 1; r < m.rows; ++r) {
      if (m(r, col) == 0)
        continue;
      Rational f = m(r, col) / m(row, col);
      for (int j = col; j < m.cols; ++j)
        if (m(row, j) != 0)
          m(r, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

int rank(RationalMatrix m) { return static_cast<int>(echelon(m).size()); }

RationalMatrix inverse(const RationalMatrix& m)
{
  if (m.rows != m.cols)
    throw Error("inverse: matrix is not square");
  const int n = m.rows;
  RationalMatrix a = m;
  RationalMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    inv(i, i) = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (a(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0)
      throw Error("inverse: singular matrix");
    if (piv != c)
      for (int j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(c, j));
        std::swap(inv(piv, j), inv(c, j));
      }
    Rational d = a(c, c);
    for (int j = 0; j < n; ++j) {
      a(c, j) /= d;
      inv(c, j) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0)
        continue;
      Rational f = a(r, c);
      for (int j = 0; j < n; ++j) {
        if (a(c, j) != 0)
          a(r, j) -= f * a(c, j);
        if (inv(c, j) != 0)
          inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

int exact_rank(const std::vector<PolyForm<Rational>>& forms)
{
  if (forms.empty())
    return 0;
  return rank(coefficient_matrix(forms));
}

std::vector<int> independent_subset(const std::vector<PolyForm<Rational>>& forms)
{
  // Eliminate the transpose: pivot columns of the (coefficients x forms) matrix are the
  // first independent forms in order.
  std::vector<int> out;
  if (forms.empty())
    return out;
  RationalMatrix m = coefficient_matrix(forms);
  RationalMatrix t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      t(j, i) = m(i, j);
  return echelon(t);
}

bool in_span(const std::vector<PolyForm<Rational>>& forms, const std::vector<PolyForm<Rational>>& target)
{
  std::vector<PolyForm<Rational>> all = target;
  const int r0 = exact_rank(target);
  all.insert(all.end(), forms.begin(), forms.end());
  return exact_rank(all) == r0;
}

FormBasis build_basis(Family family, int r, int k, int n)
{
  if (n < 0 || n > max_ambient_dim)
    throw ConfigError("build_basis: dimension out of range");
  if (k < 0 || k > n)
    throw ConfigError("build_basis: form degree outside 0..n");
  if (r < 0 || r > max_basis_degree)
    throw ConfigError("build_basis: unsupported polynomial degree " + std::to_string(r));
  if (family == Family::Trimmed && r < 1)
    throw ConfigError("build_basis: trimmed family requires degree >= 1");

  FormBasis basis{family, r, k, n, {}};
  const int full_degree = family == Family::Full ? r : r - 1;
  for (const auto& mono : Monomial::all(n, full_degree))
    for (unsigned mask : subsets(n, k))
      basis.elements.push_back(PolyForm<Rational>::monomial(n, mono, mask));
  if (family == Family::Full)
    return basis;

  std::vector<PolyForm<Rational>> spanning = basis.elements;
  if (k + 1 <= n)
    for (const auto& mono : Monomial::all(n, r - 1))
      for (unsigned mask : subsets(n, k + 1))
        spanning.push_back(koszul(PolyForm<Rational>::monomial(n, mono, mask)));
  basis.elements.clear();
  for (int i : independent_subset(spanning))
    basis.elements.push_back(spanning[i]);
  return basis;
}

void reference_subsimplex_chart(int n, unsigned vertex_mask, std::vector<Rational>& b, std::vector<Rational>& A)
{
  // Reference vertices: v_0 = 0, v_i = e_i.
  auto verts = mask_indices(vertex_mask);
  const int m = static_cast<int>(verts.size()) - 1;
  b.assign(n, Rational(0));
  A.assign(static_cast<std::size_t>(n) * std::max(m, 0), Rational(0));
  auto coord = [&](int v, int i) -> Rational { return (v > 0 && v - 1 == i) ? Rational(1) : Rational(0); };
  for (int i = 0; i < n; ++i)
    b[i] = coord(verts[0], i);
  for (int j = 1; j <= m; ++j)
    for (int i = 0; i < n; ++i)
      A[i * m + (j - 1)] = coord(verts[j], i) - coord(verts[0], i);
}

void reference_facet_chart(int n, int i, std::vector<Rational>& b, std::vector<Rational>& A)
{
  reference_subsimplex_chart(n, full_mask(n + 1) & ~(1u << i), b, A);
}

int vanishing_trace_dimension(const FormBasis& basis)
{
  const int n = basis.n;
  const int nb = static_cast<int>(basis.elements.size());
  if (nb == 0)
    return 0;
  if (basis.k == n)
    return nb;  // traces of n-forms vanish identically
  // Stack the facet traces of each basis element as one long coefficient row.
  std::vector<std::vector<PolyForm<Rational>>> traces(n + 1);
  for (int f = 0; f <= n; ++f) {
    std::vector<Rational> b, A;
    reference_facet_chart(n, f, b, A);
    for (const auto& e : basis.elements)
      traces[f].push_back(pullback(e, b, A, n - 1));
  }
  std::vector<RationalMatrix> blocks;
  int total_cols = 0;
  for (int f = 0; f <= n; ++f) {
    blocks.push_back(coefficient_matrix(traces[f]));
    total_cols += blocks.back().cols;
  }
  RationalMatrix stacked(nb, total_cols);
  int off = 0;
  for (const auto& blk : blocks) {
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < blk.cols; ++j)
        stacked(i, off + j) = blk(i, j);
    off += blk.cols;
  }
  return nb - rank(stacked);
}

}  // namespace feec
