#include "feec/combinatorics.hpp"

#include <array>
#include <mutex>

namespace feec
{

long long binomial(int a, int b)
{
  if (b < 0 || a < 0 || b > a)
    return 0;
  long long r = 1;
  for (int i = 1; i <= b; ++i)
    r = r * (a - b + i) / i;
  return r;
}

namespace
{

struct SubsetTable
{
  // lists[n][k], positions[n][mask]
  std::array<std::array<std::vector<unsigned>, max_ambient_dim + 1>, max_ambient_dim + 1> lists;
  std::array<std::vector<int>, max_ambient_dim + 1> positions;

  SubsetTable()
  {
    for (int n = 0; n <= max_ambient_dim; ++n) {
      positions[n].assign(1u << n, -1);
      for (int k = 0; k <= n; ++k) {
        // lexicographic order of sorted tuples: recursive generation
        std::vector<unsigned> out;
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i)
          idx[i] = i;
        if (k == 0) {
          out.push_back(0u);
        } else {
          while (true) {
            unsigned m = 0;
            for (int i : idx)
              m |= 1u << i;
            out.push_back(m);
            int p = k - 1;
            while (p >= 0 && idx[p] == n - k + p)
              --p;
            if (p < 0)
              break;
            ++idx[p];
            for (int q = p + 1; q < k; ++q)
              idx[q] = idx[q - 1] + 1;
          }
        }
        for (std::size_t i = 0; i < out.size(); ++i)
          positions[n][out[i]] = static_cast<int>(i);
        lists[n][k] = std::move(out);
      }
    }
  }
};

const SubsetTable& table()
{
  static const SubsetTable t;
  return t;
}

}  // namespace

const std::vector<unsigned>& subsets(int n, int k)
{
  static const std::vector<unsigned> empty;
  if (n < 0 || n > max_ambient_dim || k < 0 || k > n)
    return empty;
  return table().lists[n][k];
}

int subset_position(int n, unsigned mask) { return table().positions[n][mask]; }

int shuffle_sign(unsigned a, unsigned b)
{
  if (a & b)
    return 0;
  // count pairs (i in a, j in b) with i > j
  int inversions = 0;
  for (unsigned bb = b; bb; bb &= bb - 1) {
    int j = std::countr_zero(bb);
    inversions += std::popcount(a >> (j + 1));
  }
  return (inversions % 2) ? -1 : 1;
}

std::vector<int> mask_indices(unsigned mask)
{
  std::vector<int> out;
  for (unsigned m = mask; m; m &= m - 1)
    out.push_back(std::countr_zero(m));
  return out;
}

}  // namespace feec
