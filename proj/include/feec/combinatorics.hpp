// Index-set combinatorics shared by the exterior algebra and the polynomial layer.
//
// An index set {i1 < ... < ik} of {0, ..., n-1} is stored as a bitmask. The
// k-subsets of a given n are enumerated in lexicographic order of their sorted
// index tuples, which fixes the component order of every dense form vector.

#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace feec
{

constexpr int max_ambient_dim = 4;

/// Binomial coefficient; zero outside 0 <= b <= a.
long long binomial(int a, int b);

/// k-subsets of {0..n-1} in lexicographic order of sorted index tuples.
const std::vector<unsigned>& subsets(int n, int k);

/// Position of `mask` inside subsets(n, popcount(mask)).
int subset_position(int n, unsigned mask);

inline int popcount(unsigned mask) { return std::popcount(mask); }

/// Sign of the shuffle that sorts the concatenation (a, b); 0 when a and b overlap.
int shuffle_sign(unsigned a, unsigned b);

/// Number of indices in `mask` strictly below `i`.
inline int rank_below(unsigned mask, int i) { return std::popcount(mask & ((1u << i) - 1u)); }

/// Sorted indices of a bitmask.
std::vector<int> mask_indices(unsigned mask);

inline unsigned full_mask(int n) { return (1u << n) - 1u; }

}  // namespace feec
