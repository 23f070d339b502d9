// Structured simplicial meshes of the unit square and unit cube.
//
// Every entity is stored as its tuple of global vertex ids in ascending order, which is
// also its orientation. Cells list their vertices ascending, so local vertex i of a cell
// is its i-th smallest global vertex and local facet i is the facet opposite local vertex i.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace feec
{

/// Splitting of each square for n = 2.
enum class Diagonal
{
  AntiDiagonal,  ///< cut from (x_i, y_{j+1}) to (x_{i+1}, y_j)
  MainDiagonal   ///< cut from (x_i, y_j) to (x_{i+1}, y_{j+1}); the 2D Kuhn split
};

struct MeshOptions
{
  Diagonal diagonal = Diagonal::AntiDiagonal;
};

struct Incidence
{
  int cell = -1;
  int local_facet = -1;
};

class Mesh
{
public:
  int n = 0;
  int N = 0;
  std::vector<std::array<int, 3>> lattice;    ///< integer vertex coordinates in 0..N
  std::vector<std::array<double, 3>> coords;  ///< lattice / N
  /// entities[d][e] = ascending vertex ids (first d+1 entries meaningful)
  std::array<std::vector<std::array<int, 4>>, 4> entities;
  /// cell_entity[c][mask] = id of the sub-simplex spanned by local vertices in mask
  std::vector<std::vector<int>> cell_entity;
  std::vector<std::vector<Incidence>> facet_cells;  ///< per facet: one or two incidences
  std::vector<char> facet_boundary;
  std::vector<double> h;  ///< diameter of each cell
  double hmax = 0.0;
  std::vector<int> cell_class;                      ///< index into class_jacobian
  std::vector<std::array<int, 9>> class_jacobian;   ///< N * (v_j - v_0) columns, row-major n x n

  int num_cells() const { return static_cast<int>(entities[n].size()); }
  int num_facets() const { return static_cast<int>(entities[n - 1].size()); }
  int num_entities(int d) const { return static_cast<int>(entities[d].size()); }
  int num_classes() const { return static_cast<int>(class_jacobian.size()); }
  const std::array<int, 4>& cell_vertices(int c) const { return entities[n][c]; }
  int facet_of(int cell, int local_facet) const;
  double cell_volume(int c) const;
  /// Inradius of a cell (used for shape-regularity checks).
  double inradius(int c) const;
  /// Outward unit normal of a cell on one of its facets.
  std::vector<double> outward_normal(int cell, int local_facet) const;
};

/// n in {2, 3}, N >= 1; throws ConfigError otherwise.
Mesh build_structured_mesh(int n, int N, MeshOptions options = {});

struct SkeletonIncidence
{
  int cell = -1;
  int local_facet = -1;
  std::vector<double> normal;  ///< outward unit normal from `cell`
};

struct SkeletonFacet
{
  int facet = -1;
  bool boundary = false;
  std::vector<SkeletonIncidence> incidences;
};

/// Facets with both one-sided incidences exposed.
std::vector<SkeletonFacet> skeleton(const Mesh& mesh);

/// Plain-text entity tables (debugging aid).
void dump_mesh(std::ostream& os, const Mesh& mesh);

}  // namespace feec
