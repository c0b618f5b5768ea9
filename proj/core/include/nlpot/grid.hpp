#pragma once

// Planar grids, domains, and the lattice wide stencil: for every interior node and
// every lattice direction v, the two arms x +- v h, cut short at the boundary.  The
// directional second difference along v is D_v = b_v - a_v u(x), with b_v linear in the
// neighbours, so schemes built from the D_v are monotone.

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace nlpot {

struct Domain {
  enum class Kind { Rectangle, Disk, Annulus };
  Kind kind = Kind::Rectangle;
  // rectangle, or bounding box of the round domains
  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  double cx = 0, cy = 0, r_in = 0, r_out = 1;

  static Domain rectangle(double x0, double x1, double y0, double y1);
  static Domain disk(double cx, double cy, double r);
  static Domain annulus(double cx, double cy, double r_in, double r_out);

  bool inside(double x, double y) const;  // open domain
  // first t in (0, 1] with (x, y) + t (dx, dy) on the boundary, or 2 if the segment stays inside
  double exit_fraction(double x, double y, double dx, double dy) const;
  std::string str() const;
};

enum class NodeKind : std::uint8_t { Exterior = 0, Interior = 1, Boundary = 2 };

using PlaneFunction = std::function<double(double, double)>;

struct GridField {
  int nx = 0, ny = 0;
  double x0 = 0, y0 = 0, h = 0;
  Domain domain;
  std::vector<double> values;
  std::vector<NodeKind> kind;
  PlaneFunction boundary;  // Dirichlet data, also used at arm/boundary crossings

  int index(int i, int j) const { return j * nx + i; }
  double x(int i) const { return x0 + i * h; }
  double y(int j) const { return y0 + j * h; }
  double& operator()(int i, int j) { return values[index(i, j)]; }
  double operator()(int i, int j) const { return values[index(i, j)]; }
  std::size_t size() const { return values.size(); }
  int interior_count() const;
};

// n nodes across the longer side of the domain's bounding box.  Rectangle edge nodes
// are boundary nodes; for round domains nodes outside but within one cell are.
GridField make_grid(const Domain& d, int n);
// values from the plane function at every non-exterior node; boundary closure set to f
GridField sample(const GridField& geometry, const PlaneFunction& f, bool set_boundary = true);

struct LatticeDirection {
  int a = 0, b = 0;
  int perp = -1;  // index of the orthogonal direction
};
// primitive lattice directions in a half plane, ordered by angle; d in {4, 8, 16, 32}
std::vector<LatticeDirection> lattice_directions(int d);

struct Arm {
  int node = -1;  // neighbour index, or -1 for a boundary crossing
  double len = 0.0;
  double bx = 0.0, by = 0.0;  // crossing point
};

struct Stencil {
  std::vector<LatticeDirection> dirs;
  std::vector<int> nodes;  // interior nodes in sweep order
  // arms[(k * dirs.size() + v) * 2 + side] for nodes[k]
  std::vector<Arm> arms;
  std::vector<bool> full;  // no crossing arm at nodes[k]

  std::size_t nd() const { return dirs.size(); }
  const Arm& arm(std::size_t k, std::size_t v, int side) const { return arms[(k * dirs.size() + v) * 2 + side]; }
};

Stencil build_stencil(const GridField& g, int directions);

// Per node, D_v = b[v] - a[v] u_c.  Boundary arms read field.boundary; a field without
// closure can only be evaluated at full nodes.
struct NodeLinear {
  std::vector<double> a, b;
};
void node_linear(const Stencil& s, const GridField& u, std::size_t k, NodeLinear& out);
std::vector<double> directional_differences(const Stencil& s, const GridField& u, std::size_t k);

// ascending approximate eigenvalues at node k: (min_v D_v, max_v D_v)
std::array<double, 2> stencil_hessian_eigenvalues(const Stencil& s, const GridField& u, std::size_t k);

// ---- output -------------------------------------------------------------------

void write_csv(std::ostream& os, const GridField& u);
// 8-bit portable graymap of non-exterior values, min -> black
void write_pgm(std::ostream& os, const GridField& u);

}  // namespace nlpot
