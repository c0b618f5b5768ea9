#include "nlpot/grid.hpp"

#include "nlpot/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

namespace nlpot {

Domain Domain::rectangle(double x0, double x1, double y0, double y1) {
  if (!(x1 > x0 && y1 > y0)) throw InvalidInput("rectangle: empty");
  Domain d;
  d.kind = Kind::Rectangle;
  d.x0 = x0, d.x1 = x1, d.y0 = y0, d.y1 = y1;
  return d;
}

Domain Domain::disk(double cx, double cy, double r) { return annulus(cx, cy, 0.0, r); }

Domain Domain::annulus(double cx, double cy, double r_in, double r_out) {
  if (!(r_out > r_in && r_in >= 0.0)) throw InvalidInput("annulus: need 0 <= r_in < r_out");
  Domain d;
  d.kind = r_in > 0.0 ? Kind::Annulus : Kind::Disk;
  d.cx = cx, d.cy = cy, d.r_in = r_in, d.r_out = r_out;
  d.x0 = cx - r_out, d.x1 = cx + r_out, d.y0 = cy - r_out, d.y1 = cy + r_out;
  return d;
}

bool Domain::inside(double x, double y) const {
  if (kind == Kind::Rectangle) return x > x0 && x < x1 && y > y0 && y < y1;
  double r = std::hypot(x - cx, y - cy);
  return r < r_out && (r_in == 0.0 || r > r_in);
}

namespace {

// smallest t > 0 with |p + t d - c| = r, or +inf
double circle_hit(double px, double py, double dx, double dy, double r) {
  double a = dx * dx + dy * dy, b = 2 * (px * dx + py * dy), c = px * px + py * py - r * r;
  double disc = b * b - 4 * a * c;
  if (disc < 0.0) return std::numeric_limits<double>::infinity();
  double sq = std::sqrt(disc);
  // stable roots
  double q = -0.5 * (b + std::copysign(sq, b));
  double t1 = q / a, t2 = q != 0.0 ? c / q : t1;
  double best = std::numeric_limits<double>::infinity();
  for (double t : {t1, t2})
    if (t > 1e-14 && t < best) best = t;
  return best;
}

}  // namespace

double Domain::exit_fraction(double x, double y, double dx, double dy) const {
  double t = std::numeric_limits<double>::infinity();
  if (kind == Kind::Rectangle) {
    if (dx > 0) t = std::min(t, (x1 - x) / dx);
    if (dx < 0) t = std::min(t, (x0 - x) / dx);
    if (dy > 0) t = std::min(t, (y1 - y) / dy);
    if (dy < 0) t = std::min(t, (y0 - y) / dy);
  } else {
    t = circle_hit(x - cx, y - cy, dx, dy, r_out);
    if (r_in > 0.0) t = std::min(t, circle_hit(x - cx, y - cy, dx, dy, r_in));
  }
  return t < 1.0 - 1e-12 ? t : 2.0;
}

std::string Domain::str() const {
  char buf[160];
  if (kind == Kind::Rectangle)
    std::snprintf(buf, sizeof buf, "rectangle [%g,%g]x[%g,%g]", x0, x1, y0, y1);
  else if (kind == Kind::Disk)
    std::snprintf(buf, sizeof buf, "disk c=(%g,%g) r=%g", cx, cy, r_out);
  else
    std::snprintf(buf, sizeof buf, "annulus c=(%g,%g) %g<r<%g", cx, cy, r_in, r_out);
  return buf;
}

int GridField::interior_count() const {
  return static_cast<int>(std::count(kind.begin(), kind.end(), NodeKind::Interior));
}

GridField make_grid(const Domain& d, int n) {
  if (n < 3) throw InvalidInput("make_grid: need at least 3 nodes per side");
  GridField g;
  g.domain = d;
  const double w = d.x1 - d.x0, hgt = d.y1 - d.y0;
  g.h = std::max(w, hgt) / (n - 1);
  g.nx = static_cast<int>(std::lround(w / g.h)) + 1;
  g.ny = static_cast<int>(std::lround(hgt / g.h)) + 1;
  g.x0 = d.x0;
  g.y0 = d.y0;
  g.values.assign(std::size_t(g.nx) * g.ny, 0.0);
  g.kind.assign(g.values.size(), NodeKind::Exterior);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      NodeKind k;
      if (d.kind == Domain::Kind::Rectangle) {
        bool edge = i == 0 || j == 0 || i == g.nx - 1 || j == g.ny - 1;
        k = edge ? NodeKind::Boundary : NodeKind::Interior;
      } else {
        double r = std::hypot(g.x(i) - d.cx, g.y(j) - d.cy);
        double dist = std::min(std::abs(r - d.r_out), d.r_in > 0 ? std::abs(r - d.r_in) : 1e300);
        if (d.inside(g.x(i), g.y(j)) && dist > 1e-9 * g.h) k = NodeKind::Interior;
        else if (dist <= g.h) k = NodeKind::Boundary;
        else k = NodeKind::Exterior;
      }
      g.kind[g.index(i, j)] = k;
    }
  return g;
}

GridField sample(const GridField& geometry, const PlaneFunction& f, bool set_boundary) {
  GridField g = geometry;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (g.kind[g.index(i, j)] != NodeKind::Exterior) g(i, j) = f(g.x(i), g.y(j));
  if (set_boundary) g.boundary = f;
  return g;
}

std::vector<LatticeDirection> lattice_directions(int d) {
  int max_norm2;
  switch (d) {
    case 4: max_norm2 = 2; break;
    case 8: max_norm2 = 5; break;
    case 16: max_norm2 = 13; break;
    case 32: max_norm2 = 29; break;
    default: throw InvalidInput("lattice_directions: d must be 4, 8, 16 or 32");
  }
  std::vector<LatticeDirection> out;
  for (int a = 0; a <= 6; ++a)
    for (int b = -6; b <= 6; ++b) {
      if (a == 0 && b <= 0) continue;
      if (a * a + b * b > max_norm2 || std::gcd(a, std::abs(b)) != 1) continue;
      out.push_back({a, b, -1});
    }
  std::sort(out.begin(), out.end(),
            [](const auto& p, const auto& q) { return std::atan2(p.b, p.a) < std::atan2(q.b, q.a); });
  for (auto& v : out) {
    int pa = -v.b, pb = v.a;
    if (pa < 0 || (pa == 0 && pb < 0)) pa = -pa, pb = -pb;
    for (std::size_t k = 0; k < out.size(); ++k)
      if (out[k].a == pa && out[k].b == pb) v.perp = static_cast<int>(k);
  }
  return out;
}

Stencil build_stencil(const GridField& g, int directions) {
  Stencil s;
  s.dirs = lattice_directions(directions);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (g.kind[g.index(i, j)] == NodeKind::Interior) s.nodes.push_back(g.index(i, j));
  s.arms.resize(s.nodes.size() * s.nd() * 2);
  s.full.assign(s.nodes.size(), true);
  for (std::size_t k = 0; k < s.nodes.size(); ++k) {
    const int i = s.nodes[k] % g.nx, j = s.nodes[k] / g.nx;
    const double x = g.x(i), y = g.y(j);
    for (std::size_t v = 0; v < s.nd(); ++v) {
      const auto& dir = s.dirs[v];
      const double step = std::hypot(dir.a, dir.b) * g.h;
      for (int side = 0; side < 2; ++side) {
        const int sg = side == 0 ? 1 : -1;
        const double dx = sg * dir.a * g.h, dy = sg * dir.b * g.h;
        Arm& arm = s.arms[(k * s.nd() + v) * 2 + side];
        double t = g.domain.exit_fraction(x, y, dx, dy);
        int ii = i + sg * dir.a, jj = j + sg * dir.b;
        bool on_grid = ii >= 0 && jj >= 0 && ii < g.nx && jj < g.ny && g.kind[g.index(ii, jj)] != NodeKind::Exterior;
        if (t <= 1.0 || !on_grid) {
          if (t > 1.0) throw NumericalFailure("build_stencil: arm left the grid without crossing the boundary");
          arm.node = -1;
          arm.len = t * step;
          arm.bx = x + t * dx;
          arm.by = y + t * dy;
          s.full[k] = false;
        } else {
          arm.node = g.index(ii, jj);
          arm.len = step;
        }
      }
    }
  }
  return s;
}

void node_linear(const Stencil& s, const GridField& u, std::size_t k, NodeLinear& out) {
  out.a.resize(s.nd());
  out.b.resize(s.nd());
  for (std::size_t v = 0; v < s.nd(); ++v) {
    const Arm& p = s.arm(k, v, 0);
    const Arm& m = s.arm(k, v, 1);
    auto val = [&](const Arm& a) {
      if (a.node >= 0) return u.values[a.node];
      if (!u.boundary) throw InvalidInput("node_linear: boundary arm but the field has no boundary data");
      return u.boundary(a.bx, a.by);
    };
    const double l1 = p.len, l2 = m.len;
    const double c1 = 2.0 / (l1 * (l1 + l2)), c2 = 2.0 / (l2 * (l1 + l2));
    out.a[v] = c1 + c2;
    out.b[v] = c1 * val(p) + c2 * val(m);
  }
}

std::vector<double> directional_differences(const Stencil& s, const GridField& u, std::size_t k) {
  NodeLinear nl;
  node_linear(s, u, k, nl);
  std::vector<double> d(s.nd());
  const double uc = u.values[s.nodes[k]];
  for (std::size_t v = 0; v < s.nd(); ++v) d[v] = nl.b[v] - nl.a[v] * uc;
  return d;
}

std::array<double, 2> stencil_hessian_eigenvalues(const Stencil& s, const GridField& u, std::size_t k) {
  auto d = directional_differences(s, u, k);
  auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  return {*lo, *hi};
}

void write_csv(std::ostream& os, const GridField& u) {
  os << "x,y,u\n";
  char buf[96];
  for (int j = 0; j < u.ny; ++j)
    for (int i = 0; i < u.nx; ++i) {
      if (u.kind[u.index(i, j)] == NodeKind::Exterior) continue;
      std::snprintf(buf, sizeof buf, "%.17e,%.17e,%.17e\n", u.x(i), u.y(j), u(i, j));
      os << buf;
    }
}

void write_pgm(std::ostream& os, const GridField& u) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k = 0; k < u.size(); ++k)
    if (u.kind[k] != NodeKind::Exterior && std::isfinite(u.values[k])) {
      lo = std::min(lo, u.values[k]);
      hi = std::max(hi, u.values[k]);
    }
  const double span = hi > lo ? hi - lo : 1.0;
  os << "P2\n" << u.nx << " " << u.ny << "\n255\n";
  // top row first
  for (int j = u.ny - 1; j >= 0; --j) {
    for (int i = 0; i < u.nx; ++i) {
      int v = 0;
      if (u.kind[u.index(i, j)] != NodeKind::Exterior && std::isfinite(u(i, j)))
        v = static_cast<int>(std::lround(255.0 * (u(i, j) - lo) / span));
      os << v << (i + 1 < u.nx ? ' ' : '\n');
    }
  }
}

}  // namespace nlpot
