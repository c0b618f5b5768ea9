#include "nlpot/solver.hpp"

#include "nlpot/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace nlpot {

SupConvolution sup_convolution(const GridField& u, double eps, double lambda, double M, int reach) {
  if (!(eps > 0.0) || lambda < 0.0) throw InvalidInput("sup_convolution: eps > 0, lambda >= 0");
  SupConvolution out;
  out.delta = std::sqrt(2.0 * eps * M);
  out.radius = static_cast<int>(std::floor(out.delta / u.h + 1e-12));
  out.v = u;
  out.v.boundary = nullptr;
  auto quad = [&](int i, int j) {
    double x = u.x(i), y = u.y(j);
    return 0.5 * lambda * (x * x + y * y);
  };
  const int R = out.radius;
  out.noop = R < 1;
  for (int j = 0; j < u.ny; ++j)
    for (int i = 0; i < u.nx; ++i) {
      if (u.kind[u.index(i, j)] == NodeKind::Exterior) continue;
      double best = u(i, j) + quad(i, j);
      for (int q = -R; q <= R; ++q)
        for (int p = -R; p <= R; ++p) {
          const double z2 = (double(p) * p + double(q) * q) * u.h * u.h;
          if (z2 > out.delta * out.delta * (1 + 1e-12)) continue;
          const int ii = i - p, jj = j - q;
          if (ii < 0 || jj < 0 || ii >= u.nx || jj >= u.ny || u.kind[u.index(ii, jj)] == NodeKind::Exterior) continue;
          best = std::max(best, u(ii, jj) + quad(ii, jj) - z2 / eps);
        }
      out.v(i, j) = best;
    }
  out.band.assign(u.size(), false);
  const int pad = R + reach;
  for (int j = pad; j < u.ny - pad; ++j)
    for (int i = pad; i < u.nx - pad; ++i) {
      if (u.kind[u.index(i, j)] != NodeKind::Interior) continue;
      bool ok = true;
      for (int q = -pad; q <= pad && ok; ++q)
        for (int p = -pad; p <= pad && ok; ++p) ok = u.kind[u.index(i + p, j + q)] != NodeKind::Exterior;
      out.band[u.index(i, j)] = ok;
    }
  return out;
}

double min_second_difference(const GridField& v, const std::vector<bool>& mask, int directions) {
  auto dirs = lattice_directions(directions);
  double lo = kInf;
  for (int j = 0; j < v.ny; ++j)
    for (int i = 0; i < v.nx; ++i) {
      const int k = v.index(i, j);
      if (v.kind[k] != NodeKind::Interior || (!mask.empty() && !mask[k])) continue;
      for (const auto& d : dirs) {
        int ia = i + d.a, ja = j + d.b, ib = i - d.a, jb = j - d.b;
        if (ia < 0 || ib < 0 || ja < 0 || jb < 0 || ia >= v.nx || ib >= v.nx || ja >= v.ny || jb >= v.ny) continue;
        if (v.kind[v.index(ia, ja)] == NodeKind::Exterior || v.kind[v.index(ib, jb)] == NodeKind::Exterior) continue;
        double l2 = (double(d.a) * d.a + double(d.b) * d.b) * v.h * v.h;
        lo = std::min(lo, (v(ia, ja) - 2.0 * v(i, j) + v(ib, jb)) / l2);
      }
    }
  return lo;
}

double footnote_lambda2_residual(const std::function<double(double)>& w, int m, double h) {
  if (m < 3) throw InvalidInput("footnote_lambda2_residual: m >= 3");
  const double c = 0.5 * (m - 1) * h;
  auto u = [&](int i, int, int) { return w(i * h - c); };  // depends on x1 only
  double worst = 0.0;
  for (int k = 1; k < m - 1; ++k)
    for (int j = 1; j < m - 1; ++j)
      for (int i = 1; i < m - 1; ++i) {
        int idx[3] = {i, j, k};
        auto at = [&](int di, int dj, int dk) { return u(idx[0] + di, idx[1] + dj, idx[2] + dk); };
        Eigen::Matrix3d H;
        const int e[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) {
            if (a == b) {
              H(a, a) = (at(e[a][0], e[a][1], e[a][2]) - 2.0 * at(0, 0, 0) + at(-e[a][0], -e[a][1], -e[a][2])) / (h * h);
            } else {
              auto s = [&](int sa, int sb) {
                return at(sa * e[a][0] + sb * e[b][0], sa * e[a][1] + sb * e[b][1], sa * e[a][2] + sb * e[b][2]);
              };
              H(a, b) = (s(1, 1) - s(1, -1) - s(-1, 1) + s(-1, -1)) / (4.0 * h * h);
            }
          }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(H, Eigen::EigenvaluesOnly);
        worst = std::max(worst, std::abs(es.eigenvalues()[1]));
      }
  return worst;
}

}  // namespace nlpot
