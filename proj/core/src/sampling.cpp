#include "nlpot/sampling.hpp"

#include <cmath>

namespace nlpot {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng sample_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ (index * 0xd1b54a32d192ed03ULL)));
}

double normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

Vector random_vector(Rng& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

Vector random_unit_vector(Rng& rng, int n) {
  Vector v = random_vector(rng, n);
  double nv = v.norm();
  while (nv < 1e-12) {
    v = random_vector(rng, n);
    nv = v.norm();
  }
  return v / nv;
}

Matrix random_orthogonal(Rng& rng, int n) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

SymMatrix random_symmetric(Rng& rng, int n, double scale) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  SymMatrix s(Matrix(0.5 * (g + g.transpose())));
  double nrm = s.norm();
  if (nrm == 0.0) return s;
  return s * (scale / nrm);
}

SymMatrix random_psd(Rng& rng, int n, double scale) {
  Matrix q = random_orthogonal(rng, n);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = uniform(rng, 0.0, 1.0) < 0.25 ? 0.0 : uniform(rng, 0.0, scale);
  return SymMatrix::from_spectrum(q, d);
}

SymMatrix random_with_spectrum(Rng& rng, int n, double lo, double hi) {
  Matrix q = random_orthogonal(rng, n);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = uniform(rng, lo, hi);
  return SymMatrix::from_spectrum(q, d);
}

Jet2 random_jet(Rng& rng, int n, double scale, JetShape shape) {
  double r = shape.with_r ? scale * normal(rng) : 0.0;
  Vector p = shape.with_p ? Vector(scale * random_unit_vector(rng, n) * uniform(rng, 0.0, 1.0))
                          : Vector(Vector::Zero(n));
  return Jet2(r, p, random_symmetric(rng, n, scale));
}

}  // namespace nlpot
