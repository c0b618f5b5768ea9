#include "nlpot/symjet.hpp"

#include "nlpot/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nlpot {

SymMatrix::SymMatrix() : m_(0, 0), spec_(std::make_shared<Spectrum>()) {}

SymMatrix::SymMatrix(int n) : m_(Matrix::Zero(n, n)), spec_(std::make_shared<Spectrum>()) {
  if (n < 0) throw InvalidInput("SymMatrix: negative dimension");
}

SymMatrix::SymMatrix(const Matrix& m) : spec_(std::make_shared<Spectrum>()) {
  if (m.rows() != m.cols()) throw InvalidInput("SymMatrix: matrix is not square");
  double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (m.size() > 0 && !(asym <= 1e-12 * (1.0 + m.cwiseAbs().maxCoeff())))
    throw InvalidInput("SymMatrix: matrix is not symmetric (asymmetry " + std::to_string(asym) + ")");
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(int n) { return SymMatrix(Matrix(Matrix::Identity(n, n))); }

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  Matrix m = Matrix::Zero(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return SymMatrix(m);
}

SymMatrix SymMatrix::diagonal(std::initializer_list<double> d) {
  return diagonal(std::span<const double>(d.begin(), d.size()));
}

SymMatrix SymMatrix::from_spectrum(const Matrix& q, std::span<const double> d) {
  if (q.rows() != q.cols() || static_cast<std::size_t>(q.rows()) != d.size())
    throw InvalidInput("from_spectrum: size mismatch");
  Vector dv = Eigen::Map<const Vector>(d.data(), d.size());
  Matrix m = q * dv.asDiagonal() * q.transpose();
  return SymMatrix(Matrix(0.5 * (m + m.transpose())));
}

void SymMatrix::ensure_spectrum() const {
  std::call_once(spec_->once, [this] {
    const int n = dim();
    if (n == 0) return;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_);
    if (es.info() != Eigen::Success) throw NumericalFailure("symmetric eigen solver did not converge");
    spec_->values.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    spec_->vectors = es.eigenvectors();
  });
}

const std::vector<double>& SymMatrix::eigenvalues() const {
  ensure_spectrum();
  return spec_->values;
}

const Matrix& SymMatrix::eigenvectors() const {
  ensure_spectrum();
  return spec_->vectors;
}

double SymMatrix::norm() const {
  if (dim() == 0) return 0.0;
  const auto& ev = eigenvalues();
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

SymMatrix SymMatrix::congruence(const Matrix& h) const {
  if (h.cols() != m_.rows()) throw InvalidInput("congruence: size mismatch");
  Matrix c = h * m_ * h.transpose();
  return SymMatrix(Matrix(0.5 * (c + c.transpose())));
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  if (o.dim() != dim()) throw InvalidInput("SymMatrix +: dimension mismatch");
  return SymMatrix(Matrix(m_ + o.m_));
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
  if (o.dim() != dim()) throw InvalidInput("SymMatrix -: dimension mismatch");
  return SymMatrix(Matrix(m_ - o.m_));
}

SymMatrix SymMatrix::operator-() const { return SymMatrix(Matrix(-m_)); }

SymMatrix SymMatrix::operator*(double s) const { return SymMatrix(Matrix(s * m_)); }

SymMatrix SymMatrix::shifted(double t) const {
  Matrix m = m_;
  m.diagonal().array() += t;
  return SymMatrix(m);
}

Jet2::Jet2(double r_, Vector p_, SymMatrix a_) : r(r_), p(std::move(p_)), A(std::move(a_)) {
  if (p.size() != A.dim()) throw InvalidInput("Jet2: gradient and Hessian dimensions differ");
}

Jet2::Jet2(SymMatrix a_) : r(0.0), p(Vector::Zero(a_.dim())), A(std::move(a_)) {}

double Jet2::norm() const {
  double pn = p.size() ? p.norm() : 0.0;
  return std::max({std::abs(r), pn, A.norm()});
}

Jet2 Jet2::operator+(const Jet2& o) const {
  if (o.dim() != dim()) throw InvalidInput("Jet2 +: dimension mismatch");
  return Jet2(r + o.r, p + o.p, A + o.A);
}

Jet2 Jet2::operator-(const Jet2& o) const {
  if (o.dim() != dim()) throw InvalidInput("Jet2 -: dimension mismatch");
  return Jet2(r - o.r, p - o.p, A - o.A);
}

Jet2 Jet2::operator-() const { return Jet2(-r, -p, -A); }

Jet2 Jet2::operator*(double s) const { return Jet2(s * r, s * p, A * s); }

std::vector<double> ordered_eigenvalues(const SymMatrix& a) { return a.eigenvalues(); }

SymMatrix line_projector(const Vector& x) {
  double nx = x.norm();
  if (!(nx > 0.0)) throw InvalidInput("line_projector: zero vector");
  Vector u = x / nx;
  return SymMatrix(Matrix(u * u.transpose()));
}

SymMatrix complement_projector(const Vector& x) {
  return SymMatrix::identity(static_cast<int>(x.size())) - line_projector(x);
}

Matrix standard_complex_structure(int n0) {
  if (n0 < 1) throw InvalidInput("complex structure needs n0 >= 1");
  Matrix j = Matrix::Zero(2 * n0, 2 * n0);
  for (int b = 0; b < n0; ++b) {
    j(2 * b, 2 * b + 1) = -1.0;
    j(2 * b + 1, 2 * b) = 1.0;
  }
  return j;
}

std::vector<Matrix> standard_quaternionic_structure(int n0) {
  if (n0 < 1) throw InvalidInput("quaternionic structure needs n0 >= 1");
  // left multiplication on a + bi + cj + dk
  Matrix li(4, 4), lj(4, 4), lk(4, 4);
  li << 0, -1, 0, 0,
        1, 0, 0, 0,
        0, 0, 0, -1,
        0, 0, 1, 0;
  lj << 0, 0, -1, 0,
        0, 0, 0, 1,
        1, 0, 0, 0,
        0, -1, 0, 0;
  lk << 0, 0, 0, -1,
        0, 0, -1, 0,
        0, 1, 0, 0,
        1, 0, 0, 0;
  std::vector<Matrix> out(3, Matrix::Zero(4 * n0, 4 * n0));
  for (int b = 0; b < n0; ++b) {
    out[0].block(4 * b, 4 * b, 4, 4) = li;
    out[1].block(4 * b, 4 * b, 4, 4) = lj;
    out[2].block(4 * b, 4 * b, 4, 4) = lk;
  }
  return out;
}

SymMatrix hermitian_part(const SymMatrix& a, const Matrix& j) {
  const int n = a.dim();
  if (n % 2 != 0) throw InvalidInput("hermitian_part: odd dimension");
  if (j.rows() != n || j.cols() != n) throw InvalidInput("hermitian_part: structure size mismatch");
  if ((j * j + Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12 ||
      (j + j.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidInput("hermitian_part: J must satisfy J^2 = -I and J^T = -J");
  Matrix m = 0.5 * (a.matrix() - j * a.matrix() * j);
  return SymMatrix(Matrix(0.5 * (m + m.transpose())));
}

SymMatrix hermitian_part(const SymMatrix& a) {
  if (a.dim() % 2 != 0) throw InvalidInput("hermitian_part: odd dimension");
  return hermitian_part(a, standard_complex_structure(a.dim() / 2));
}

SymMatrix quaternionic_part(const SymMatrix& a) {
  const int n = a.dim();
  if (n % 4 != 0 || n == 0) throw InvalidInput("quaternionic_part: dimension must be a positive multiple of 4");
  auto ijk = standard_quaternionic_structure(n / 4);
  Matrix m = a.matrix();
  for (const auto& s : ijk) m -= s * a.matrix() * s;
  m *= 0.25;
  return SymMatrix(Matrix(0.5 * (m + m.transpose())));
}

std::vector<double> p_fold_sums(const SymMatrix& a, int p) {
  const int n = a.dim();
  if (p < 1 || p > n) throw InvalidInput("p_fold_sums: p out of range");
  const auto& ev = a.eigenvalues();
  std::vector<double> out;
  std::vector<int> idx(p);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    double s = 0.0;
    for (int i : idx) s += ev[i];
    out.push_back(s);
    int k = p - 1;
    while (k >= 0 && idx[k] == n - p + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

SymMatrix radial_hessian(double gp, double gpp, const Vector& x) {
  double r = x.norm();
  if (!(r > 0.0)) throw InvalidInput("radial_hessian: x = 0");
  SymMatrix px = line_projector(x);
  SymMatrix perp = SymMatrix::identity(static_cast<int>(x.size())) - px;
  return perp * (gp / r) + px * gpp;
}

std::vector<double> elementary_symmetric(std::span<const double> values) {
  std::vector<double> e(values.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += values[i] * e[k - 1];
  return e;
}

long double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

}  // namespace nlpot
