#pragma once

// Dense symmetric matrices and 2-jets (r, p, A).
//
// Structure maps on even / multiple-of-four dimensions use interleaved blocks:
//   complex:      coordinates (x1, y1, x2, y2, ...), J(x, y) = (-y, x) on each pair.
//   quaternionic: blocks of four (a, b, c, d) ~ a + bi + cj + dk, with I, J, K acting
//                 as left multiplication by i, j, k.  IJ = K.

#include <Eigen/Dense>

#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace nlpot {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class SymMatrix {
 public:
  SymMatrix();
  explicit SymMatrix(int n);  // zero matrix
  // Accepts m if it is symmetric up to 1e-12 * (1 + |m|); stores the symmetric part.
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(int n);
  static SymMatrix diagonal(std::span<const double> d);
  static SymMatrix diagonal(std::initializer_list<double> d);
  // Q diag(d) Q^T
  static SymMatrix from_spectrum(const Matrix& q, std::span<const double> d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  // ascending; computed once and shared between copies
  const std::vector<double>& eigenvalues() const;
  const Matrix& eigenvectors() const;
  double min_eigenvalue() const { return eigenvalues().front(); }
  double max_eigenvalue() const { return eigenvalues().back(); }

  double trace() const { return m_.trace(); }
  double norm() const;  // spectral norm
  double frobenius() const { return m_.norm(); }

  // h A h^T
  SymMatrix congruence(const Matrix& h) const;

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator-() const;
  SymMatrix operator*(double s) const;
  SymMatrix shifted(double t) const;  // A + tI

 private:
  struct Spectrum {
    std::once_flag once;
    std::vector<double> values;
    Matrix vectors;
  };
  void ensure_spectrum() const;

  Matrix m_;
  std::shared_ptr<Spectrum> spec_;
};

inline SymMatrix operator*(double s, const SymMatrix& a) { return a * s; }

struct Jet2 {
  double r = 0.0;
  Vector p;
  SymMatrix A;

  Jet2() = default;
  Jet2(double r_, Vector p_, SymMatrix a_);
  // pure second-order jet (0, 0, A)
  explicit Jet2(SymMatrix a_);

  int dim() const { return A.dim(); }
  double norm() const;  // max(|r|, |p|, |A|)

  Jet2 operator+(const Jet2& o) const;
  Jet2 operator-(const Jet2& o) const;
  Jet2 operator-() const;
  Jet2 operator*(double s) const;
  Jet2 shifted(double t) const { return Jet2(r, p, A.shifted(t)); }
};

std::vector<double> ordered_eigenvalues(const SymMatrix& a);

SymMatrix line_projector(const Vector& x);
SymMatrix complement_projector(const Vector& x);

Matrix standard_complex_structure(int n0);
// {I, J, K} on R^{4 n0}
std::vector<Matrix> standard_quaternionic_structure(int n0);

SymMatrix hermitian_part(const SymMatrix& a, const Matrix& j);
SymMatrix hermitian_part(const SymMatrix& a);
SymMatrix quaternionic_part(const SymMatrix& a);

// all sums of p distinct eigenvalues, ascending
std::vector<double> p_fold_sums(const SymMatrix& a, int p);

// (g'/|x|) P_{x-perp} + g'' P_x
SymMatrix radial_hessian(double gp, double gpp, const Vector& x);

// sigma_0..sigma_n of the list
std::vector<double> elementary_symmetric(std::span<const double> values);

long double binomial(int n, int k);

}  // namespace nlpot
