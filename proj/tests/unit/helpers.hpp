#pragma once

#include "nlpot/sampling.hpp"
#include "nlpot/symjet.hpp"

#include <doctest.h>

#include <cmath>

namespace nlpot::test {

inline SymMatrix diag(std::initializer_list<double> d) { return SymMatrix::diagonal(d); }

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool rel_near(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// brute-force determinant by cofactor expansion, independent of Eigen's LU
inline double cofactor_det(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 1) return m(0, 0);
  double s = 0.0;
  for (int c = 0; c < n; ++c) {
    Matrix minor(n - 1, n - 1);
    for (int i = 1; i < n; ++i)
      for (int j = 0, jj = 0; j < n; ++j)
        if (j != c) minor(i - 1, jj++) = m(i, j);
    s += (c % 2 ? -1.0 : 1.0) * m(0, c) * cofactor_det(minor);
  }
  return s;
}

}  // namespace nlpot::test
