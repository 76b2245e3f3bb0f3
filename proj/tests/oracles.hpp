// Independent brute-force oracles used by the unit and acceptance suites.
// These deliberately avoid the library's own code paths.
#pragma once

#include <Eigen/Dense>

namespace oracles {

inline Eigen::MatrixXd drop_row_col(const Eigen::MatrixXd& m, int row, int col) {
  const auto n = m.rows();
  Eigen::MatrixXd out(n - 1, n - 1);
  int rr = 0;
  for (int r = 0; r < n; ++r) {
    if (r == row) continue;
    int cc = 0;
    for (int c = 0; c < n; ++c) {
      if (c == col) continue;
      out(rr, cc++) = m(r, c);
    }
    ++rr;
  }
  return out;
}

/// Determinant by cofactor expansion along the first row. O(n!).
inline double cofactor_det(const Eigen::MatrixXd& m) {
  const auto n = m.rows();
  if (n == 1) return m(0, 0);
  double det = 0.0;
  double sign = 1.0;
  for (int c = 0; c < n; ++c) {
    det += sign * m(0, c) * cofactor_det(drop_row_col(m, 0, c));
    sign = -sign;
  }
  return det;
}

/// Adjugate as the transposed cofactor matrix.
inline Eigen::MatrixXd cofactor_adjugate(const Eigen::MatrixXd& m) {
  const auto n = m.rows();
  Eigen::MatrixXd adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1.0;
    return adj;
  }
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double sign = ((r + c) % 2 == 0) ? 1.0 : -1.0;
      adj(c, r) = sign * cofactor_det(drop_row_col(m, r, c));
    }
  }
  return adj;
}

}  // namespace oracles
