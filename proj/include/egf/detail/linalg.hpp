#pragma once

#include <Eigen/Dense>

#include "egf/errors.hpp"

namespace egf::detail {

// Weighted inner product <a, b>_W = sum_i w_i a_i b_i.
inline double dot_w(const Eigen::VectorXd& w, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& b) {
  return (w.array() * a.array() * b.array()).sum();
}

inline double norm_w(const Eigen::VectorXd& w, const Eigen::VectorXd& a) {
  return std::sqrt((w.array() * a.array().square()).sum());
}

// Scales rows of M by sqrt(w) (i.e. W^{1/2} M for diagonal W).
inline Eigen::MatrixXd scale_rows_sqrt(const Eigen::VectorXd& w, const Eigen::MatrixXd& m) {
  return w.array().sqrt().matrix().asDiagonal() * m;
}

// Scales rows of M by 1/sqrt(w) (i.e. W^{-1/2} M).
inline Eigen::MatrixXd scale_rows_inv_sqrt(const Eigen::VectorXd& w, const Eigen::MatrixXd& m) {
  return w.array().rsqrt().matrix().asDiagonal() * m;
}

struct ThinQr {
  Eigen::MatrixXd q;  // n x k, orthonormal columns
  Eigen::MatrixXd r;  // k x k, upper triangular with nonnegative diagonal
};

// Economized QR with the sign convention R_ii >= 0, which makes the Q factor
// a well-defined function of the input.
inline ThinQr qr_positive(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows(), k = a.cols();
  if (k == 0 || n < k) throw ShapeError("qr_positive: need rows >= cols > 0");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  ThinQr out;
  out.q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (out.r(i, i) < 0.0) {
      out.q.col(i) = -out.q.col(i);
      out.r.row(i) = -out.r.row(i);
    }
  }
  return out;
}

inline double max_abs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace egf::detail
