#pragma once

#include <Eigen/Dense>

namespace cwm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Lower Cholesky factor L of an SPD matrix, L * L^T = M.
class CholFactor {
 public:
  CholFactor() = default;

  /// Factorizes `m`. Throws ValidationError when `m` is not symmetric to
  /// 1e-10 (relative) and NotSpdError carrying the failing pivot otherwise.
  static CholFactor of(const Matrix& m);

  /// Wraps an existing lower-triangular factor (no checks beyond shape).
  static CholFactor from_lower(Matrix lower);

  int dim() const noexcept { return static_cast<int>(lower_.rows()); }
  const Matrix& lower() const noexcept { return lower_; }

  /// log det of the factored matrix.
  double log_det() const;
  /// L^{-1} b
  Vector half_solve(const Vector& b) const;
  /// M^{-1} b
  Vector solve(const Vector& b) const;
  /// Diagonal of M^{-1}.
  Vector inverse_diagonal() const;
  Matrix reconstruct() const { return lower_ * lower_.transpose(); }

 private:
  explicit CholFactor(Matrix lower) : lower_(std::move(lower)) {}
  Matrix lower_;
};

inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace cwm
