#include "cwm/linalg.hpp"

#include <cmath>

#include "cwm/errors.hpp"

namespace cwm {

CholFactor CholFactor::of(const Matrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("cholesky: matrix is not square");
  const Eigen::Index n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const double scale = std::max({1.0, std::abs(m(i, j)), std::abs(m(j, i))});
      if (std::abs(m(i, j) - m(j, i)) > 1e-10 * scale) {
        throw ValidationError("cholesky: matrix is not symmetric");
      }
    }
  }
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) throw NotSpdError(static_cast<int>(j), diag);
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return CholFactor(std::move(l));
}

CholFactor CholFactor::from_lower(Matrix lower) {
  if (lower.rows() != lower.cols()) throw ValidationError("cholesky: factor is not square");
  return CholFactor(std::move(lower));
}

double CholFactor::log_det() const {
  return 2.0 * lower_.diagonal().array().log().sum();
}

Vector CholFactor::half_solve(const Vector& b) const {
  return lower_.triangularView<Eigen::Lower>().solve(b);
}

Vector CholFactor::solve(const Vector& b) const {
  Vector t = half_solve(b);
  return lower_.transpose().triangularView<Eigen::Upper>().solve(t);
}

Vector CholFactor::inverse_diagonal() const {
  // diag(M^{-1}) = column norms of L^{-1}
  const Matrix linv =
      lower_.triangularView<Eigen::Lower>().solve(Matrix::Identity(dim(), dim()));
  return linv.colwise().squaredNorm().transpose();
}

}  // namespace cwm
