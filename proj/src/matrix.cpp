#include "stein/matrix.hpp"

#include <cmath>

namespace stein {

double operator_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  // Work with the smaller Gram matrix; its top eigenvalue is sigma_max^2.
  Matrix gram;
  if (a.rows() <= a.cols())
    gram = a * a.transpose();
  else
    gram = a.transpose() * a;
  gram = 0.5 * (gram + gram.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error("operator_norm: eigensolver failed");
  const double top = es.eigenvalues().maxCoeff();
  return top > 0.0 ? std::sqrt(top) : 0.0;
}

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("SymMatrix: not square");
  m_ = m;
  for (int i = 0; i < m_.rows(); ++i)
    for (int j = 0; j < i; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m_(i, j) = v;
      m_(j, i) = v;
    }
}

PsdMatrix::PsdMatrix(const SymMatrix& m, double floor_scale) {
  base_ = m.mat();
  decompose(floor_scale);
}

PsdMatrix::PsdMatrix(const Matrix& m, double floor_scale) {
  base_ = SymMatrix(m).mat();
  decompose(floor_scale);
}

void PsdMatrix::decompose(double floor_scale) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(base_);
  if (es.info() != Eigen::Success)
    throw Error("PsdMatrix: eigensolver failed");
  eigs_ = es.eigenvalues();
  vecs_ = es.eigenvectors();
  const double radius =
      std::max(std::abs(eigs_.maxCoeff()), std::abs(eigs_.minCoeff()));
  floor_ = floor_scale * radius;
  for (int i = 0; i < eigs_.size(); ++i) {
    if (eigs_[i] < -floor_)
      throw NotPsd("PsdMatrix: eigenvalue " + std::to_string(eigs_[i]) +
                   " below -" + std::to_string(floor_));
    if (eigs_[i] < 0.0) eigs_[i] = 0.0;
  }
  Matrix s = vecs_ * eigs_.cwiseSqrt().asDiagonal() * vecs_.transpose();
  sqrt_ = SymMatrix(s).mat();
}

Matrix PsdMatrix::inv_sqrt() const {
  if (!is_invertible())
    throw Singular("PsdMatrix::inv_sqrt: eigenvalue at or below floor");
  Matrix s = vecs_ * eigs_.cwiseSqrt().cwiseInverse().asDiagonal() * vecs_.transpose();
  return SymMatrix(s).mat();
}

Matrix PsdMatrix::inverse() const {
  if (!is_invertible())
    throw Singular("PsdMatrix::inverse: eigenvalue at or below floor");
  Matrix s = vecs_ * eigs_.cwiseInverse().asDiagonal() * vecs_.transpose();
  return SymMatrix(s).mat();
}

}  // namespace stein
