#pragma once

#include <Eigen/Dense>

#include "stein/errors.hpp"

namespace stein {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Hilbert-Schmidt (Frobenius) inner product <A,B> = tr(A Bᵀ) = sum_ij A_ij B_ij.
template <typename DerivedA, typename DerivedB>
double hs_inner(const Eigen::MatrixBase<DerivedA>& a,
                const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("hs_inner: shapes differ");
  return a.cwiseProduct(b).sum();
}

template <typename Derived>
double hs_norm(const Eigen::MatrixBase<Derived>& a) {
  return a.norm();
}

// Largest singular value, computed from the symmetric eigenproblem of A Aᵀ
// (or Aᵀ A for tall matrices). Relative accuracy ~1e-10 on conditioned input.
double operator_norm(const Matrix& a);

// Exactly symmetric storage: the (i,j) and (j,i) entries are the same stored
// double. Construction averages a_ij and a_ji, so symmetric input round-trips.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Matrix m_;
};

// Symmetric positive semidefinite matrix with a cached eigendecomposition.
// Eigenvalues inside [-floor, 0) are clamped to zero; anything below -floor
// throws NotPsd. floor = floor_scale * spectral_radius.
class PsdMatrix {
 public:
  PsdMatrix() = default;
  explicit PsdMatrix(const SymMatrix& m, double floor_scale = 1e-12);
  explicit PsdMatrix(const Matrix& m, double floor_scale = 1e-12);

  int dim() const { return static_cast<int>(base_.rows()); }
  const Matrix& mat() const { return base_; }
  const Vector& eigenvalues() const { return eigs_; }
  const Matrix& eigenvectors() const { return vecs_; }
  double min_eig() const { return eigs_.size() ? eigs_.minCoeff() : 0.0; }
  double max_eig() const { return eigs_.size() ? eigs_.maxCoeff() : 0.0; }
  double eigen_floor() const { return floor_; }

  // Symmetric PSD square root; sqrt()*sqrt() reconstructs the clamped matrix
  // to ~1e-14 relative in the HS norm.
  const Matrix& sqrt() const { return sqrt_; }

  bool is_invertible() const { return min_eig() > floor_; }

  // Symmetric inverse square root; throws Singular when an eigenvalue sits at
  // or below the floor.
  Matrix inv_sqrt() const;
  Matrix inverse() const;

 private:
  void decompose(double floor_scale);

  Matrix base_;
  Matrix vecs_;
  Vector eigs_;
  Matrix sqrt_;
  double floor_ = 0.0;
};

// Free-function spellings used throughout the library.
inline SymMatrix psd_sqrt(const PsdMatrix& m) { return SymMatrix(m.sqrt()); }
inline SymMatrix psd_inv_sqrt(const PsdMatrix& m) { return SymMatrix(m.inv_sqrt()); }

}  // namespace stein
