#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "stein/errors.hpp"
#include "stein/matrix.hpp"
#include "support/jacobi_oracle.hpp"

using stein::Matrix;

TEST_CASE("hs inner product and norm") {
  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 5, 6, 7, 8;
  CHECK(stein::hs_inner(a, b) == doctest::Approx(5 + 12 + 21 + 32).epsilon(1e-15));
  CHECK(a.squaredNorm() == doctest::Approx(30.0).epsilon(1e-15));
  Matrix c(3, 2);
  c.setZero();
  CHECK_THROWS_AS(stein::hs_inner(a, c), stein::DimensionMismatch);
}

TEST_CASE("operator norm vs jacobi oracle") {
  Matrix m(3, 3);
  m << 0.2, -1.1, 0.7,
       0.5, 0.3, -0.4,
       -0.9, 0.6, 1.2;
  CHECK(stein::operator_norm(m) ==
        doctest::Approx(oracle::operator_norm(m)).epsilon(1e-12));

  // The lower-triangular factor whose norm drives the d=2, p=1/4 chain check.
  Matrix t(2, 2);
  t << 1.0, 0.0, 0.5, 0.5;
  Matrix tinv = t.inverse();
  CHECK(stein::operator_norm(tinv) ==
        doctest::Approx(oracle::operator_norm(tinv)).epsilon(1e-12));
}

TEST_CASE("psd matrix diagonal") {
  Matrix d(2, 2);
  d << 1, 0, 0, 2;
  stein::PsdMatrix p{stein::SymMatrix{d}};
  CHECK(p.min_eig() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.max_eig() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(p.is_invertible());

  const Matrix r = p.sqrt();
  CHECK((r * r - d).norm() < 1e-13);
  CHECK(r(1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  const Matrix inv = p.inverse();
  CHECK(inv(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(inv(1, 1) == doctest::Approx(0.5).epsilon(1e-14));

  const Matrix is = p.inv_sqrt();
  CHECK((is * is - inv).norm() < 1e-13);
}

TEST_CASE("psd matrix correlated") {
  Matrix s(2, 2);
  s << 2, 1, 1, 2;
  stein::PsdMatrix p{s};
  const auto eigs = oracle::jacobi_eigenvalues(s);
  CHECK(eigs.front() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eigs.back() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(p.min_eig() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.max_eig() == doctest::Approx(3.0).epsilon(1e-12));

  const Matrix r = p.sqrt();
  CHECK((r * r - s).norm() < 1e-12);
  CHECK((r - r.transpose()).norm() < 1e-12);

  // |S^-1/2|_op = 1/sqrt(min eig).
  CHECK(stein::operator_norm(p.inv_sqrt()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sym matrix averages asymmetry") {
  Matrix a(2, 2);
  a << 1, 0.3, 0.1, 2;
  stein::SymMatrix s{a};
  CHECK(s.mat()(0, 1) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(s.mat()(1, 0) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("indefinite input rejected") {
  Matrix bad(2, 2);
  bad << 1, 2, 2, 1;  // eigenvalues 3 and -1
  CHECK_THROWS_AS(stein::PsdMatrix{bad}, stein::NotPsd);
}

TEST_CASE("singular psd rejects inversion") {
  Matrix s(2, 2);
  s << 1, 1, 1, 1;  // rank one
  stein::PsdMatrix p{s};
  CHECK(!p.is_invertible());
  CHECK_THROWS_AS(p.inverse(), stein::Singular);
  CHECK_THROWS_AS(p.inv_sqrt(), stein::Singular);
  // sqrt of a singular psd matrix is still fine.
  const Matrix r = p.sqrt();
  CHECK((r * r - s).norm() < 1e-12);
}

TEST_CASE("psd sqrt free functions") {
  Matrix s(3, 3);
  s << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  stein::PsdMatrix p{s};
  const Matrix r = stein::psd_sqrt(p).mat();
  CHECK((r * r - s).norm() < 1e-11);
  const Matrix is = stein::psd_inv_sqrt(p).mat();
  CHECK((is * s * is - Matrix::Identity(3, 3)).norm() < 1e-11);
}
