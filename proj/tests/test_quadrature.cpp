#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "stein/gaussian.hpp"
#include "stein/quadrature.hpp"

using stein::Matrix;
using stein::Vector;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.7724538509055160273;
}  // namespace

TEST_CASE("gauss legendre on [0,1]") {
  // A 2-point rule integrates cubics exactly.
  const auto& r2 = stein::gauss_legendre_01(2);
  double cube = 0.0;
  for (int i = 0; i < 2; ++i) cube += r2.weights[i] * std::pow(r2.nodes[i], 3);
  CHECK(cube == doctest::Approx(0.25).epsilon(1e-14));

  const auto& r32 = stein::gauss_legendre_01(32);
  CHECK(r32.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
  double log2 = 0.0;
  for (int i = 0; i < 32; ++i) log2 += r32.weights[i] / (1.0 + r32.nodes[i]);
  CHECK(log2 == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // The cache hands back the same rule object.
  CHECK(&stein::gauss_legendre_01(32) == &r32);
}

TEST_CASE("gauss hermite moments") {
  const auto& r = stein::gauss_hermite(16);
  CHECK(r.weights.sum() == doctest::Approx(kSqrtPi).epsilon(1e-13));
  double m2 = 0.0, m1 = 0.0;
  for (int i = 0; i < 16; ++i) {
    m1 += r.weights[i] * r.nodes[i];
    m2 += r.weights[i] * r.nodes[i] * r.nodes[i];
  }
  CHECK(std::abs(m1) < 1e-13);
  CHECK(m2 == doctest::Approx(kSqrtPi / 2.0).epsilon(1e-13));
  // Degree-2n-1 exactness: x^30 under the weight, against the double factorial.
  const auto& r16 = stein::gauss_hermite(16);
  double m30 = 0.0;
  for (int i = 0; i < 16; ++i) m30 += r16.weights[i] * std::pow(r16.nodes[i], 30);
  double exact = kSqrtPi;
  for (int k = 1; k <= 15; ++k) exact *= (2.0 * k - 1.0) / 2.0;
  CHECK(m30 == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("tensor grid") {
  const auto& r = stein::gauss_hermite(8);
  int count = 0;
  double wsum = 0.0, quad = 0.0;
  stein::tensor_grid(r, 2, [&](const Vector& z, double w) {
    ++count;
    wsum += w;
    quad += w * (z[0] * z[0] + z[1] * z[1]);
  });
  CHECK(count == 64);
  CHECK(wsum == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(quad == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("normal density cdf quantile") {
  CHECK(stein::norm_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(stein::norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(stein::norm_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-14));
  CHECK(stein::norm_cdf(-1.96) ==
        doctest::Approx(1.0 - 0.9750021048517795).epsilon(1e-12));

  for (double p : {1e-10, 1e-4, 0.025, 0.31, 0.5, 0.77, 0.975, 1 - 1e-6}) {
    const double x = stein::norm_quantile(p);
    CHECK(stein::norm_cdf(x) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK(stein::norm_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("halton sequence") {
  stein::HaltonSequence h(3, 99);
  stein::HaltonSequence h2(3, 99);
  double mean0 = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const Vector p = h.point(i);
    CHECK(p.size() == 3);
    for (int k = 0; k < 3; ++k) {
      CHECK(p[k] > 0.0);
      CHECK(p[k] < 1.0);
    }
    CHECK((p - h2.point(i)).norm() == 0.0);  // same seed, same stream
    mean0 += p[0];
  }
  CHECK(mean0 / 2000 == doctest::Approx(0.5).epsilon(0.02));
  // Different shifts for different seeds.
  stein::HaltonSequence g(3, 100);
  CHECK((g.point(17) - h.point(17)).norm() > 1e-6);
}

TEST_CASE("gaussian expectation, tensor path") {
  // E cos(a.Z) = exp(-a' Sigma a / 2).
  Matrix s(2, 2);
  s << 2, 1, 1, 2;
  stein::GaussianLaw law{s};
  Vector a(2);
  a << 0.7, -0.4;
  const double want = std::exp(-0.5 * a.dot(s * a));
  const auto est = stein::gaussian_expect(
      [&](const Vector& z) { return std::cos(a.dot(z)); }, law);
  CHECK(est.value == doctest::Approx(want).epsilon(1e-10));
  CHECK(std::abs(est.value - want) <= 10 * est.err + 1e-12);

  // E exp(-|Z|^2/4) = det(I + Sigma/2)^{-1/2}.
  const double det = (Matrix::Identity(2, 2) + 0.5 * s).determinant();
  const double bump = stein::gaussian_expect_raw(
      [](const Vector& z) { return std::exp(-0.25 * z.squaredNorm()); }, law);
  CHECK(bump == doctest::Approx(1.0 / std::sqrt(det)).epsilon(1e-10));
}

TEST_CASE("gaussian expectation, qmc path") {
  // Dimension 4 exceeds tensor_dim_max=3, so this exercises shifted Halton.
  stein::GaussianLaw law{Matrix(Matrix::Identity(4, 4))};
  const double want = std::pow(1.5, -2.0);  // det(I + I/2)^{-1/2} = (3/2)^{-4/2}
  stein::GaussQuadSpec spec;
  spec.qmc_points = 16384;
  const auto est = stein::gaussian_expect(
      [](const Vector& z) { return std::exp(-0.25 * z.squaredNorm()); }, law, spec);
  CHECK(est.value == doctest::Approx(want).epsilon(5e-3));
  CHECK(est.err < 5e-3);
  CHECK(est.err > 0.0);
}

TEST_CASE("singular covariance still integrates") {
  Matrix s(2, 2);
  s << 1, 1, 1, 1;  // Z = (W, W), rank one
  stein::GaussianLaw law{s};
  CHECK(!law.nonsingular());
  const double got = stein::gaussian_expect_raw(
      [](const Vector& z) { return z[0] * z[1]; }, law);
  CHECK(got == doctest::Approx(1.0).epsilon(1e-10));
}
