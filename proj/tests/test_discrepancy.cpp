#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "stein/discrepancy.hpp"
#include "stein/errors.hpp"
#include "stein/rng.hpp"

using stein::GaussianLaw;
using stein::Matrix;
using stein::Vector;

namespace {

Matrix draw_samples(const GaussianLaw& law, int n, std::uint64_t seed) {
  stein::Rng rng(seed);
  Matrix out(n, law.dim());
  for (int i = 0; i < n; ++i) out.row(i) = law.sample(rng).transpose();
  return out;
}

}  // namespace

TEST_CASE("exact projected distance, frozen values") {
  // Two-point empirical law {-1, +1} against the standard normal.
  CHECK(stein::w1_empirical_gaussian({-1.0, 1.0}, 1.0) ==
        doctest::Approx(0.5353773215478798).epsilon(1e-12));
  // Point mass at zero: E|Z| = sqrt(2/pi).
  CHECK(stein::w1_empirical_gaussian({0.0}, 1.0) ==
        doctest::Approx(0.7978845608028654).epsilon(1e-12));
  // Degenerate target: W1 against delta_0 is the mean absolute value.
  CHECK(stein::w1_empirical_gaussian({-1.0, 1.0}, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(stein::w1_empirical_gaussian({0.0, 0.0}, 0.0) == 0.0);
  // Scale equivariance in the target: d(c xs, c sigma) = c d(xs, sigma).
  const double base = stein::w1_empirical_gaussian({-1.0, 0.3, 2.0}, 1.0);
  CHECK(stein::w1_empirical_gaussian({-3.0, 0.9, 6.0}, 3.0) ==
        doctest::Approx(3.0 * base).epsilon(1e-12));
}

TEST_CASE("projected distance vanishes on matched samples") {
  stein::Rng rng(11);
  std::vector<double> xs(20000);
  for (auto& v : xs) v = rng.normal();
  const double d = stein::w1_empirical_gaussian(std::move(xs), 1.0);
  CHECK(d > 0.0);
  CHECK(d < 0.03);
}

TEST_CASE("panel composition") {
  const auto smooth = stein::make_smooth_panel(2);
  REQUIRE(smooth.size() == 4);
  CHECK(smooth[0].label() == "linear");
  CHECK(smooth[1].label() == "cos");
  CHECK(smooth[2].label() == "cos-alt");
  CHECK(smooth[3].label() == "gauss_bump");
  for (const auto& f : smooth) {
    CAPTURE(f.label());
    CHECK(f.seminorms().m1.has_value());
    CHECK(f.seminorms().m2.has_value());
    CHECK(f.seminorms().m3.has_value());
    CHECK(f.has_gaussian_mean());
  }

  const auto verif = stein::make_verification_panel(2);
  REQUIRE(verif.size() == 5);
  CHECK(verif.back().label() == "quadratic");

  // One dimension drops the second cosine; the quadratic becomes the form.
  CHECK(stein::make_smooth_panel(1).size() == 3);
  const auto verif1 = stein::make_verification_panel(1);
  REQUIRE(verif1.size() == 4);
  CHECK(verif1.back().label().find("quadratic") == 0);
}

TEST_CASE("smooth discrepancy on matched and mismatched samples") {
  Matrix s(2, 2);
  s << 2, 1, 1, 2;
  GaussianLaw law{s};
  const Matrix samples = draw_samples(law, 20000, 31);

  for (const auto& est : stein::smooth_discrepancy_panel(
           samples, stein::make_smooth_panel(2), law)) {
    CAPTURE(est.g_label);
    CHECK(est.value <= 4.0 * est.sample_se + est.quad_err + 1e-9);
    CHECK(est.sample_se > 0.0);
  }

  // Point mass at the origin vs the bump mean: |1 - det(I + S/2)^{-1/2}|.
  GaussianLaw std2{Matrix(Matrix::Identity(2, 2))};
  Matrix zeros = Matrix::Zero(2, 2);
  const auto bump = stein::make_smooth_panel(2)[3];
  REQUIRE(bump.label() == "gauss_bump");
  const auto est = stein::smooth_discrepancy(zeros, bump, std2);
  CHECK(est.value == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(est.sample_se == 0.0);
}

TEST_CASE("smooth discrepancy input validation") {
  GaussianLaw law{Matrix(Matrix::Identity(2, 2))};
  const auto g = stein::make_smooth_panel(2)[0];
  CHECK_THROWS_AS(stein::smooth_discrepancy(Matrix::Zero(5, 3), g, law),
                  stein::DimensionMismatch);
  CHECK_THROWS_AS(stein::smooth_discrepancy(Matrix::Zero(1, 2), g, law),
                  stein::ConfigInvalid);
}

TEST_CASE("sliced lower bound behaves like a lower bound") {
  Matrix s(2, 2);
  s << 2, 1, 1, 2;
  GaussianLaw law{s};
  const Matrix samples = draw_samples(law, 20000, 77);

  const auto sliced = stein::sliced_w1_lower_bound(samples, law, 64, 5);
  CHECK(sliced.value >= sliced.mean);
  CHECK(sliced.mean > 0.0);
  CHECK(sliced.argmax >= 0);
  CHECK(sliced.argmax < 64);

  // Matched samples sit at the resolution floor measured by the null level.
  const auto null = stein::sliced_w1_null_level(law, 20000, 64, 8, 5);
  CHECK(null.mean > 0.0);
  CHECK(null.sd > 0.0);
  CHECK(null.sd < null.mean);
  CHECK(sliced.value <= null.mean + 8.0 * null.sd);

  // A unit shift in both coordinates must show up at nearly its true size.
  Matrix shifted = samples;
  shifted.array() += 1.0;
  const auto moved = stein::sliced_w1_lower_bound(shifted, law, 64, 5);
  CHECK(moved.value >= 0.8);

  // Deterministic for a fixed seed.
  const auto again = stein::sliced_w1_lower_bound(samples, law, 64, 5);
  CHECK(again.value == sliced.value);
  CHECK(again.argmax == sliced.argmax);
  const auto null2 = stein::sliced_w1_null_level(law, 20000, 64, 8, 5);
  CHECK(null2.mean == null.mean);
}

TEST_CASE("null level needs replication") {
  GaussianLaw law{Matrix(Matrix::Identity(2, 2))};
  CHECK_THROWS_AS(stein::sliced_w1_null_level(law, 100, 4, 1, 3),
                  stein::ConfigInvalid);
}
