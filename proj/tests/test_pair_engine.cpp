#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "stein/bounds.hpp"
#include "stein/errors.hpp"
#include "stein/pair_model.hpp"
#include "support/toy_models.hpp"

using stein::ConditionMoments;
using stein::Matrix;

TEST_CASE("spin flip model enumerates clean") {
  toy::RademacherSiteModel model(3);
  const auto rep = stein::exact_condition_moments(model);
  CHECK(rep.linear_resid_zero);
  CHECK(rep.quad_identity_exact);
  CHECK(rep.prob_total_one);
  const auto& m = rep.moments;
  CHECK(m.exact);
  CHECK(m.outer == 8);
  CHECK(m.e_abs_mean == 0.0);
  CHECK(m.eprime_hs_mean == 0.0);
  CHECK(m.third_moment == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(m.lambda_inv_op == doctest::Approx(3.0).epsilon(1e-12));
  CHECK((m.lambda - Matrix::Identity(3, 3) / 3.0).norm() < 1e-15);
  CHECK((m.sigma - Matrix::Identity(3, 3)).norm() < 1e-15);
  CHECK(stein::exact_exchangeability_check(model));
}

TEST_CASE("boundary walk enumerates with known defects") {
  // Declared lambda 1/4 is the true linearity coefficient, but the per-state
  // residuals do not vanish: E|E| = 1/4, E|E'| = 1, E|dU|^3 = 3.
  toy::FourStateWalk model;
  const auto rep = stein::exact_condition_moments(model);
  CHECK(!rep.linear_resid_zero);
  CHECK(!rep.quad_identity_exact);
  CHECK(rep.prob_total_one);
  const auto& m = rep.moments;
  CHECK(m.e_abs_mean == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(m.eprime_hs_mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.third_moment == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(m.lambda_inv_op == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(m.sigma(0, 0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(stein::exact_exchangeability_check(model));
}

TEST_CASE("enumeration caps") {
  CHECK_THROWS_AS(stein::exact_condition_moments(toy::RademacherSiteModel(26)),
                  stein::EnumerationTooLarge);
  CHECK_THROWS_AS(stein::exact_exchangeability_check(toy::RademacherSiteModel(21)),
                  stein::EnumerationTooLarge);
}

TEST_CASE("mc agrees with enumeration where residuals vanish") {
  toy::RademacherSiteModel model(3);
  const auto m = stein::mc_condition_moments(model, 4000, 8, 777);
  CHECK(!m.exact);
  CHECK(m.outer == 4000);
  CHECK(m.inner == 8);
  // Truly zero residuals: the signed-root estimator averages to zero.
  CHECK(m.e_abs_mean <= 4.0 * m.e_abs_se + 1e-3);
  CHECK(m.eprime_hs_mean <= 4.0 * m.eprime_se + 2e-3);
}

TEST_CASE("mc recovers nonzero conditional residuals") {
  // Large inner count keeps the signed-root shrinkage below the tolerance.
  toy::FourStateWalk model;
  const auto m = stein::mc_condition_moments(model, 4000, 2048, 2024);
  CHECK(std::abs(m.e_abs_mean - 0.25) <= 4.0 * m.e_abs_se + 2e-3);
  CHECK(std::abs(m.eprime_hs_mean - 1.0) <= 4.0 * m.eprime_se + 4e-3);
  CHECK(std::abs(m.third_moment - 3.0) <= 4.0 * m.third_se + 1e-3);
  CHECK(m.e_abs_se > 0.0);
  CHECK(m.eprime_se > 0.0);
  CHECK(m.third_se > 0.0);
  CHECK(m.lambda_inv_op == doctest::Approx(4.0).epsilon(1e-12));
  // Declared sigma is passed through untouched.
  CHECK(m.sigma(0, 0) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("mc third moment is unbiased at small inner counts") {
  toy::RademacherSiteModel model(3);
  const auto m = stein::mc_condition_moments(model, 4000, 8, 778);
  CHECK(std::abs(m.third_moment - 4.0) <= 4.0 * m.third_se + 1e-3);
}

TEST_CASE("lambda fit matches least squares target") {
  // Without a declared lambda the fit minimizes |mean dU + L U|^2 over the
  // sampled states; for this walk the population answer is 3/20.
  toy::FourStateWalk model(false);
  REQUIRE(!model.declared_lambda().has_value());
  const auto m = stein::mc_condition_moments(model, 20000, 16, 31);
  CHECK(m.lambda(0, 0) == doctest::Approx(0.15).epsilon(0.07));
  CHECK(std::abs(m.lambda(0, 0) - 0.15) < 0.01);
  CHECK(m.lambda_inv_op == doctest::Approx(1.0 / m.lambda(0, 0)).epsilon(1e-12));
}

TEST_CASE("degenerate statistics are rejected") {
  toy::ZeroStatModel zero;
  CHECK_THROWS_AS(stein::mc_condition_moments(zero, 64, 4, 5), stein::Singular);
  stein::McOptions opt;
  opt.fit_lambda_if_missing = false;
  CHECK_THROWS_AS(stein::mc_condition_moments(zero, 64, 4, 5, opt),
                  stein::MissingLambda);
}

TEST_CASE("replicate count validation") {
  toy::FourStateWalk model;
  CHECK_THROWS_AS(stein::mc_condition_moments(model, 100, 1, 9),
                  stein::ConfigInvalid);
  CHECK_THROWS_AS(stein::mc_condition_moments(model, 1, 8, 9),
                  stein::ConfigInvalid);
}

TEST_CASE("mc is deterministic for a fixed seed") {
  toy::FourStateWalk model;
  const auto a = stein::mc_condition_moments(model, 500, 8, 99);
  const auto b = stein::mc_condition_moments(model, 500, 8, 99);
  CHECK(a.e_abs_mean == b.e_abs_mean);
  CHECK(a.eprime_hs_mean == b.eprime_hs_mean);
  CHECK(a.third_moment == b.third_moment);
}

namespace {

ConditionMoments frozen_moments() {
  ConditionMoments m;
  m.lambda = 0.5 * Matrix::Identity(2, 2);
  m.sigma = Matrix::Identity(2, 2);
  m.lambda_inv_op = 2.0;
  m.e_abs_mean = 0.1;
  m.eprime_hs_mean = 0.2;
  m.third_moment = 0.3;
  return m;
}

stein::Seminorms frozen_seminorms() {
  stein::Seminorms s;
  s.m1 = 1.0;
  s.m2 = 2.0;
  s.m3 = 3.0;
  s.m2_tilde = 4.0;
  return s;
}

}  // namespace

TEST_CASE("bound assembly arithmetic") {
  const auto m = frozen_moments();
  const auto s = frozen_seminorms();

  const auto bd1 = stein::assemble_bound_smooth(m, s, 2, "g");
  CHECK(bd1.theorem == "bd1");
  REQUIRE(bd1.terms.size() == 3);
  CHECK(bd1.terms[0].name == "linear");
  CHECK(bd1.terms[1].name == "quadratic");
  CHECK(bd1.terms[2].name == "third");
  CHECK(bd1.terms[0].value == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(bd1.terms[1].value == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(bd1.terms[2].value == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(bd1.total == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(bd1.note.empty());

  auto s_no_tilde = s;
  s_no_tilde.m2_tilde.reset();
  const auto fb = stein::assemble_bound_smooth(m, s_no_tilde, 2, "g");
  CHECK(fb.total == doctest::Approx(0.682842712474619).epsilon(1e-14));
  CHECK(fb.note == "M2t replaced by sqrt(dim)*M2");

  const auto bd2 = stein::assemble_bound_nonsingular(m, s, 1.5, "g");
  CHECK(bd2.theorem == "bd2");
  CHECK(bd2.total == doctest::Approx(0.687997120597325).epsilon(1e-13));

  const auto i1 = stein::assemble_bound_infinitesimal_smooth(m, s, 2, "g");
  CHECK(i1.theorem == "inf-bd1");
  CHECK(i1.total == doctest::Approx(0.6).epsilon(1e-14));
  REQUIRE(i1.terms.size() == 2);

  const auto i2 = stein::assemble_bound_infinitesimal_wass(m, 1.5);
  CHECK(i2.theorem == "inf-bd2");
  CHECK(i2.g_label == "wasserstein");
  CHECK(i2.total == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("bound assembly rejects missing inputs") {
  const auto m = frozen_moments();
  auto s = frozen_seminorms();
  s.m3.reset();
  CHECK_THROWS_AS(stein::assemble_bound_smooth(m, s, 2, "g"),
                  stein::MissingSeminorm);
  auto s2 = frozen_seminorms();
  s2.m2.reset();
  CHECK_THROWS_AS(stein::assemble_bound_nonsingular(m, s2, 1.5, "g"),
                  stein::MissingSeminorm);
  CHECK_THROWS_AS(stein::assemble_bound_nonsingular(m, frozen_seminorms(), 0.0, "g"),
                  stein::SingularSigma);
  CHECK_THROWS_AS(stein::assemble_bound_infinitesimal_wass(m, 0.0),
                  stein::SingularSigma);
}
