#include "stein/verify.hpp"

#include <cmath>

#include "stein/discrepancy.hpp"
#include "stein/quadrature.hpp"

namespace stein {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string sigma_tag(int i) {
  switch (i) {
    case 0: return "identity";
    case 1: return "diag(1,2)";
    default: return "correlated";
  }
}

// Fixed evaluation grid: 5 points per axis at {-2, -1, 0, 1, 2} axis
// standard deviations.
std::vector<Vector> residual_grid(const GaussianLaw& law) {
  const int d = law.dim();
  std::vector<Vector> pts;
  std::vector<int> idx(d, 0);
  for (;;) {
    Vector x(d);
    for (int k = 0; k < d; ++k)
      x[k] = (idx[k] - 2) * std::sqrt(law.covariance().mat()(k, k));
    pts.push_back(std::move(x));
    int k = 0;
    while (k < d && ++idx[k] == 5) idx[k++] = 0;
    if (k == d) break;
  }
  return pts;
}

}  // namespace

std::vector<Matrix> verification_covariances() {
  Matrix c(2, 2);
  c << 2, 1, 1, 2;
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = 2;
  return {Matrix::Identity(2, 2), d, c};
}

std::vector<SuiteResult> verify_characterizing_null(const VerifySpec& spec) {
  std::vector<SuiteResult> out;
  const auto covs = verification_covariances();
  for (std::size_t ci = 0; ci < covs.size(); ++ci) {
    const GaussianLaw law(covs[ci]);
    for (const auto& g : make_verification_panel(2)) {
      const McEstimate est =
          expect_char_residual(g, law, spec.null_samples, spec.seed);
      SuiteResult r;
      r.name = "char-null " + sigma_tag(static_cast<int>(ci)) + " " + g.label();
      r.value = std::abs(est.mean);
      r.limit = spec.null_z * est.std_err + 1e-12;
      r.pass = r.value <= r.limit;
      r.detail = "mean " + std::to_string(est.mean) + ", se " +
                 std::to_string(est.std_err);
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<SuiteResult> verify_solver_residual(const VerifySpec& spec) {
  std::vector<SuiteResult> out;
  const auto covs = verification_covariances();
  for (std::size_t ci = 0; ci < covs.size(); ++ci) {
    const GaussianLaw law(covs[ci]);
    const auto grid = residual_grid(law);
    for (const auto& g : make_verification_panel(2)) {
      // The solver is polynomially exact on linear and bilinear inputs, so
      // those cases get the tight tolerance.
      const bool is_linear = g.label() == "linear";
      const bool is_quad = g.label() == "quadratic";
      const double tol =
          (is_linear || is_quad) ? spec.resid_tol_exact : spec.resid_tol_smooth;
      double worst = 0.0;
      for (const auto& x : grid)
        worst = std::max(worst, std::abs(verify_stein_equation(g, law, x, spec.quad)));
      SuiteResult r;
      r.name = "residual " + sigma_tag(static_cast<int>(ci)) + " " + g.label();
      r.value = worst;
      r.limit = tol;
      r.pass = worst <= tol;
      out.push_back(std::move(r));

      // Closed forms: the solution of a linear g is g itself, of x_i x_j it
      // is (x_i x_j - Sigma_ij) / 2.
      if (is_linear || is_quad) {
        const TestFunction h = make_stein_solution(g, law, spec.quad);
        double worst_val = 0.0;
        for (const auto& x : grid) {
          const double exact =
              is_linear ? g(x) : 0.5 * (x[0] * x[1] - law.covariance().mat()(0, 1));
          const double got = h(x);
          worst_val = std::max(worst_val,
                               std::abs(got - exact) / (1.0 + std::abs(exact)));
        }
        SuiteResult rv;
        rv.name = "solution-exact " + sigma_tag(static_cast<int>(ci)) + " " + g.label();
        rv.value = worst_val;
        rv.limit = spec.resid_tol_exact;
        rv.pass = worst_val <= spec.resid_tol_exact;
        out.push_back(std::move(rv));
      }
    }
  }
  return out;
}

std::vector<SuiteResult> verify_contractions(const VerifySpec& spec) {
  std::vector<SuiteResult> out;
  const auto covs = verification_covariances();
  for (std::size_t ci = 0; ci < covs.size(); ++ci) {
    const GaussianLaw law(covs[ci]);
    const double inv_op = operator_norm(law.inv_sqrt());
    const std::string tag = sigma_tag(static_cast<int>(ci));
    for (const auto& g : make_verification_panel(2)) {
      const Seminorms& s = g.seminorms();
      const TestFunction h = make_stein_solution(g, law, spec.quad_fast);

      auto check = [&](const std::string& rel, double lhs, double rhs) {
        SuiteResult r;
        r.name = "contraction " + tag + " " + g.label() + " " + rel;
        r.value = lhs;
        r.limit = rhs * (1.0 + spec.contraction_slack) + spec.zero_floor;
        r.pass = lhs <= r.limit;
        out.push_back(std::move(r));
      };

      double mk[4] = {0, 0, 0, 0};
      for (int k = 1; k <= 3; ++k)
        if ((k == 1 && (s.m1 || s.m0)) || (k == 2 && s.m2) ||
            (k == 3 && (s.m3 || s.m2)))
          mk[k] = seminorm_mk(h, k, law, spec.sampler);

      if (s.m1) check("M1<=M1/1", mk[1], *s.m1);
      if (s.m2) check("M2<=M2/2", mk[2], *s.m2 / 2.0);
      if (s.m3) check("M3<=M3/3", mk[3], *s.m3 / 3.0);

      double m2t_h = -1.0;
      if (s.m2_tilde || s.m1) {
        m2t_h = seminorm_m2tilde(h, law, spec.sampler);
        if (s.m2_tilde) check("M2t<=M2t/2", m2t_h, *s.m2_tilde / 2.0);
      }

      // Positive definite target: bounds that trade one derivative order for
      // the inverse square root of the covariance.
      if (s.m0) check("M1<=sqrt(pi/2)M0|S^-1/2|", mk[1],
                      std::sqrt(kPi / 2.0) * *s.m0 * inv_op);
      if (s.m1 && m2t_h >= 0.0)
        check("M2t<=sqrt(2/pi)M1|S^-1/2|", m2t_h,
              std::sqrt(2.0 / kPi) * *s.m1 * inv_op);
      if (s.m2) check("M3<=sqrt(2pi)/4 M2|S^-1/2|", mk[3],
                      std::sqrt(2.0 * kPi) / 4.0 * *s.m2 * inv_op);
    }
  }
  return out;
}

}  // namespace stein
