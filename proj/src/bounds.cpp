#include "stein/bounds.hpp"

#include <cmath>

#include "stein/errors.hpp"

namespace stein {

namespace {

constexpr double kPi = 3.14159265358979323846;

double finish(BoundReport& r) {
  double t = 0.0;
  for (const auto& term : r.terms) t += term.value;
  r.total = t;
  return t;
}

double need(const std::optional<double>& v, const char* which) {
  if (!v) throw MissingSeminorm(std::string("bound assembly needs ") + which);
  return *v;
}

void check_sigma_op(double sigma_inv_sqrt_op) {
  if (!(sigma_inv_sqrt_op > 0.0) || !std::isfinite(sigma_inv_sqrt_op))
    throw SingularSigma("bound assembly needs a finite |Sigma^-1/2|, target is singular");
}

}  // namespace

BoundReport assemble_bound_smooth(const ConditionMoments& m, const Seminorms& s,
                                  int dim, const std::string& g_label) {
  BoundReport r;
  r.theorem = "bd1";
  r.g_label = g_label;
  r.seminorms_used = s;
  r.moments = m;
  const double m1 = need(s.m1, "M1");
  const double m3 = need(s.m3, "M3");
  double m2t;
  if (s.m2_tilde) {
    m2t = *s.m2_tilde;
  } else {
    // Sup of the Hilbert-Schmidt norm is at most sqrt(dim) times the sup of
    // the operator norm, so a plain M2 still yields a valid coefficient.
    m2t = std::sqrt(static_cast<double>(dim)) * need(s.m2, "M2 (fallback for M2t)");
    r.note = "M2t replaced by sqrt(dim)*M2";
  }
  const double a = m.lambda_inv_op;
  r.terms.push_back({"linear", a * m1 * m.e_abs_mean});
  r.terms.push_back({"quadratic", a * 0.25 * m2t * m.eprime_hs_mean});
  r.terms.push_back({"third", a * (1.0 / 9.0) * m3 * m.third_moment});
  finish(r);
  return r;
}

BoundReport assemble_bound_nonsingular(const ConditionMoments& m,
                                       const Seminorms& s,
                                       double sigma_inv_sqrt_op,
                                       const std::string& g_label) {
  check_sigma_op(sigma_inv_sqrt_op);
  BoundReport r;
  r.theorem = "bd2";
  r.g_label = g_label;
  r.seminorms_used = s;
  r.moments = m;
  const double m1 = need(s.m1, "M1");
  const double m2 = need(s.m2, "M2");
  const double a = m.lambda_inv_op;
  r.terms.push_back({"linear", a * m1 * m.e_abs_mean});
  r.terms.push_back(
      {"quadratic", a * m1 * 0.5 * sigma_inv_sqrt_op * m.eprime_hs_mean});
  r.terms.push_back({"third", std::sqrt(2.0 * kPi) / 24.0 * m2 *
                                  sigma_inv_sqrt_op * a * m.third_moment});
  finish(r);
  return r;
}

BoundReport assemble_bound_infinitesimal_smooth(const ConditionMoments& m,
                                                const Seminorms& s, int dim,
                                                const std::string& g_label) {
  BoundReport r;
  r.theorem = "inf-bd1";
  r.g_label = g_label;
  r.seminorms_used = s;
  r.moments = m;
  const double m1 = need(s.m1, "M1");
  double m2t;
  if (s.m2_tilde) {
    m2t = *s.m2_tilde;
  } else {
    m2t = std::sqrt(static_cast<double>(dim)) * need(s.m2, "M2 (fallback for M2t)");
    r.note = "M2t replaced by sqrt(dim)*M2";
  }
  const double a = m.lambda_inv_op;
  r.terms.push_back({"linear", a * m1 * m.e_abs_mean});
  r.terms.push_back({"quadratic", a * 0.25 * m2t * m.eprime_hs_mean});
  finish(r);
  return r;
}

BoundReport assemble_bound_infinitesimal_wass(const ConditionMoments& m,
                                              double sigma_inv_sqrt_op) {
  check_sigma_op(sigma_inv_sqrt_op);
  BoundReport r;
  r.theorem = "inf-bd2";
  r.g_label = "wasserstein";
  r.moments = m;
  const double a = m.lambda_inv_op;
  r.terms.push_back({"linear", a * m.e_abs_mean});
  r.terms.push_back({"quadratic", a * 0.5 * sigma_inv_sqrt_op * m.eprime_hs_mean});
  finish(r);
  return r;
}

}  // namespace stein
