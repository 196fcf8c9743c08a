#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stein/errors.hpp"
#include "stein/matrix.hpp"
#include "stein/parallel.hpp"
#include "stein/rational.hpp"
#include "stein/rng.hpp"

namespace stein {

// Exchangeable-pair models are duck-typed. A samplable model provides
//   int dim() const;
//   State sample_state(Rng&) const;
//   State sample_partner(const State&, Rng&) const;   // one exchangeable move
//   Vector extract(const State&) const;               // the statistic X
//   std::optional<Matrix> declared_lambda() const;    // E[X'-X|X] = -L X + E
//   std::optional<Matrix> declared_sigma() const;
// An enumerable model additionally provides exact-arithmetic hooks at the
// natural (unscaled) statistic U with X = U ./ stat_scale():
//   std::uint64_t state_count() const;
//   for_each_state(f);                 // f(state, Rational prob)
//   for_each_partner(state, f);        // f(partner, Rational prob)
//   std::vector<Rational> stat_exact(const State&) const;
//   std::vector<std::vector<Rational>> lambda_exact() const;  // U-level L
//   Vector stat_scale() const;
//   std::uint64_t state_key(const State&) const;      // for joint-law checks

enum class PairMode { discrete, infinitesimal };

// Moment summary feeding the bound assemblies. All moment values are
// nonnegative; exact=true marks enumeration results (zero std errors).
struct ConditionMoments {
  PairMode mode = PairMode::discrete;
  Matrix lambda;
  Matrix sigma;
  double lambda_inv_op = 0.0;
  double e_abs_mean = 0.0;
  double e_abs_se = 0.0;
  double eprime_hs_mean = 0.0;
  double eprime_se = 0.0;
  double third_moment = 0.0;
  double third_se = 0.0;
  std::uint64_t outer = 0;
  std::uint64_t inner = 0;
  bool exact = false;
};

struct ExactPairReport {
  ConditionMoments moments;
  // E[U'-U|state] + L_U U == 0 for every state, in exact arithmetic.
  bool linear_resid_zero = false;
  // E[(U'-U)(U'-U)ᵀ] == 2 L_U Sigma_U, in exact arithmetic.
  bool quad_identity_exact = false;
  // state probabilities and every conditional law sum to exactly one.
  bool prob_total_one = false;
};

namespace detail {

inline double rat_vec_norm(const std::vector<Rational>& v, const Vector& scale) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double e = v[i].to_double() / scale[static_cast<int>(i)];
    s += e * e;
  }
  return std::sqrt(s);
}

}  // namespace detail

// Full enumeration of the pair law. Exact identities are checked in rational
// arithmetic at the unscaled statistic; reported moments are doubles at the
// normalized scale. Throws EnumerationTooLarge past the state cap.
template <typename Model>
ExactPairReport exact_condition_moments(const Model& model,
                                        std::uint64_t state_cap = (1ull << 24)) {
  if (model.state_count() > state_cap)
    throw EnumerationTooLarge("exact_condition_moments: " +
                              std::to_string(model.state_count()) + " states");
  const int d = model.dim();
  const Vector scale = model.stat_scale();
  const auto lam_u = model.lambda_exact();

  // Pass 1: Sigma_U = E[U Uᵀ] and total probability.
  std::vector<std::vector<Rational>> sigma_u(d, std::vector<Rational>(d));
  Rational total{0};
  model.for_each_state([&](const auto& s, const Rational& p) {
    total += p;
    const auto u = model.stat_exact(s);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) sigma_u[i][j] += p * u[i] * u[j];
  });
  bool prob_ok = (total == Rational{1});

  // 2 L_U Sigma_U, the exact target for the quadratic identity.
  std::vector<std::vector<Rational>> two_ls(d, std::vector<Rational>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Rational acc{0};
      for (int k = 0; k < d; ++k) acc += lam_u[i][k] * sigma_u[k][j];
      two_ls[i][j] = Rational{2} * acc;
    }

  // Pass 2: conditional moments per state.
  bool linear_zero = true;
  double e_abs = 0.0, eprime = 0.0, third = 0.0;
  std::vector<std::vector<Rational>> quad_total(d, std::vector<Rational>(d));
  model.for_each_state([&](const auto& s, const Rational& p) {
    const auto u = model.stat_exact(s);
    std::vector<Rational> mean_du(d, Rational{0});
    std::vector<std::vector<Rational>> mean_dudu(d, std::vector<Rational>(d));
    Rational cond_total{0};
    double third_state = 0.0;
    model.for_each_partner(s, [&](const auto& sp, const Rational& q) {
      cond_total += q;
      const auto up = model.stat_exact(sp);
      std::vector<Rational> du(d);
      double norm2 = 0.0;
      for (int i = 0; i < d; ++i) {
        du[i] = up[i] - u[i];
        const double e = du[i].to_double() / scale[i];
        norm2 += e * e;
      }
      for (int i = 0; i < d; ++i) {
        mean_du[i] += q * du[i];
        for (int j = 0; j < d; ++j) mean_dudu[i][j] += q * du[i] * du[j];
      }
      third_state += q.to_double() * norm2 * std::sqrt(norm2);
    });
    if (cond_total != Rational{1}) prob_ok = false;

    // E-residual at this state: E[U'-U|state] + L_U U.
    std::vector<Rational> resid(d, Rational{0});
    for (int i = 0; i < d; ++i) {
      resid[i] = mean_du[i];
      for (int k = 0; k < d; ++k) resid[i] += lam_u[i][k] * u[k];
      if (!resid[i].is_zero()) linear_zero = false;
    }
    e_abs += p.to_double() * detail::rat_vec_norm(resid, scale);

    // E'-residual: E[(U'-U)(U'-U)ᵀ|state] - 2 L_U Sigma_U.
    double hs2 = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        quad_total[i][j] += p * mean_dudu[i][j];
        const double e =
            (mean_dudu[i][j] - two_ls[i][j]).to_double() / (scale[i] * scale[j]);
        hs2 += e * e;
      }
    eprime += p.to_double() * std::sqrt(hs2);
    third += p.to_double() * third_state;
  });

  bool quad_exact = true;
  for (int i = 0; i < d && quad_exact; ++i)
    for (int j = 0; j < d; ++j)
      if (quad_total[i][j] != two_ls[i][j]) {
        quad_exact = false;
        break;
      }

  ExactPairReport out;
  out.linear_resid_zero = linear_zero;
  out.quad_identity_exact = quad_exact;
  out.prob_total_one = prob_ok;

  ConditionMoments& m = out.moments;
  m.mode = PairMode::discrete;
  m.exact = true;
  m.outer = model.state_count();
  m.inner = 0;
  m.lambda.resize(d, d);
  m.sigma.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      m.lambda(i, j) = lam_u[i][j].to_double() * scale[j] / scale[i];
      m.sigma(i, j) = sigma_u[i][j].to_double() / (scale[i] * scale[j]);
    }
  Eigen::FullPivLU<Matrix> lu(m.lambda);
  if (!lu.isInvertible())
    throw Singular("exact_condition_moments: lambda not invertible");
  m.lambda_inv_op = operator_norm(lu.inverse());
  m.e_abs_mean = linear_zero ? 0.0 : e_abs;
  m.eprime_hs_mean = eprime;
  m.third_moment = third;
  return out;
}

// Exchangeability of the enumerated pair: the joint law of (state, partner)
// equals its transpose exactly.
template <typename Model>
bool exact_exchangeability_check(const Model& model,
                                 std::uint64_t state_cap = (1ull << 20)) {
  if (model.state_count() > state_cap)
    throw EnumerationTooLarge("exact_exchangeability_check");
  std::map<std::pair<std::uint64_t, std::uint64_t>, Rational> joint;
  model.for_each_state([&](const auto& s, const Rational& p) {
    const std::uint64_t ks = model.state_key(s);
    model.for_each_partner(s, [&](const auto& sp, const Rational& q) {
      joint[{ks, model.state_key(sp)}] += p * q;
    });
  });
  for (const auto& [key, prob] : joint) {
    const auto it = joint.find({key.second, key.first});
    if (it == joint.end() || !(it->second == prob)) return false;
  }
  return true;
}

struct McOptions {
  bool fit_lambda_if_missing = true;
  int batches = 64;
};

// Nested Monte Carlo estimate of the conditional moments. Norm biases are
// removed by the exact jackknife on squared norms (the inner U-statistic
// (1/m(m-1)) sum_{j != j'} <E_j, E_j'>), followed by a signed square root so
// residuals that are truly zero average to zero. Deterministic for fixed seed
// across worker-thread counts.
template <typename Model>
ConditionMoments mc_condition_moments(const Model& model, std::uint64_t outer,
                                      int inner, std::uint64_t seed,
                                      const McOptions& opt = {}) {
  if (inner < 2)
    throw ConfigInvalid("mc_condition_moments: need inner >= 2 replicates");
  if (outer < 2) throw ConfigInvalid("mc_condition_moments: need outer >= 2");
  const int d = model.dim();
  const double m = static_cast<double>(inner);

  // Lambda-free sufficient statistics per outer replicate.
  struct Row {
    Vector x;       // state statistic
    Vector s1;      // sum_j dX_j
    Matrix m2;      // sum_j dX_j dX_jᵀ
    double q1;      // sum_j |dX_j|^2
    double q2;      // sum_j |dX_j|^4
    double t3;      // sum_j |dX_j|^3
  };
  std::vector<Row> rows(outer);
  parallel::run_chunks(outer, [&](std::size_t, parallel::Range r) {
    for (std::uint64_t i = r.begin; i < r.end; ++i) {
      Rng rng(derive_seed(seed, "mc.outer", i));
      const auto state = model.sample_state(rng);
      Row row;
      row.x = model.extract(state);
      row.s1 = Vector::Zero(d);
      row.m2 = Matrix::Zero(d, d);
      row.q1 = row.q2 = row.t3 = 0.0;
      for (int j = 0; j < inner; ++j) {
        const auto partner = model.sample_partner(state, rng);
        const Vector dx = model.extract(partner) - row.x;
        row.s1 += dx;
        row.m2 += dx * dx.transpose();
        const double n2 = dx.squaredNorm();
        row.q1 += n2;
        row.q2 += n2 * n2;
        row.t3 += n2 * std::sqrt(n2);
      }
      rows[i] = std::move(row);
    }
  });

  // Linearity matrix: declared, else least squares of inner means on -X.
  Matrix lambda;
  if (auto dl = model.declared_lambda()) {
    lambda = *dl;
  } else if (opt.fit_lambda_if_missing) {
    Matrix xxt = Matrix::Zero(d, d);
    Matrix mxt = Matrix::Zero(d, d);
    for (const Row& row : rows) {
      xxt += row.x * row.x.transpose();
      mxt += (row.s1 / m) * row.x.transpose();
    }
    Eigen::FullPivLU<Matrix> lu(xxt);
    if (!lu.isInvertible())
      throw Singular("mc_condition_moments: cannot fit lambda, X Gram singular");
    lambda = -mxt * lu.inverse();
  } else {
    throw MissingLambda("mc_condition_moments: no declared lambda and fitting disabled");
  }

  Matrix sigma;
  if (auto ds = model.declared_sigma()) {
    sigma = *ds;
  } else {
    sigma = Matrix::Zero(d, d);
    for (const Row& row : rows) sigma += row.x * row.x.transpose();
    sigma /= static_cast<double>(outer);
  }

  const Matrix ls = lambda * sigma;
  const double ls_hs2 = ls.squaredNorm();

  // Per-replicate bias-corrected statistics.
  const int batches = std::min<int>(opt.batches, static_cast<int>(outer));
  std::vector<double> e_b(batches, 0.0), ep_b(batches, 0.0), t_b(batches, 0.0);
  std::vector<double> cnt(batches, 0.0);
  double e_sum = 0.0, ep_sum = 0.0, t_sum = 0.0;
  for (std::uint64_t i = 0; i < outer; ++i) {
    const Row& row = rows[i];
    const Vector lx = lambda * row.x;
    // q_e unbiased for |E[X'-X|state] + L x|^2.
    const double s1_plus = (row.s1 + m * lx).squaredNorm();
    const double sum_sq = row.q1 + 2.0 * row.s1.dot(lx) + m * lx.squaredNorm();
    const double q_e = (s1_plus - sum_sq) / (m * (m - 1.0));
    const double e_i = (q_e < 0 ? -1.0 : 1.0) * std::sqrt(std::abs(q_e));
    // q_ep unbiased for ||E[dX dXᵀ|state] - 2 L Sigma||_HS^2.
    const double sum_ep = (row.m2 - 2.0 * m * ls).squaredNorm();
    const double sq_ep = row.q2 - 4.0 * hs_inner(row.m2, ls) + 4.0 * m * ls_hs2;
    const double q_ep = (sum_ep - sq_ep) / (m * (m - 1.0));
    const double ep_i = (q_ep < 0 ? -1.0 : 1.0) * std::sqrt(std::abs(q_ep));
    const double t_i = row.t3 / m;

    e_sum += e_i;
    ep_sum += ep_i;
    t_sum += t_i;
    const int b = static_cast<int>((i * static_cast<std::uint64_t>(batches)) / outer);
    e_b[b] += e_i;
    ep_b[b] += ep_i;
    t_b[b] += t_i;
    cnt[b] += 1.0;
  }

  const double n = static_cast<double>(outer);
  auto batch_se = [&](const std::vector<double>& sums, double mean) {
    double var = 0.0;
    int used = 0;
    for (int b = 0; b < batches; ++b) {
      if (cnt[b] == 0.0) continue;
      const double bm = sums[b] / cnt[b];
      var += (bm - mean) * (bm - mean);
      ++used;
    }
    if (used < 2) return 0.0;
    return std::sqrt(var / (used * (used - 1.0)));
  };

  ConditionMoments out;
  out.mode = PairMode::discrete;
  out.lambda = lambda;
  out.sigma = sigma;
  Eigen::FullPivLU<Matrix> lu(lambda);
  if (!lu.isInvertible())
    throw Singular("mc_condition_moments: lambda not invertible");
  out.lambda_inv_op = operator_norm(lu.inverse());
  const double e_mean = e_sum / n, ep_mean = ep_sum / n, t_mean = t_sum / n;
  out.e_abs_se = batch_se(e_b, e_mean);
  out.eprime_se = batch_se(ep_b, ep_mean);
  out.third_se = batch_se(t_b, t_mean);
  out.e_abs_mean = std::max(0.0, e_mean);
  out.eprime_hs_mean = std::max(0.0, ep_mean);
  out.third_moment = std::max(0.0, t_mean);
  out.outer = outer;
  out.inner = static_cast<std::uint64_t>(inner);
  return out;
}

}  // namespace stein
