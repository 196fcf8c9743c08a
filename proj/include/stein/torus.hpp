#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stein/gaussian.hpp"
#include "stein/matrix.hpp"
#include "stein/pair_model.hpp"
#include "stein/rng.hpp"

namespace stein {

// Flat torus [0,1)^n carrying the constant metric B (symmetric positive
// definite). Laplace eigenfunctions are combinations of plane waves
// exp(2 pi i <Bv, x>) with v integer-frequency; the wave has eigenvalue
// mu = (2 pi)^2 <v, Bv>. frame maps the Euclidean unit sphere to the B-unit
// sphere: frame = L^-T for B = L L^T, so directions V = frame u satisfy
// <V, BV> = |u|^2.
struct TorusConfig {
  int n = 0;
  Matrix b;
  Matrix frame;
};

TorusConfig make_torus_config(int n, const Matrix& b);

// One eigenspace slice: integer frequency vectors (columns) sharing the
// eigenvalue mu, with B v precomputed.
struct FrequencySet {
  Matrix vectors;
  Matrix bv;
  double mu = 0;
  int count = 0;
};

// Structural checks on candidate frequency sets. Returns human-readable
// violation messages; empty means valid. Checks per set: nonempty, dimension,
// nonzero vectors, B v integral, common <v, Bv>; across the union: no
// duplicates and no pair summing to zero.
std::vector<std::string> validate_frequency_sets(const TorusConfig& cfg,
                                                 const std::vector<Matrix>& sets,
                                                 double tol = 1e-9);

// W_r(x) = sum_v a_v cos(2 pi <Bv, x>) over the r-th set, coefficients on the
// sphere sum a_v^2 = 2 so that each W_r has unit variance under uniform x.
class EigenSystem {
 public:
  EigenSystem(const TorusConfig& cfg, const std::vector<Matrix>& sets,
              const std::vector<Vector>& coeffs);
  static EigenSystem random_coefficients(const TorusConfig& cfg,
                                         const std::vector<Matrix>& sets,
                                         std::uint64_t seed);

  int torus_dim() const { return cfg_.n; }
  int stat_dim() const { return static_cast<int>(sets_.size()); }
  const TorusConfig& config() const { return cfg_; }
  const std::vector<FrequencySet>& sets() const { return sets_; }
  const Vector& coeffs(int r) const { return coeffs_[r]; }
  double mu(int r) const { return sets_[r].mu; }
  double mu_min() const;

  Matrix lambda() const;        // diag(mu_r) / (2n)
  double lambda_inv_op() const; // 2n / min mu

  double eval_fn(int r, const Vector& x) const;
  Vector eval_w(const Vector& x) const;

  // <grad f_r, grad f_s> in the B-metric, closed form (no differentiation).
  double gradient_inner(int r, int s, const Vector& x) const;
  Matrix gradient_gram(const Vector& x) const;

  Vector random_point(Rng& rng) const;
  Vector geodesic_direction(Rng& rng) const;
  // x + eps * dir, wrapped back into [0,1)^n.
  Vector geodesic_step(const Vector& x, double eps, const Vector& dir) const;

 private:
  TorusConfig cfg_;
  std::vector<FrequencySet> sets_;
  std::vector<Vector> coeffs_;
  // gram_[r][s](a, b) = <v_a, B w_b> for v_a in set r, w_b in set s.
  std::vector<std::vector<Matrix>> gram_;
};

// Small-step moment extraction: for each epsilon the direction-averaged drift
// and quadratic variation of W along geodesic steps, extrapolated to eps -> 0
// (Neville in eps^2). Direction averages are deterministic quadrature for
// n <= 2 and Monte Carlo for higher dimension.
struct InfinitesimalSpec {
  std::vector<double> epsilons{1e-2, 5e-3, 2.5e-3};
  std::uint64_t samples = 20000;
  int circle_nodes = 64;
  std::uint64_t dir_samples = 256;
  std::uint64_t seed = 11;
  int batches = 64;
};

struct InfinitesimalReport {
  ConditionMoments moments;
  struct Level {
    double eps = 0;
    double drift_resid = 0;   // E_x |drift(eps) + Lambda W|
    double quad_resid = 0;    // E_x |quad(eps) - (1/n) gradient gram|_HS
    double third_scaled = 0;  // E_x E_V |dW|^3 / eps^2, should vanish linearly
  };
  std::vector<Level> levels;
  double drift_resid_extrap = 0;
  double quad_resid_extrap = 0;
  bool third_contracts = false;
};

InfinitesimalReport infinitesimal_moments(const EigenSystem& sys,
                                          const InfinitesimalSpec& spec = {});

// Monte Carlo estimate of (1 / min mu) E_x |gradient gram - diag(mu)|_HS, the
// sampled form of the eigenfunction distance bound.
Estimate eigenfunction_theorem_bound(const EigenSystem& sys,
                                     std::uint64_t samples, std::uint64_t seed);

// Closed form (4 pi^2 / min mu) sqrt(T) with
// T = sum_{r,s} (2 / (N_r N_s)) sum_{v,w} <v, Bw>^2.
double torus_theorem_bound(const EigenSystem& sys);

// The moment bound inside the closed form: E |E'|_HS <= (4 pi^2 / n) sqrt(T).
double averaged_eprime_closed_form(const EigenSystem& sys);

}  // namespace stein
