#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stein/errors.hpp"
#include "stein/matrix.hpp"
#include "stein/rational.hpp"
#include "stein/rng.hpp"

namespace stein {

// Cyclic binary sequence of length n with success probability p = p_num/p_den.
// The statistic counts runs of ones: for each window length i = 1..d, V_i is
// the centered number of cyclic all-ones windows and W_i its normalization by
// sqrt(n p^i (1-p)). One exchangeable move redraws a uniformly placed block of
// d-1 consecutive sites.
struct RunsConfig {
  int n = 0;
  int d = 2;
  long long p_num = 1;
  long long p_den = 2;
  double p() const {
    return static_cast<double>(p_num) / static_cast<double>(p_den);
  }
};

class RunsModel {
 public:
  using State = std::vector<std::uint64_t>;  // packed bits, little-endian words

  explicit RunsModel(const RunsConfig& cfg);

  int dim() const { return cfg_.d; }
  const RunsConfig& config() const { return cfg_; }

  State sample_state(Rng& rng) const;
  State sample_partner(const State& s, Rng& rng) const;
  Vector extract(const State& s) const;
  std::optional<Matrix> declared_lambda() const;
  std::optional<Matrix> declared_sigma() const;

  // counts[i-1] = number of cyclic all-ones windows of length i, i = 1..d.
  void window_counts(const State& s, std::int64_t* counts) const;

  // Exact-enumeration interface at the unscaled statistic V.
  std::uint64_t state_count() const;
  std::vector<Rational> stat_exact(const State& s) const;
  Vector stat_scale() const;
  std::vector<std::vector<Rational>> lambda_exact() const;
  std::uint64_t state_key(const State& s) const;

  template <typename F>
  void for_each_state(F&& f) const {
    const std::uint64_t total = state_count();
    if (total == ~0ull || static_cast<int>(p_pow_.size()) <= cfg_.n)
      throw EnumerationTooLarge("runs: exact enumeration out of range");
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      State s{mask};
      const int ones = __builtin_popcountll(mask);
      f(s, p_pow_[ones] * q_pow_[cfg_.n - ones]);
    }
  }

  template <typename F>
  void for_each_partner(const State& s, F&& f) const {
    const int block = cfg_.d - 1;
    const Rational site{1, cfg_.n};
    for (int start = 0; start < cfg_.n; ++start) {
      for (std::uint32_t pattern = 0; pattern < (1u << block); ++pattern) {
        State t = s;
        int ones = 0;
        for (int b = 0; b < block; ++b) {
          const int pos = (start + b) % cfg_.n;
          if (pattern & (1u << b)) {
            ++ones;
            t[pos >> 6] |= (1ull << (pos & 63));
          } else {
            t[pos >> 6] &= ~(1ull << (pos & 63));
          }
        }
        f(t, site * p_pow_[ones] * q_pow_[block - ones]);
      }
    }
  }

 private:
  bool get_bit(const State& s, int pos) const {
    return (s[pos >> 6] >> (pos & 63)) & 1ull;
  }

  RunsConfig cfg_;
  int words_ = 0;
  int ext_words_ = 0;
  bool half_ = false;                // p == 1/2 fast sampling path
  std::vector<double> np_pow_;       // n p^i, i = 0..d
  std::vector<double> denom_;        // sqrt(n p^i (1-p)), i = 1..d
  std::vector<Rational> p_pow_;      // p^k, k = 0..n
  std::vector<Rational> q_pow_;      // (1-p)^k, k = 0..n
  std::vector<Rational> v_shift_;    // n p^i, i = 1..d
};

// Target covariance of W (declared closed form).
Matrix runs_sigma(const RunsConfig& cfg);

// Linearity matrix of W for the block-redraw pair: E[W'-W|W] = -L W.
Matrix runs_lambda(const RunsConfig& cfg);

// |L^-1|_op together with its closed-form relaxations, in proof order:
// exact <= analytic <= exponential <= coarse.
struct LambdaInvChain {
  double exact = 0;
  double analytic = 0;      // (n/(d-1)) (1 + 2 sqrt(p)/(d-1))^(d-1)
  double exponential = 0;   // n e^{2 sqrt(p)} / (d-1)
  double coarse = 0;        // 15 n / d
};
LambdaInvChain runs_lambda_inv_chain(const RunsConfig& cfg);

// A priori moment bounds for this pair (no sampling involved).
struct RunsErrorBounds {
  double var_eprime = 0;  // Var |E'|_HS <= 96 d^5 / (n^3 p^{2d} (1-p)^2)
  double eprime = 0;      // E |E'|_HS <= 4 sqrt(6) d^{7/2} / (n^{3/2} p^d (1-p))
  double third = 0;       // E |dW|^3  <= 8 d^{9/2} / (n^{3/2} p^{3d/2} (1-p)^{3/2})
};
RunsErrorBounds runs_error_bounds(const RunsConfig& cfg);

// Closed-form distance bound for the runs statistic with seminorm budget
// (M2, M3); decays like 1/sqrt(n) at fixed d and p.
double runs_theorem_bound(const RunsConfig& cfg, double m2, double m3);

}  // namespace stein
