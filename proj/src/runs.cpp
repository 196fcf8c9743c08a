#include "stein/runs.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace stein {

namespace {

std::int64_t masked_popcount(const std::vector<std::uint64_t>& buf, int nbits) {
  std::int64_t total = 0;
  const int full = nbits >> 6;
  for (int k = 0; k < full; ++k) total += __builtin_popcountll(buf[k]);
  const int tail = nbits & 63;
  if (tail) total += __builtin_popcountll(buf[full] & ((1ull << tail) - 1ull));
  return total;
}

// Logical shift of the whole bitstring one position towards index zero.
void shift_down_one(std::vector<std::uint64_t>& buf) {
  const std::size_t nw = buf.size();
  for (std::size_t k = 0; k + 1 < nw; ++k)
    buf[k] = (buf[k] >> 1) | (buf[k + 1] << 63);
  buf[nw - 1] >>= 1;
}

}  // namespace

RunsModel::RunsModel(const RunsConfig& cfg) : cfg_(cfg) {
  if (cfg_.d < 2) throw ConfigInvalid("runs: need d >= 2");
  if (cfg_.n < 2 * cfg_.d) throw ConfigInvalid("runs: need n >= 2d");
  if (cfg_.d > 20) throw ConfigInvalid("runs: d > 20 not supported");
  if (cfg_.p_den <= 0 || cfg_.p_num <= 0 || cfg_.p_num >= cfg_.p_den)
    throw ConfigInvalid("runs: need 0 < p < 1");
  const long long g = std::gcd(cfg_.p_num, cfg_.p_den);
  cfg_.p_num /= g;
  cfg_.p_den /= g;
  half_ = (cfg_.p_num * 2 == cfg_.p_den);
  words_ = (cfg_.n + 63) / 64;
  ext_words_ = (cfg_.n + cfg_.d - 1 + 63) / 64;

  const double p = cfg_.p();
  np_pow_.resize(cfg_.d + 1);
  denom_.resize(cfg_.d + 1);
  for (int i = 0; i <= cfg_.d; ++i) {
    np_pow_[i] = cfg_.n * std::pow(p, i);
    denom_[i] = std::sqrt(np_pow_[i] * (1.0 - p));
  }

  const Rational pr{cfg_.p_num, cfg_.p_den};
  const Rational qr = Rational{1} - pr;
  p_pow_.push_back(Rational{1});
  q_pow_.push_back(Rational{1});
  for (int k = 1; k <= cfg_.n; ++k) {
    // Deep powers serve exact enumeration only; stop where i128 ends.
    try {
      p_pow_.push_back(p_pow_.back() * pr);
      q_pow_.push_back(q_pow_.back() * qr);
    } catch (const Error&) {
      if (p_pow_.size() != q_pow_.size()) p_pow_.pop_back();
      break;
    }
  }
  if (static_cast<int>(p_pow_.size()) <= cfg_.d)
    throw ConfigInvalid("runs: p is too extreme for exact window probabilities");
  v_shift_.resize(cfg_.d + 1);
  for (int i = 1; i <= cfg_.d; ++i) v_shift_[i] = Rational{cfg_.n} * p_pow_[i];
}

RunsModel::State RunsModel::sample_state(Rng& rng) const {
  State s(words_, 0);
  if (half_) {
    for (int k = 0; k < words_; ++k) s[k] = rng.next_u64();
    const int tail = cfg_.n & 63;
    if (tail) s[words_ - 1] &= (1ull << tail) - 1ull;
  } else {
    for (int pos = 0; pos < cfg_.n; ++pos)
      if (rng.bernoulli(cfg_.p_num, cfg_.p_den)) s[pos >> 6] |= 1ull << (pos & 63);
  }
  return s;
}

RunsModel::State RunsModel::sample_partner(const State& s, Rng& rng) const {
  State t = s;
  const int start = static_cast<int>(rng.uniform_below(cfg_.n));
  for (int b = 0; b < cfg_.d - 1; ++b) {
    const int pos = (start + b) % cfg_.n;
    const bool one = half_ ? (rng.next_u64() >> 63)
                           : rng.bernoulli(cfg_.p_num, cfg_.p_den);
    if (one)
      t[pos >> 6] |= 1ull << (pos & 63);
    else
      t[pos >> 6] &= ~(1ull << (pos & 63));
  }
  return t;
}

void RunsModel::window_counts(const State& s, std::int64_t* counts) const {
  // Extend by the first d-1 bits so cyclic windows become plain windows.
  std::vector<std::uint64_t> ext(ext_words_, 0);
  for (int k = 0; k < words_; ++k) ext[k] = s[k];
  for (int t = 0; t < cfg_.d - 1; ++t)
    if (get_bit(s, t)) {
      const int pos = cfg_.n + t;
      ext[pos >> 6] |= 1ull << (pos & 63);
    }
  std::vector<std::uint64_t> acc = ext;
  std::vector<std::uint64_t> cur = ext;
  counts[0] = masked_popcount(acc, cfg_.n);
  for (int i = 2; i <= cfg_.d; ++i) {
    shift_down_one(cur);
    for (int k = 0; k < ext_words_; ++k) acc[k] &= cur[k];
    counts[i - 1] = masked_popcount(acc, cfg_.n);
  }
}

Vector RunsModel::extract(const State& s) const {
  std::vector<std::int64_t> counts(cfg_.d);
  window_counts(s, counts.data());
  Vector w(cfg_.d);
  for (int i = 1; i <= cfg_.d; ++i)
    w[i - 1] = (static_cast<double>(counts[i - 1]) - np_pow_[i]) / denom_[i];
  return w;
}

std::optional<Matrix> RunsModel::declared_lambda() const {
  return runs_lambda(cfg_);
}

std::optional<Matrix> RunsModel::declared_sigma() const {
  return runs_sigma(cfg_);
}

std::uint64_t RunsModel::state_count() const {
  if (cfg_.n >= 63) return ~0ull;  // past any enumeration cap
  return 1ull << cfg_.n;
}

std::vector<Rational> RunsModel::stat_exact(const State& s) const {
  std::vector<std::int64_t> counts(cfg_.d);
  window_counts(s, counts.data());
  std::vector<Rational> v(cfg_.d);
  for (int i = 1; i <= cfg_.d; ++i)
    v[i - 1] = Rational{counts[i - 1]} - v_shift_[i];
  return v;
}

Vector RunsModel::stat_scale() const {
  Vector out(cfg_.d);
  for (int i = 1; i <= cfg_.d; ++i) out[i - 1] = denom_[i];
  return out;
}

std::vector<std::vector<Rational>> RunsModel::lambda_exact() const {
  const int d = cfg_.d;
  std::vector<std::vector<Rational>> lam(d, std::vector<Rational>(d));
  for (int i = 1; i <= d; ++i) {
    lam[i - 1][i - 1] = Rational{d + i - 2, cfg_.n};
    for (int k = 1; k < i; ++k)
      lam[i - 1][k - 1] = Rational{-2, cfg_.n} * p_pow_[i - k];
  }
  return lam;
}

std::uint64_t RunsModel::state_key(const State& s) const {
  if (words_ != 1) throw EnumerationTooLarge("runs: state_key needs n <= 64");
  return s[0];
}

Matrix runs_sigma(const RunsConfig& cfg) {
  const int d = cfg.d;
  const double p = cfg.p();
  Matrix sigma(d, d);
  for (int i = 1; i <= d; ++i)
    for (int j = 1; j <= d; ++j) {
      const int gap = std::abs(i - j);
      const int mn = std::min(i, j);
      double sum = 0.0;
      for (int k = 0; k < mn; ++k)
        sum += (gap + 1 + 2 * k) * std::pow(p, k);
      sigma(i - 1, j - 1) = std::pow(p, gap / 2.0) * sum;
    }
  return sigma;
}

Matrix runs_lambda(const RunsConfig& cfg) {
  const int d = cfg.d;
  const double p = cfg.p();
  Matrix lam = Matrix::Zero(d, d);
  for (int i = 1; i <= d; ++i) {
    lam(i - 1, i - 1) = static_cast<double>(d + i - 2) / cfg.n;
    for (int k = 1; k < i; ++k)
      lam(i - 1, k - 1) = -2.0 * std::pow(p, (i - k) / 2.0) / cfg.n;
  }
  return lam;
}

LambdaInvChain runs_lambda_inv_chain(const RunsConfig& cfg) {
  LambdaInvChain out;
  const Matrix lam = runs_lambda(cfg);
  Eigen::FullPivLU<Matrix> lu(lam);
  if (!lu.isInvertible()) throw Singular("runs: lambda not invertible");
  out.exact = operator_norm(lu.inverse());
  const double p = cfg.p();
  const double d = cfg.d;
  const double n = cfg.n;
  out.analytic = (n / (d - 1.0)) * std::pow(1.0 + 2.0 * std::sqrt(p) / (d - 1.0), d - 1.0);
  out.exponential = n * std::exp(2.0 * std::sqrt(p)) / (d - 1.0);
  out.coarse = 15.0 * n / d;
  return out;
}

RunsErrorBounds runs_error_bounds(const RunsConfig& cfg) {
  const double p = cfg.p();
  const double q = 1.0 - p;
  const double d = cfg.d;
  const double n = cfg.n;
  RunsErrorBounds out;
  out.var_eprime = 96.0 * std::pow(d, 5) / (std::pow(n, 3) * std::pow(p, 2 * d) * q * q);
  out.eprime = 4.0 * std::sqrt(6.0) * std::pow(d, 3.5) /
               (std::pow(n, 1.5) * std::pow(p, d) * q);
  out.third = 8.0 * std::pow(d, 4.5) /
              (std::pow(n, 1.5) * std::pow(p, 1.5 * d) * std::pow(q, 1.5));
  return out;
}

double runs_theorem_bound(const RunsConfig& cfg, double m2, double m3) {
  const double p = cfg.p();
  const double q = 1.0 - p;
  const double d = cfg.d;
  const double n = cfg.n;
  const double t1 = 15.0 * std::sqrt(6.0) * std::pow(d, 3) * m2 /
                    (std::pow(p, d) * q * std::sqrt(n));
  const double t2 = 40.0 * std::pow(d, 3.5) * m3 /
                    (3.0 * std::pow(p, 1.5 * d) * std::pow(q, 1.5) * std::sqrt(n));
  return t1 + t2;
}

}  // namespace stein
