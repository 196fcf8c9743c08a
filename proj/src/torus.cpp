#include "stein/torus.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "stein/errors.hpp"
#include "stein/parallel.hpp"

namespace stein {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Integer key for a frequency via its (validated integral) image Bv.
std::vector<long long> bv_key(const Vector& bv) {
  std::vector<long long> key(bv.size());
  for (int i = 0; i < bv.size(); ++i) key[i] = std::llround(bv[i]);
  return key;
}

// Polynomial extrapolation to h = 0 (Neville). Works for scalars and Eigen
// types alike; h must be distinct positive values.
template <typename T>
T neville_at_zero(const std::vector<double>& h, std::vector<T> y) {
  // After stage m-1, y[j] holds the degree-(m-1) fit through nodes j..j+m-1;
  // stage m merges neighbours, so the partner is y[j+1], not y[j+m].
  const int levels = static_cast<int>(y.size());
  for (int m = 1; m < levels; ++m)
    for (int j = 0; j + m < levels; ++j)
      y[j] = (h[j] * y[j + 1] - h[j + m] * y[j]) * (1.0 / (h[j] - h[j + m]));
  return y[0];
}

}  // namespace

TorusConfig make_torus_config(int n, const Matrix& b) {
  if (n < 1) throw ConfigInvalid("torus: need n >= 1");
  if (b.rows() != n || b.cols() != n)
    throw DimensionMismatch("torus: metric must be n x n");
  const Matrix bs = SymMatrix(b).mat();
  PsdMatrix pb(bs);
  if (!pb.is_invertible())
    throw Singular("torus: metric must be positive definite");
  Eigen::LLT<Matrix> llt(bs);
  if (llt.info() != Eigen::Success)
    throw NotPsd("torus: metric Cholesky failed");
  TorusConfig cfg;
  cfg.n = n;
  cfg.b = bs;
  cfg.frame = Matrix(llt.matrixU()).triangularView<Eigen::Upper>().solve(
      Matrix::Identity(n, n));
  return cfg;
}

std::vector<std::string> validate_frequency_sets(const TorusConfig& cfg,
                                                 const std::vector<Matrix>& sets,
                                                 double tol) {
  std::vector<std::string> bad;
  if (sets.empty()) {
    bad.push_back("no frequency sets given");
    return bad;
  }
  std::map<std::vector<long long>, int> seen;  // key -> set index
  for (std::size_t r = 0; r < sets.size(); ++r) {
    const Matrix& v = sets[r];
    const std::string tag = "set " + std::to_string(r) + ": ";
    if (v.cols() == 0) {
      bad.push_back(tag + "empty");
      continue;
    }
    if (v.rows() != cfg.n) {
      bad.push_back(tag + "vectors are not dimension " + std::to_string(cfg.n));
      continue;
    }
    const Matrix bv = cfg.b * v;
    double mu0 = 0.0;
    for (int c = 0; c < v.cols(); ++c) {
      const Vector col = v.col(c);
      const Vector bcol = bv.col(c);
      if (col.norm() < tol) {
        bad.push_back(tag + "zero frequency vector");
        continue;
      }
      for (int i = 0; i < cfg.n; ++i)
        if (std::abs(bcol[i] - std::llround(bcol[i])) > tol) {
          bad.push_back(tag + "B v is not integral at column " + std::to_string(c));
          break;
        }
      const double q = col.dot(bcol);
      if (c == 0)
        mu0 = q;
      else if (std::abs(q - mu0) > tol * (1.0 + std::abs(mu0)))
        bad.push_back(tag + "mixed eigenvalues inside one set");
      const auto key = bv_key(bcol);
      const auto it = seen.find(key);
      if (it != seen.end())
        bad.push_back(tag + "duplicate frequency also in set " +
                      std::to_string(it->second));
      else
        seen.emplace(key, static_cast<int>(r));
    }
  }
  // No pair across the union may sum to zero, else the combined wave
  // degenerates to a constant.
  for (const auto& [key, idx] : seen) {
    std::vector<long long> neg(key.size());
    for (std::size_t i = 0; i < key.size(); ++i) neg[i] = -key[i];
    const auto it = seen.find(neg);
    if (it != seen.end() && key <= neg)
      bad.push_back("sets " + std::to_string(idx) + " and " +
                    std::to_string(it->second) + ": frequencies sum to zero");
  }
  return bad;
}

EigenSystem::EigenSystem(const TorusConfig& cfg, const std::vector<Matrix>& sets,
                         const std::vector<Vector>& coeffs)
    : cfg_(cfg) {
  const auto bad = validate_frequency_sets(cfg, sets);
  if (!bad.empty()) throw ConfigInvalid("torus: " + bad.front());
  if (coeffs.size() != sets.size())
    throw ConfigInvalid("torus: one coefficient vector per set required");
  sets_.reserve(sets.size());
  for (std::size_t r = 0; r < sets.size(); ++r) {
    FrequencySet fs;
    fs.vectors = sets[r];
    fs.bv = cfg.b * sets[r];
    fs.count = static_cast<int>(sets[r].cols());
    fs.mu = 4.0 * kPi * kPi * sets[r].col(0).dot(fs.bv.col(0));
    sets_.push_back(std::move(fs));
    if (coeffs[r].size() != sets_[r].count)
      throw ConfigInvalid("torus: coefficient count mismatch in set " +
                          std::to_string(r));
    const double s2 = coeffs[r].squaredNorm();
    if (std::abs(s2 - 2.0) > 1e-9)
      throw ConfigInvalid("torus: coefficients must satisfy sum a^2 = 2");
  }
  coeffs_ = coeffs;
  const int k = stat_dim();
  gram_.assign(k, std::vector<Matrix>(k));
  for (int r = 0; r < k; ++r)
    for (int s = 0; s < k; ++s)
      gram_[r][s] = sets_[r].vectors.transpose() * sets_[s].bv;
}

EigenSystem EigenSystem::random_coefficients(const TorusConfig& cfg,
                                             const std::vector<Matrix>& sets,
                                             std::uint64_t seed) {
  std::vector<Vector> coeffs;
  coeffs.reserve(sets.size());
  for (std::size_t r = 0; r < sets.size(); ++r) {
    Rng rng(derive_seed(seed, "torus.coeffs", r));
    coeffs.push_back(std::sqrt(2.0) *
                     rng.unit_vector(static_cast<int>(sets[r].cols())));
  }
  return EigenSystem(cfg, sets, coeffs);
}

double EigenSystem::mu_min() const {
  double m = sets_[0].mu;
  for (const auto& fs : sets_) m = std::min(m, fs.mu);
  return m;
}

Matrix EigenSystem::lambda() const {
  const int k = stat_dim();
  Matrix lam = Matrix::Zero(k, k);
  for (int r = 0; r < k; ++r) lam(r, r) = sets_[r].mu / (2.0 * cfg_.n);
  return lam;
}

double EigenSystem::lambda_inv_op() const { return 2.0 * cfg_.n / mu_min(); }

double EigenSystem::eval_fn(int r, const Vector& x) const {
  const FrequencySet& fs = sets_[r];
  double out = 0.0;
  for (int c = 0; c < fs.count; ++c)
    out += coeffs_[r][c] * std::cos(kTwoPi * fs.bv.col(c).dot(x));
  return out;
}

Vector EigenSystem::eval_w(const Vector& x) const {
  Vector w(stat_dim());
  for (int r = 0; r < stat_dim(); ++r) w[r] = eval_fn(r, x);
  return w;
}

double EigenSystem::gradient_inner(int r, int s, const Vector& x) const {
  const FrequencySet& fr = sets_[r];
  const FrequencySet& fs = sets_[s];
  const Vector ar = kTwoPi * (fr.bv.transpose() * x);
  const Vector as = kTwoPi * (fs.bv.transpose() * x);
  double out = 0.0;
  for (int a = 0; a < fr.count; ++a)
    for (int b = 0; b < fs.count; ++b)
      out += coeffs_[r][a] * coeffs_[s][b] * gram_[r][s](a, b) *
             (std::cos(ar[a] - as[b]) - std::cos(ar[a] + as[b]));
  return 2.0 * kPi * kPi * out;
}

Matrix EigenSystem::gradient_gram(const Vector& x) const {
  const int k = stat_dim();
  Matrix g(k, k);
  for (int r = 0; r < k; ++r) {
    g(r, r) = gradient_inner(r, r, x);
    for (int s = r + 1; s < k; ++s) g(r, s) = g(s, r) = gradient_inner(r, s, x);
  }
  return g;
}

Vector EigenSystem::random_point(Rng& rng) const {
  Vector x(cfg_.n);
  for (int i = 0; i < cfg_.n; ++i) x[i] = rng.uniform();
  return x;
}

Vector EigenSystem::geodesic_direction(Rng& rng) const {
  return cfg_.frame * rng.unit_vector(cfg_.n);
}

Vector EigenSystem::geodesic_step(const Vector& x, double eps,
                                  const Vector& dir) const {
  Vector y = x + eps * dir;
  for (int i = 0; i < cfg_.n; ++i) y[i] -= std::floor(y[i]);
  return y;
}

InfinitesimalReport infinitesimal_moments(const EigenSystem& sys,
                                          const InfinitesimalSpec& spec) {
  const int k = sys.stat_dim();
  const int n = sys.torus_dim();
  const int levels = static_cast<int>(spec.epsilons.size());
  if (levels < 1 || spec.samples < 2)
    throw ConfigInvalid("infinitesimal_moments: need epsilons and samples >= 2");
  for (double e : spec.epsilons)
    if (!(e > 0)) throw ConfigInvalid("infinitesimal_moments: eps must be positive");

  const Matrix lam = sys.lambda();
  const Matrix two_ls = 2.0 * lam;  // target covariance is the identity
  std::vector<double> h(levels);
  for (int l = 0; l < levels; ++l) h[l] = spec.epsilons[l] * spec.epsilons[l];

  struct Row {
    double e = 0, ep = 0, t = 0, qx = 0;
    std::vector<double> dr, qr, ts;
  };
  std::vector<Row> rows(spec.samples);

  parallel::run_chunks(spec.samples, [&](std::size_t, parallel::Range range) {
    for (std::uint64_t i = range.begin; i < range.end; ++i) {
      Rng rx(derive_seed(spec.seed, "inf.x", i));
      const Vector x = sys.random_point(rx);
      const Vector w = sys.eval_w(x);
      const Matrix gram_limit = sys.gradient_gram(x) / n;

      // Direction set shared by all eps levels of this sample.
      std::vector<Vector> dirs;
      std::vector<double> wts;
      if (n == 1) {
        dirs = {sys.config().frame.col(0), -sys.config().frame.col(0)};
        wts = {0.5, 0.5};
      } else if (n == 2) {
        dirs.reserve(spec.circle_nodes);
        for (int c = 0; c < spec.circle_nodes; ++c) {
          const double th = kTwoPi * c / spec.circle_nodes;
          Vector u(2);
          u << std::cos(th), std::sin(th);
          dirs.push_back(sys.config().frame * u);
          wts.push_back(1.0 / spec.circle_nodes);
        }
      } else {
        Rng rd(derive_seed(spec.seed, "inf.dirs", i));
        dirs.reserve(spec.dir_samples);
        for (std::uint64_t c = 0; c < spec.dir_samples; ++c) {
          dirs.push_back(sys.geodesic_direction(rd));
          wts.push_back(1.0 / static_cast<double>(spec.dir_samples));
        }
      }

      std::vector<Vector> drift(levels, Vector::Zero(k));
      std::vector<Matrix> quad(levels, Matrix::Zero(k, k));
      std::vector<double> third(levels, 0.0);
      for (int l = 0; l < levels; ++l) {
        const double eps = spec.epsilons[l];
        for (std::size_t c = 0; c < dirs.size(); ++c) {
          const Vector dw = sys.eval_w(sys.geodesic_step(x, eps, dirs[c])) - w;
          drift[l] += wts[c] * dw;
          quad[l] += wts[c] * (dw * dw.transpose());
          third[l] += wts[c] * std::pow(dw.norm(), 3);
        }
        drift[l] /= h[l];
        quad[l] /= h[l];
        third[l] /= h[l];
      }

      Row row;
      row.dr.resize(levels);
      row.qr.resize(levels);
      row.ts.resize(levels);
      for (int l = 0; l < levels; ++l) {
        row.dr[l] = (drift[l] + lam * w).norm();
        row.qr[l] = (quad[l] - gram_limit).norm();
        row.ts[l] = third[l];
      }
      const Vector drift_ex = neville_at_zero(h, drift);
      const Matrix quad_ex = neville_at_zero(h, quad);
      row.e = (drift_ex + lam * w).norm();
      row.ep = (quad_ex - two_ls).norm();
      row.qx = (quad_ex - gram_limit).norm();
      row.t = third[levels - 1];
      rows[i] = std::move(row);
    }
  });

  // Reduce with fixed batch boundaries so the result is thread-count free.
  const std::uint64_t n_rows = spec.samples;
  const int batches = std::min<int>(spec.batches, static_cast<int>(n_rows));
  auto mean_se = [&](auto&& get) {
    std::vector<double> bsum(batches, 0.0), bcnt(batches, 0.0);
    double total = 0.0;
    for (std::uint64_t i = 0; i < n_rows; ++i) {
      const double v = get(rows[i]);
      total += v;
      const int b = static_cast<int>((i * static_cast<std::uint64_t>(batches)) / n_rows);
      bsum[b] += v;
      bcnt[b] += 1.0;
    }
    const double mean = total / static_cast<double>(n_rows);
    double var = 0.0;
    int used = 0;
    for (int b = 0; b < batches; ++b) {
      if (bcnt[b] == 0.0) continue;
      const double bm = bsum[b] / bcnt[b];
      var += (bm - mean) * (bm - mean);
      ++used;
    }
    const double se = used > 1 ? std::sqrt(var / (used * (used - 1.0))) : 0.0;
    return std::pair<double, double>(mean, se);
  };

  InfinitesimalReport rep;
  rep.levels.resize(levels);
  for (int l = 0; l < levels; ++l) {
    rep.levels[l].eps = spec.epsilons[l];
    rep.levels[l].drift_resid = mean_se([l](const Row& r) { return r.dr[l]; }).first;
    rep.levels[l].quad_resid = mean_se([l](const Row& r) { return r.qr[l]; }).first;
    rep.levels[l].third_scaled = mean_se([l](const Row& r) { return r.ts[l]; }).first;
  }
  const auto [e_mean, e_se] = mean_se([](const Row& r) { return r.e; });
  const auto [ep_mean, ep_se] = mean_se([](const Row& r) { return r.ep; });
  const auto [t_mean, t_se] = mean_se([](const Row& r) { return r.t; });
  rep.drift_resid_extrap = e_mean;
  rep.quad_resid_extrap = mean_se([](const Row& r) { return r.qx; }).first;

  // A diverging extrapolation table would show up as the extrapolated drift
  // residual exceeding the finest raw level by a wide margin.
  if (levels >= 2 &&
      rep.drift_resid_extrap > 10.0 * rep.levels.back().drift_resid + 1e-9)
    throw NoConvergence("infinitesimal_moments: extrapolation diverged");

  rep.third_contracts = true;
  for (int l = 1; l < levels; ++l)
    if (!(rep.levels[l].third_scaled <
          0.75 * rep.levels[l - 1].third_scaled + 1e-12))
      rep.third_contracts = false;

  ConditionMoments& m = rep.moments;
  m.mode = PairMode::infinitesimal;
  m.lambda = lam;
  m.sigma = Matrix::Identity(k, k);
  m.lambda_inv_op = sys.lambda_inv_op();
  m.e_abs_mean = e_mean;
  m.e_abs_se = e_se;
  m.eprime_hs_mean = ep_mean;
  m.eprime_se = ep_se;
  m.third_moment = t_mean;
  m.third_se = t_se;
  m.outer = spec.samples;
  m.inner = static_cast<std::uint64_t>(n <= 2 ? (n == 1 ? 2 : spec.circle_nodes)
                                              : spec.dir_samples);
  return rep;
}

Estimate eigenfunction_theorem_bound(const EigenSystem& sys,
                                     std::uint64_t samples, std::uint64_t seed) {
  if (samples < 2) throw ConfigInvalid("eigenfunction_theorem_bound: samples >= 2");
  const int k = sys.stat_dim();
  Matrix target = Matrix::Zero(k, k);
  for (int r = 0; r < k; ++r) target(r, r) = sys.mu(r);
  std::vector<double> vals(samples);
  parallel::run_chunks(samples, [&](std::size_t, parallel::Range range) {
    for (std::uint64_t i = range.begin; i < range.end; ++i) {
      Rng rng(derive_seed(seed, "thm.x", i));
      const Vector x = sys.random_point(rng);
      vals[i] = (sys.gradient_gram(x) - target).norm() / sys.mu_min();
    }
  });
  const int batches = std::min<int>(64, static_cast<int>(samples));
  std::vector<double> bsum(batches, 0.0), bcnt(batches, 0.0);
  double total = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    total += vals[i];
    const int b = static_cast<int>((i * static_cast<std::uint64_t>(batches)) / samples);
    bsum[b] += vals[i];
    bcnt[b] += 1.0;
  }
  const double mean = total / static_cast<double>(samples);
  double var = 0.0;
  int used = 0;
  for (int b = 0; b < batches; ++b) {
    if (bcnt[b] == 0.0) continue;
    const double bm = bsum[b] / bcnt[b];
    var += (bm - mean) * (bm - mean);
    ++used;
  }
  return {mean, used > 1 ? std::sqrt(var / (used * (used - 1.0))) : 0.0};
}

double torus_theorem_bound(const EigenSystem& sys) {
  const auto& sets = sys.sets();
  const int k = sys.stat_dim();
  double t = 0.0;
  for (int r = 0; r < k; ++r)
    for (int s = 0; s < k; ++s) {
      const double cross = (sets[r].vectors.transpose() * sets[s].bv).squaredNorm();
      t += 2.0 / (static_cast<double>(sets[r].count) * sets[s].count) * cross;
    }
  return 4.0 * kPi * kPi / sys.mu_min() * std::sqrt(t);
}

double averaged_eprime_closed_form(const EigenSystem& sys) {
  // Same T as the closed-form bound; the bound equals
  // |L^-1| * (1/2) * this, with |L^-1| = 2n / min mu.
  return torus_theorem_bound(sys) * sys.mu_min() / sys.torus_dim();
}

}  // namespace stein
