#include "stein/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "stein/errors.hpp"

namespace stein {

namespace {

// Golub-Welsch: nodes/weights from the symmetric tridiagonal Jacobi matrix.
GaussRule golub_welsch(const Vector& offdiag, double weight_total) {
  const int n = static_cast<int>(offdiag.size()) + 1;
  Matrix j = Matrix::Zero(n, n);
  for (int k = 0; k < n - 1; ++k) {
    j(k, k + 1) = offdiag[k];
    j(k + 1, k) = offdiag[k];
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(j);
  if (es.info() != Eigen::Success)
    throw Error("golub_welsch: eigensolver failed");
  GaussRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = weight_total * v0 * v0;
  }
  return rule;
}

template <typename Maker>
const GaussRule& cached_rule(std::map<int, GaussRule>& cache, std::mutex& mu,
                             int n, Maker make) {
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make(n)).first;
  return it->second;
}

}  // namespace

const GaussRule& gauss_legendre_01(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  return cached_rule(cache, mu, n, [](int m) {
    if (m < 1) throw ConfigInvalid("gauss_legendre_01: need >= 1 node");
    Vector off(m - 1);
    for (int k = 1; k < m; ++k)
      off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    GaussRule rule = golub_welsch(off, 2.0);
    // Affine map [-1,1] -> [0,1].
    for (int i = 0; i < m; ++i) {
      rule.nodes[i] = 0.5 * (rule.nodes[i] + 1.0);
      rule.weights[i] *= 0.5;
    }
    return rule;
  });
}

const GaussRule& gauss_hermite(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  return cached_rule(cache, mu, n, [](int m) {
    if (m < 1) throw ConfigInvalid("gauss_hermite: need >= 1 node");
    Vector off(m - 1);
    for (int k = 1; k < m; ++k) off[k - 1] = std::sqrt(0.5 * k);
    return golub_welsch(off, std::sqrt(M_PI));
  });
}

void tensor_grid(const GaussRule& rule, int dim,
                 const std::function<void(const Vector&, double)>& f) {
  const int n = static_cast<int>(rule.nodes.size());
  std::vector<int> idx(dim, 0);
  Vector z(dim);
  for (;;) {
    double w = 1.0;
    for (int k = 0; k < dim; ++k) {
      z[k] = rule.nodes[idx[k]];
      w *= rule.weights[idx[k]];
    }
    f(z, w);
    int k = dim - 1;
    while (k >= 0 && ++idx[k] == n) idx[k--] = 0;
    if (k < 0) break;
  }
}

double norm_pdf(double x) {
  static const double kInvSqrt2Pi = 0.3989422804014326779;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw ConfigInvalid("norm_quantile: p outside (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement against the exact CDF.
  for (int it = 0; it < 2; ++it) {
    const double e = norm_cdf(x) - p;
    const double u = e / norm_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

HaltonSequence::HaltonSequence(int dim, std::uint64_t seed) {
  static const int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  if (dim < 1 || dim > 20)
    throw ConfigInvalid("HaltonSequence: dim outside [1,20]");
  bases_.assign(kPrimes, kPrimes + dim);
  shift_.resize(dim);
  Rng rng(derive_seed(seed, "halton.shift"));
  for (auto& s : shift_) s = rng.uniform();
}

Vector HaltonSequence::point(std::uint64_t i) const {
  Vector out(dim());
  for (int k = 0; k < dim(); ++k) {
    const int base = bases_[k];
    double f = 1.0, r = 0.0;
    // Skip index 0 so no raw coordinate is exactly the shift value.
    std::uint64_t n = i + 1;
    while (n > 0) {
      f /= base;
      r += f * static_cast<double>(n % base);
      n /= base;
    }
    r += shift_[k];
    r -= std::floor(r);
    // Clamp away from {0,1} so the Gaussian quantile map stays finite.
    out[k] = std::min(std::max(r, 1e-15), 1.0 - 1e-15);
  }
  return out;
}

}  // namespace stein
