#include "stein/gaussian.hpp"

#include <cmath>

namespace stein {

namespace {

double tensor_gh_expect(const std::function<double(const Vector&)>& g,
                        const GaussianLaw& law, int nodes) {
  const int d = law.dim();
  const GaussRule& rule = gauss_hermite(nodes);
  const Matrix& s = law.sqrt();
  const double norm = std::pow(M_PI, -0.5 * d);
  double acc = 0.0;
  tensor_grid(rule, d, [&](const Vector& z, double w) {
    acc += w * g(s * (M_SQRT2 * z));
  });
  return norm * acc;
}

// Randomized QMC: independent Cranley-Patterson shifts per replicate, so the
// spread of replicate means is an honest error estimate. (Index-strided
// batches of one Halton stream are useless for this: a stride of 8 fixes the
// leading base-2 digits, so each batch covers its own eighth of axis one.)
double qmc_expect(const std::function<double(const Vector&)>& g,
                  const GaussianLaw& law, const GaussQuadSpec& spec,
                  double* batch_se) {
  const int d = law.dim();
  const Matrix& s = law.sqrt();
  const int reps = 8;
  const std::uint64_t per = std::max<std::uint64_t>(spec.qmc_points / reps, 2);
  Vector z(d);
  std::vector<double> rep_mean(reps, 0.0);
  for (int b = 0; b < reps; ++b) {
    const HaltonSequence seq(d, derive_seed(spec.qmc_seed, "qmc.shift",
                                            static_cast<std::uint64_t>(b)));
    double acc = 0.0;
    for (std::uint64_t i = 0; i < per; ++i) {
      const Vector u = seq.point(i);
      for (int k = 0; k < d; ++k) z[k] = norm_quantile(u[k]);
      acc += g(s * z);
    }
    rep_mean[b] = acc / static_cast<double>(per);
  }
  double mean = 0.0;
  for (int b = 0; b < reps; ++b) mean += rep_mean[b];
  mean /= reps;
  if (batch_se) {
    double var = 0.0;
    for (int b = 0; b < reps; ++b)
      var += (rep_mean[b] - mean) * (rep_mean[b] - mean);
    *batch_se = std::sqrt(var / (reps * (reps - 1.0)));
  }
  return mean;
}

}  // namespace

double gaussian_expect_raw(const std::function<double(const Vector&)>& g,
                           const GaussianLaw& law, const GaussQuadSpec& spec) {
  if (law.dim() <= spec.tensor_dim_max)
    return tensor_gh_expect(g, law, spec.gh_nodes);
  return qmc_expect(g, law, spec, nullptr);
}

Estimate gaussian_expect(const std::function<double(const Vector&)>& g,
                         const GaussianLaw& law, const GaussQuadSpec& spec) {
  Estimate out;
  if (law.dim() <= spec.tensor_dim_max) {
    out.value = tensor_gh_expect(g, law, spec.gh_nodes);
    const double coarse = tensor_gh_expect(g, law, spec.gh_nodes - spec.gh_nodes / 4);
    out.err = std::abs(out.value - coarse);
  } else {
    out.value = qmc_expect(g, law, spec, &out.err);
  }
  return out;
}

}  // namespace stein
