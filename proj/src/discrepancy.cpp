#include "stein/discrepancy.hpp"

#include <algorithm>
#include <cmath>

#include "stein/errors.hpp"
#include "stein/parallel.hpp"
#include "stein/quadrature.hpp"
#include "stein/rng.hpp"

namespace stein {

std::vector<TestFunction> make_smooth_panel(int dim) {
  if (dim < 1) throw ConfigInvalid("panel: dim >= 1");
  const double s = 1.0 / std::sqrt(static_cast<double>(dim));
  Vector ones = Vector::Constant(dim, s);
  Vector alt(dim);
  for (int i = 0; i < dim; ++i) alt[i] = (i % 2 == 0 ? s : -s);
  std::vector<TestFunction> panel;
  panel.push_back(make_linear(ones));
  panel.push_back(make_cos(ones));
  if (dim > 1) panel.push_back(make_cos(alt).relabel("cos-alt"));
  panel.push_back(make_gauss_bump(dim));
  return panel;
}

std::vector<TestFunction> make_verification_panel(int dim) {
  auto panel = make_smooth_panel(dim);
  if (dim >= 2) {
    panel.push_back(make_quadratic_cross(dim, 0, 1));
  } else {
    panel.push_back(make_quadratic_form(Matrix::Identity(1, 1)));
  }
  return panel;
}

DiscrepancyEstimate smooth_discrepancy(const Matrix& samples,
                                       const TestFunction& g,
                                       const GaussianLaw& law,
                                       const GaussQuadSpec& spec) {
  if (samples.cols() != g.dim())
    throw DimensionMismatch("smooth_discrepancy: sample dim mismatch");
  const std::uint64_t n = static_cast<std::uint64_t>(samples.rows());
  if (n < 2) throw ConfigInvalid("smooth_discrepancy: need at least 2 samples");
  std::vector<double> vals(n);
  parallel::run_chunks(n, [&](std::size_t, parallel::Range r) {
    for (std::uint64_t i = r.begin; i < r.end; ++i)
      vals[i] = g(samples.row(static_cast<int>(i)).transpose());
  });
  double sum = 0.0, sumsq = 0.0;
  for (double v : vals) {
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / static_cast<double>(n);
  const double var =
      std::max(0.0, sumsq / static_cast<double>(n) - mean * mean);
  const Estimate gm = g.has_gaussian_mean()
                          ? Estimate{g.gaussian_mean(law), 0.0}
                          : gaussian_expect(g.eval(), law, spec);
  DiscrepancyEstimate out;
  out.g_label = g.label();
  out.value = std::abs(mean - gm.value);
  out.sample_se = std::sqrt(var / static_cast<double>(n));
  out.quad_err = gm.err;
  return out;
}

std::vector<DiscrepancyEstimate> smooth_discrepancy_panel(
    const Matrix& samples, const std::vector<TestFunction>& panel,
    const GaussianLaw& law, const GaussQuadSpec& spec) {
  std::vector<DiscrepancyEstimate> out;
  out.reserve(panel.size());
  for (const auto& g : panel)
    out.push_back(smooth_discrepancy(samples, g, law, spec));
  return out;
}

namespace {

double pdf_at_quantile(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return norm_pdf(norm_quantile(p));
}

}  // namespace

double w1_empirical_gaussian(std::vector<double> xs, double sigma) {
  if (xs.empty()) throw ConfigInvalid("w1: empty sample");
  const double n = static_cast<double>(xs.size());
  if (!(sigma > 0.0)) {
    double s = 0.0;
    for (double x : xs) s += std::abs(x);
    return s / n;
  }
  std::sort(xs.begin(), xs.end());
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double a = static_cast<double>(i) / n;
    const double b = static_cast<double>(i + 1) / n;
    const double v = xs[i];
    // Split the quantile strip [a, b] where sigma * z(q) crosses v; on the
    // lower part v - sigma z >= 0, on the upper part the sign flips.
    const double c = std::clamp(norm_cdf(v / sigma), a, b);
    const double pa = pdf_at_quantile(a);
    const double pb = pdf_at_quantile(b);
    const double pc = pdf_at_quantile(c);
    total += v * (c - a) - sigma * (pa - pc);
    total += sigma * (pc - pb) - v * (b - c);
  }
  return total;
}

SlicedW1 sliced_w1_lower_bound(const Matrix& samples, const GaussianLaw& law,
                               int directions, std::uint64_t seed) {
  if (directions < 1) throw ConfigInvalid("sliced_w1: directions >= 1");
  if (samples.cols() != law.dim())
    throw DimensionMismatch("sliced_w1: sample dim mismatch");
  const int d = law.dim();
  Rng rng(derive_seed(seed, "slice.dirs"));
  std::vector<Vector> dirs(static_cast<std::size_t>(directions));
  for (auto& th : dirs) th = rng.unit_vector(d);
  std::vector<double> stats(dirs.size());
  parallel::run_chunks(dirs.size(), [&](std::size_t, parallel::Range r) {
    for (std::uint64_t j = r.begin; j < r.end; ++j) {
      const Vector& th = dirs[j];
      const Vector proj = samples * th;
      std::vector<double> xs(proj.data(), proj.data() + proj.size());
      const double sigma = std::sqrt(
          std::max(0.0, th.dot(law.covariance().mat() * th)));
      stats[j] = w1_empirical_gaussian(std::move(xs), sigma);
    }
  });
  SlicedW1 out;
  out.value = stats[0];
  out.argmax = 0;
  double sum = 0.0;
  for (std::size_t j = 0; j < stats.size(); ++j) {
    sum += stats[j];
    if (stats[j] > out.value) {
      out.value = stats[j];
      out.argmax = static_cast<int>(j);
    }
  }
  out.mean = sum / static_cast<double>(stats.size());
  return out;
}

NullLevel sliced_w1_null_level(const GaussianLaw& law, std::uint64_t n_samples,
                               int directions, int replications,
                               std::uint64_t seed) {
  if (replications < 2) throw ConfigInvalid("null level: replications >= 2");
  std::vector<double> stats(static_cast<std::size_t>(replications));
  for (int r = 0; r < replications; ++r) {
    Matrix samples(static_cast<int>(n_samples), law.dim());
    parallel::run_chunks(n_samples, [&](std::size_t, parallel::Range range) {
      for (std::uint64_t i = range.begin; i < range.end; ++i) {
        Rng rng(derive_seed(seed, "null.draw", (static_cast<std::uint64_t>(r) << 40) + i));
        samples.row(static_cast<int>(i)) = law.sample(rng).transpose();
      }
    });
    stats[r] = sliced_w1_lower_bound(samples, law, directions, seed).value;
  }
  double mean = 0.0;
  for (double s : stats) mean += s;
  mean /= replications;
  double var = 0.0;
  for (double s : stats) var += (s - mean) * (s - mean);
  NullLevel out;
  out.mean = mean;
  out.sd = std::sqrt(var / (replications - 1.0));
  return out;
}

}  // namespace stein
