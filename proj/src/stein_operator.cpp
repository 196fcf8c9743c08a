#include "stein/stein_operator.hpp"

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "stein/errors.hpp"
#include "stein/parallel.hpp"

namespace stein {

namespace {

// Shared Gaussian abscissas: points zeta_j with weights omega_j such that
// E f(Z) ~= sum_j omega_j f(zeta_j) for Z ~ law.
struct GaussAbscissas {
  std::vector<Vector> points;
  std::vector<double> weights;
};

GaussAbscissas gaussian_abscissas(const GaussianLaw& law, const QuadSpec& spec) {
  GaussAbscissas out;
  const int d = law.dim();
  const Matrix& s = law.sqrt();
  if (d <= spec.tensor_dim_max) {
    const GaussRule& rule = gauss_hermite(spec.gh_nodes);
    const double norm = std::pow(M_PI, -0.5 * d);
    tensor_grid(rule, d, [&](const Vector& z, double w) {
      out.points.push_back(s * (M_SQRT2 * z));
      out.weights.push_back(norm * w);
    });
  } else {
    const HaltonSequence seq(d, spec.qmc_seed);
    const double w = 1.0 / static_cast<double>(spec.qmc_points);
    Vector z(d);
    for (int i = 0; i < spec.qmc_points; ++i) {
      const Vector u = seq.point(i);
      for (int k = 0; k < d; ++k) z[k] = norm_quantile(u[k]);
      out.points.push_back(s * z);
      out.weights.push_back(w);
    }
  }
  return out;
}

double solve_with_rules(const TestFunction::Eval& g, const Vector& x,
                        const GaussRule& s_rule, const GaussAbscissas& abs,
                        double g_mean) {
  // After t = s^2: h(x) = integral_0^1 s^{-1} [E g(s x + sqrt(1-s^2) Z) -
  // E g(Z)] ds. The integrand extends smoothly to s = 0.
  const int ns = static_cast<int>(s_rule.nodes.size());
  const std::size_t m = abs.points.size();
  double acc = 0.0;
  Vector shifted(x.size());
  for (int i = 0; i < ns; ++i) {
    const double s = s_rule.nodes[i];
    const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
    double inner = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      shifted = s * x + c * abs.points[j];
      inner += abs.weights[j] * g(shifted);
    }
    acc += s_rule.weights[i] * (inner - g_mean) / s;
  }
  return acc;
}

}  // namespace

double char_residual(const TestFunction& f, const GaussianLaw& law,
                     const Vector& x) {
  if (x.size() != law.dim())
    throw DimensionMismatch("char_residual: point/law dimension");
  return hs_inner(f.hessian(x), law.covariance().mat()) - x.dot(f.gradient(x));
}

McEstimate expect_char_residual(const TestFunction& f, const GaussianLaw& law,
                                std::uint64_t samples, std::uint64_t seed) {
  const auto grid = parallel::chunk_grid(samples);
  std::vector<double> sum(grid.size(), 0.0), sumsq(grid.size(), 0.0);
  parallel::run_chunks(samples, [&](std::size_t c, parallel::Range r) {
    double s1 = 0.0, s2 = 0.0;
    for (std::uint64_t i = r.begin; i < r.end; ++i) {
      Rng rng(derive_seed(seed, "char_residual", i));
      const double v = char_residual(f, law, law.sample(rng));
      s1 += v;
      s2 += v * v;
    }
    sum[c] = s1;
    sumsq[c] = s2;
  });
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    s1 += sum[c];
    s2 += sumsq[c];
  }
  McEstimate out;
  out.samples = samples;
  const double n = static_cast<double>(samples);
  out.mean = s1 / n;
  const double var = std::max(0.0, s2 / n - out.mean * out.mean);
  out.std_err = std::sqrt(var / n);
  return out;
}

double stein_solve(const TestFunction::Eval& g, const GaussianLaw& law,
                   const Vector& x, const QuadSpec& spec) {
  if (x.size() != law.dim())
    throw DimensionMismatch("stein_solve: point/law dimension");
  const GaussAbscissas abs = gaussian_abscissas(law, spec);
  double g_mean = 0.0;
  for (std::size_t j = 0; j < abs.points.size(); ++j)
    g_mean += abs.weights[j] * g(abs.points[j]);
  const double v =
      solve_with_rules(g, x, gauss_legendre_01(spec.s_nodes), abs, g_mean);
  if (spec.check) {
    QuadSpec fine = spec;
    fine.check = false;
    fine.s_nodes = 2 * spec.s_nodes;
    fine.gh_nodes = 2 * spec.gh_nodes;
    fine.qmc_points = 2 * spec.qmc_points;
    const GaussAbscissas abs2 = gaussian_abscissas(law, fine);
    double g_mean2 = 0.0;
    for (std::size_t j = 0; j < abs2.points.size(); ++j)
      g_mean2 += abs2.weights[j] * g(abs2.points[j]);
    const double v2 =
        solve_with_rules(g, x, gauss_legendre_01(fine.s_nodes), abs2, g_mean2);
    if (std::abs(v2 - v) > spec.tol)
      throw QuadratureDiverged("stein_solve: node doubling moved result by " +
                               std::to_string(std::abs(v2 - v)));
  }
  return v;
}

TestFunction make_stein_solution(const TestFunction& g, const GaussianLaw& law,
                                 const QuadSpec& spec) {
  auto cache = std::make_shared<GaussAbscissas>(gaussian_abscissas(law, spec));
  double g_mean = 0.0;
  for (std::size_t j = 0; j < cache->points.size(); ++j)
    g_mean += cache->weights[j] * g(cache->points[j]);
  // The rule cache is immortal, so holding a pointer into it is safe.
  const GaussRule* s_rule = &gauss_legendre_01(spec.s_nodes);
  TestFunction::Eval geval = g.eval();
  TestFunction h("U0[" + g.label() + "]", g.dim(),
                 [cache, g_mean, s_rule, geval](const Vector& x) {
                   return solve_with_rules(geval, x, *s_rule, *cache, g_mean);
                 });
  return h;
}

double verify_stein_equation(const TestFunction& g, const GaussianLaw& law,
                             const Vector& x, const QuadSpec& spec,
                             const FdSpec& fd) {
  const TestFunction h = make_stein_solution(g, law, spec);
  const Vector grad = fd_gradient(h.eval(), x, fd);
  const Matrix hess = fd_hessian(h.eval(), x, fd);
  const GaussAbscissas abs = gaussian_abscissas(law, spec);
  double g_mean = 0.0;
  for (std::size_t j = 0; j < abs.points.size(); ++j)
    g_mean += abs.weights[j] * g(abs.points[j]);
  return x.dot(grad) - hs_inner(hess, law.covariance().mat()) -
         (g(x) - g_mean);
}

double sampling_radius(const GaussianLaw& law, const SamplerSpec& spec) {
  if (spec.box_radius > 0.0) return spec.box_radius;
  return 6.0 * std::sqrt(law.covariance().max_eig());
}

namespace {

Vector box_point(Rng& rng, int dim, double radius) {
  Vector x(dim);
  for (int i = 0; i < dim; ++i) x[i] = radius * (2.0 * rng.uniform() - 1.0);
  return x;
}

double step_for_order(const SamplerSpec& spec, int k) {
  switch (k) {
    case 1:
      return spec.h1;
    case 2:
      return spec.h2;
    default:
      return spec.h3;
  }
}

}  // namespace

double seminorm_mk(const TestFunction& f, int k, const GaussianLaw& law,
                   const SamplerSpec& spec) {
  if (k < 0 || k > 3) throw ConfigInvalid("seminorm_mk: k outside [0,3]");
  const int d = f.dim();
  const double radius = sampling_radius(law, spec);
  const auto grid = parallel::chunk_grid(spec.points);
  std::vector<double> best(grid.size(), 0.0);
  parallel::run_chunks(spec.points, [&](std::size_t c, parallel::Range r) {
    double m = 0.0;
    for (std::uint64_t p = r.begin; p < r.end; ++p) {
      Rng rng(derive_seed(spec.seed, "seminorm.point", p));
      const Vector x = box_point(rng, d, radius);
      if (k == 0) {
        m = std::max(m, std::abs(f(x)));
        continue;
      }
      const double h = step_for_order(spec, k) * (1.0 + x.norm());
      for (int t = 0; t < spec.directions; ++t) {
        std::vector<Vector> dirs;
        dirs.reserve(k);
        for (int q = 0; q < k; ++q) dirs.push_back(rng.unit_vector(d));
        double v = fd_directional(f.eval(), x, dirs, h);
        if (spec.richardson) {
          const double v2 = fd_directional(f.eval(), x, dirs, 0.5 * h);
          v = (4.0 * v2 - v) / 3.0;
        }
        m = std::max(m, std::abs(v));
      }
    }
    best[c] = m;
  });
  double out = 0.0;
  for (double b : best) out = std::max(out, b);
  return out;
}

double seminorm_m2tilde(const TestFunction& f, const GaussianLaw& law,
                        const SamplerSpec& spec) {
  const int d = f.dim();
  const double radius = sampling_radius(law, spec);
  FdSpec fd;
  fd.h_scale = spec.h2;
  fd.richardson = spec.richardson;
  fd.check = false;  // sup estimation tolerates stencil noise
  const auto grid = parallel::chunk_grid(spec.points);
  std::vector<double> best(grid.size(), 0.0);
  parallel::run_chunks(spec.points, [&](std::size_t c, parallel::Range r) {
    double m = 0.0;
    for (std::uint64_t p = r.begin; p < r.end; ++p) {
      Rng rng(derive_seed(spec.seed, "seminorm.point", p));
      const Vector x = box_point(rng, d, radius);
      Matrix h;
      if (f.has_hessian()) {
        h = f.hessian(x);
      } else {
        TestFunction probe = f;
        probe.fd = fd;
        h = probe.hessian(x);
      }
      m = std::max(m, hs_norm(h));
    }
    best[c] = m;
  });
  double out = 0.0;
  for (double b : best) out = std::max(out, b);
  return out;
}

}  // namespace stein
