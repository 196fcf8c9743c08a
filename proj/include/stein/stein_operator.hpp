#pragma once

#include <cstdint>

#include "stein/gaussian.hpp"
#include "stein/test_function.hpp"

namespace stein {

// Quadrature policy for the characterizing-equation solver. The radial
// integral uses Gauss-Legendre in s after substituting t = s^2; the inner
// Gaussian expectation uses a tensor Gauss-Hermite grid up to tensor_dim_max
// and shifted-Halton QMC beyond. check=true recomputes at doubled node count
// and throws QuadratureDiverged when the delta exceeds tol.
struct QuadSpec {
  int s_nodes = 64;
  int gh_nodes = 32;
  int tensor_dim_max = 3;
  int qmc_points = 8192;
  std::uint64_t qmc_seed = 2718281829ULL;
  double tol = 1e-6;
  bool check = false;
};

// A f(x) = <Hess f(x), Sigma>_HS - <x, grad f(x)>. Zero-mean under the law.
double char_residual(const TestFunction& f, const GaussianLaw& law,
                     const Vector& x);

struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::uint64_t samples = 0;
};

// Monte Carlo E[A f(Z)] over Z ~ law; deterministic for fixed seed
// independently of worker threads.
McEstimate expect_char_residual(const TestFunction& f, const GaussianLaw& law,
                                std::uint64_t samples, std::uint64_t seed);

// Solution operator: h(x) = integral_0^1 (2t)^{-1} [E g(sqrt(t) x +
// sqrt(1-t) Z) - E g(Z)] dt, evaluated at one point.
double stein_solve(const TestFunction::Eval& g, const GaussianLaw& law,
                   const Vector& x, const QuadSpec& spec = {});

// Same solution wrapped as a reusable function: the Gaussian quadrature
// abscissas and E g(Z) are precomputed once, so repeated evaluation (finite
// differences, seminorm sampling) reuses them. The result carries no analytic
// derivatives; derivative queries go through the FD fallback.
TestFunction make_stein_solution(const TestFunction& g, const GaussianLaw& law,
                                 const QuadSpec& spec = {});

// Residual of the characterizing equation at x for h = stein_solve(g):
// <x, grad h> - <Hess h, Sigma>_HS - (g(x) - E g(Z)). Derivatives of h by
// central FD with one Richardson level.
double verify_stein_equation(const TestFunction& g, const GaussianLaw& law,
                             const Vector& x, const QuadSpec& spec = {},
                             const FdSpec& fd = {});

// Sampling policy for sup-norm (seminorm) estimation: points uniform in the
// box [-R,R]^dim, directions uniform on the sphere. Estimates are sampled
// lower bounds of the supremum. Steps are per derivative order; they scale
// with (1+|x|) like the FD default.
struct SamplerSpec {
  int points = 64;
  int directions = 32;
  double box_radius = 0.0;  // 0: use 6*sqrt(max eigenvalue of Sigma)
  std::uint64_t seed = 7;
  double h1 = 1e-4;
  double h2 = 1e-4;
  double h3 = 1e-3;
  bool richardson = true;
};

double sampling_radius(const GaussianLaw& law, const SamplerSpec& spec);

// M_k(f) = sup ||D^k f||_op for k in {0,1,2,3}; k = 0 is sup |f|.
double seminorm_mk(const TestFunction& f, int k, const GaussianLaw& law,
                   const SamplerSpec& spec = {});

// M2_tilde(f) = sup ||Hess f||_HS.
double seminorm_m2tilde(const TestFunction& f, const GaussianLaw& law,
                        const SamplerSpec& spec = {});

}  // namespace stein
