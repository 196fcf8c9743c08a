#pragma once

#include <functional>

#include "stein/matrix.hpp"
#include "stein/quadrature.hpp"
#include "stein/rng.hpp"

namespace stein {

// Centered Gaussian with covariance Sigma (PSD, possibly singular).
class GaussianLaw {
 public:
  GaussianLaw() = default;
  explicit GaussianLaw(PsdMatrix sigma) : sigma_(std::move(sigma)) {}
  explicit GaussianLaw(const Matrix& sigma) : sigma_(PsdMatrix(sigma)) {}

  int dim() const { return sigma_.dim(); }
  const PsdMatrix& covariance() const { return sigma_; }
  const Matrix& sqrt() const { return sigma_.sqrt(); }
  bool nonsingular() const { return sigma_.is_invertible(); }
  Matrix inv_sqrt() const { return sigma_.inv_sqrt(); }

  Vector sample(Rng& rng) const { return sqrt() * rng.normal_vector(dim()); }

 private:
  PsdMatrix sigma_;
};

// Quadrature policy for Gaussian expectations: tensor Gauss-Hermite up to
// tensor_dim_max, shifted-Halton QMC beyond.
struct GaussQuadSpec {
  int gh_nodes = 32;
  int tensor_dim_max = 3;
  int qmc_points = 8192;
  std::uint64_t qmc_seed = 2718281829ULL;
};

struct Estimate {
  double value = 0.0;
  double err = 0.0;  // error indicator: node-refinement delta or batch SE
};

// E g(Z) for Z ~ law, no error indicator (fast path for inner loops).
double gaussian_expect_raw(const std::function<double(const Vector&)>& g,
                           const GaussianLaw& law,
                           const GaussQuadSpec& spec = {});

// E g(Z) with an error indicator (refined-rule delta for tensor grids,
// batch standard error for QMC).
Estimate gaussian_expect(const std::function<double(const Vector&)>& g,
                         const GaussianLaw& law, const GaussQuadSpec& spec = {});

}  // namespace stein
