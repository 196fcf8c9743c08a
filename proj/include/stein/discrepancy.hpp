#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stein/gaussian.hpp"
#include "stein/test_function.hpp"

namespace stein {

// Panel with finite M1..M3 throughout, for distances that price all three
// derivative orders.
std::vector<TestFunction> make_smooth_panel(int dim);

// Same panel plus the pure quadratic (unbounded first derivative), for
// operator-level checks where only M2-type seminorms matter.
std::vector<TestFunction> make_verification_panel(int dim);

struct DiscrepancyEstimate {
  std::string g_label;
  double value = 0;      // |sample mean of g - gaussian mean of g|
  double sample_se = 0;  // Monte Carlo error of the sample mean
  double quad_err = 0;   // quadrature error estimate of the gaussian mean
};

// samples is row-per-draw (N x dim).
DiscrepancyEstimate smooth_discrepancy(const Matrix& samples,
                                       const TestFunction& g,
                                       const GaussianLaw& law,
                                       const GaussQuadSpec& spec = {});

std::vector<DiscrepancyEstimate> smooth_discrepancy_panel(
    const Matrix& samples, const std::vector<TestFunction>& panel,
    const GaussianLaw& law, const GaussQuadSpec& spec = {});

// Exact 1d Wasserstein distance between the empirical measure of xs and
// N(0, sigma^2); sigma = 0 means the point mass at zero.
double w1_empirical_gaussian(std::vector<double> xs, double sigma);

// Max over seeded random directions of the projected 1d distance. Any
// projection is 1-Lipschitz, so this is a lower bound for W1 in d dimensions.
struct SlicedW1 {
  double value = 0;
  double mean = 0;
  int argmax = 0;
};
SlicedW1 sliced_w1_lower_bound(const Matrix& samples, const GaussianLaw& law,
                               int directions, std::uint64_t seed);

// The same statistic on samples drawn from the law itself: its typical size
// is the resolution floor of the lower bound at this sample count.
struct NullLevel {
  double mean = 0;
  double sd = 0;
};
NullLevel sliced_w1_null_level(const GaussianLaw& law, std::uint64_t n_samples,
                               int directions, int replications,
                               std::uint64_t seed);

}  // namespace stein
