#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "stein/matrix.hpp"
#include "stein/rng.hpp"

namespace stein {

struct GaussRule {
  Vector nodes;
  Vector weights;
};

// Gauss-Legendre rule on [0,1]. Cached per node count; thread-safe.
const GaussRule& gauss_legendre_01(int n);

// Gauss-Hermite rule for weight exp(-x^2) on the real line (physicists').
const GaussRule& gauss_hermite(int n);

// Iterates the full tensor grid of `rule` in `dim` variables in lexicographic
// order: f(z, w) with z the node vector and w the product weight.
void tensor_grid(const GaussRule& rule, int dim,
                 const std::function<void(const Vector&, double)>& f);

// Standard normal density, CDF, and quantile. The quantile is Acklam's
// rational approximation polished by two Halley steps (~1 ulp).
double norm_pdf(double x);
double norm_cdf(double x);
double norm_quantile(double p);

// Halton sequence with a Cranley-Patterson random shift: the low-discrepancy
// backend for Gaussian expectations above the tensor-grid dimension cutoff.
class HaltonSequence {
 public:
  HaltonSequence(int dim, std::uint64_t seed);

  // Point #i of the shifted sequence, components in (0,1).
  Vector point(std::uint64_t i) const;

  int dim() const { return static_cast<int>(shift_.size()); }

 private:
  std::vector<int> bases_;
  std::vector<double> shift_;
};

}  // namespace stein
