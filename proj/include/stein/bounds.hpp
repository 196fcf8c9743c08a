#pragma once

#include <string>
#include <vector>

#include "stein/pair_model.hpp"
#include "stein/test_function.hpp"

namespace stein {

struct BoundTerm {
  std::string name;
  double value = 0.0;
};

// One assembled error bound: the labelled terms, their sum, and the inputs
// that produced them. Serialization lives in report.hpp.
struct BoundReport {
  std::string theorem;  // "bd1" | "bd2" | "inf-bd1" | "inf-bd2"
  std::string g_label;
  std::vector<BoundTerm> terms;
  double total = 0.0;
  Seminorms seminorms_used;
  ConditionMoments moments;
  bool box_restricted_seminorms = false;
  std::string note;
};

// Smooth-test-function bound for a discrete pair:
//   |L^-1|_op ( M1 E|E| + (1/4) M2t E|E'|_HS + (1/9) M3 E|dX|^3 ).
// When M2t is absent it is replaced by sqrt(dim) * M2. Throws MissingSeminorm.
BoundReport assemble_bound_smooth(const ConditionMoments& m, const Seminorms& s,
                                  int dim, const std::string& g_label);

// Wasserstein-flavoured bound for nonsingular targets:
//   M1 |L^-1| ( E|E| + (1/2)|S^-1/2| E|E'| ) +
//   (sqrt(2 pi)/24) M2 |S^-1/2| |L^-1| E|dX|^3.
// sigma_inv_sqrt_op is the operator norm of the inverse square root of the
// target covariance. Throws SingularSigma if it is not finite and positive.
BoundReport assemble_bound_nonsingular(const ConditionMoments& m,
                                       const Seminorms& s,
                                       double sigma_inv_sqrt_op,
                                       const std::string& g_label);

// Infinitesimal versions: identical first terms, no third-moment term. The
// Wasserstein variant needs no test-function seminorms at all.
BoundReport assemble_bound_infinitesimal_smooth(const ConditionMoments& m,
                                                const Seminorms& s, int dim,
                                                const std::string& g_label);
BoundReport assemble_bound_infinitesimal_wass(const ConditionMoments& m,
                                              double sigma_inv_sqrt_op);

}  // namespace stein
