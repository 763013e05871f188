#pragma once

// Symmetry-reduced linear programs: classical channels and n uses of the
// depolarizing channel.

#include <vector>

#include "nscost/programs.hpp"

namespace nscost {

/// Sector data of D_p^{(x) n}: J = sum_k p_k P_k with P_k the sum of all
/// products containing k factors of Phi_d (normalized) and n - k of its
/// complement. Everything is stored as base-2 logarithms; -inf encodes 0.
struct LPReduction {
  int n = 1;
  int d = 2;
  double p = 0.0;
  /// log2 w_k, w_k = C(n,k) (1/d)^k (d - 1/d)^(n-k)
  std::vector<double> log2_weights;
  /// log2 p_k, p_k = q1^k q2^(n-k), q1 = d(1-p) + p/d, q2 = p/d
  std::vector<double> log2_spectrum;

  /// log2 (w_k p_k); these masses form a binomial distribution.
  double log2_mass(int k) const { return log2_weights[k] + log2_spectrum[k]; }
  /// sum_k w_k p_k, evaluated with a log-sum-exp.
  double normalization() const;
};

LPReduction depolarizing_reduction(int n, int d, double p);

/// One-shot eps-error NS cost of a classical channel, stochastic(x, y) = N(y|x).
CostResult classical_cost_lp(const RealMatrix& stochastic, double eps, const SolveSettings& settings = {});

struct DepolarizingCost {
  CostResult total;       // for the n-fold channel
  double cost_per_use = 0.0;       // total.cost_bits / n
  double unceiled_per_use = 0.0;   // total.half_log_trv / n
  int iterations = 0;
};

/// One-shot eps-error NS cost of D_p^{(x) n} via the sector LP.
DepolarizingCost depolarizing_cost_lp(int n, int d, double p, double eps, const SolveSettings& settings = {});

struct MutualInformation {
  double mutual_info = 0.0;  // I(A:B) at the maximally entangled input, bits
  double q_e = 0.0;          // half of it
};

MutualInformation depolarizing_mutual_info(int d, double p);

}  // namespace nscost
