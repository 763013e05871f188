#pragma once

// Quantum channels represented by their Choi matrices
//   J_N = sum_{ij} |i><j| (x) N(|i><j|),
// ordered input (A) slow, output (B) fast.

#include <string>
#include <string_view>
#include <vector>

#include "nscost/qmat.hpp"

namespace nscost {

class ChannelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class QuantumChannel {
 public:
  /// Validates complete positivity and trace preservation of `choi` to
  /// within `tol`; throws ChannelError otherwise.
  QuantumChannel(int dim_in, int dim_out, ComplexMatrix choi, double tol = kPsdTol);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  const ComplexMatrix& choi() const { return choi_; }
  Dims dims() const { return {dim_in_, dim_out_}; }

  /// True when the Choi matrix has no imaginary part (all zoo channels).
  bool is_real() const;

 private:
  int dim_in_;
  int dim_out_;
  ComplexMatrix choi_;
};

/// Smallest eigenvalue of the Choi matrix and ||tr_B J - 1_A||_max. Used by
/// the validity checks and exposed for tests.
struct ChannelDefects {
  double min_choi_eigenvalue;
  double tp_violation;
};
ChannelDefects channel_defects(int dim_in, int dim_out, const ComplexMatrix& choi);

QuantumChannel choi_of_kraus(const std::vector<ComplexMatrix>& kraus, int dim_in, int dim_out);

/// N(rho) = tr_A[ J (rho^T (x) 1_B) ].
ComplexMatrix apply_channel(const QuantumChannel& ch, const ComplexMatrix& rho);

/// Channel second o first.
QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first);

/// Parallel use N (x) M, with Choi matrix ordered (A_1 A_2)(B_1 B_2).
QuantumChannel tensor(const QuantumChannel& n, const QuantumChannel& m);

// Channel zoo.
QuantumChannel identity_channel(int d);
QuantumChannel depolarizing(int d, double p);
QuantumChannel amplitude_damping(double r);
QuantumChannel dephasing(double p);
/// Output dimension d + 1; the erasure flag is basis vector |d>.
QuantumChannel erasure(int d, double p);
/// Classical channel with transition matrix stochastic(x, y) = N(y|x);
/// rows must sum to one.
QuantumChannel classical(const RealMatrix& stochastic);
/// rho -> tr(rho) sigma.
QuantumChannel constant_channel(int dim_in, const ComplexMatrix& sigma);

enum class ChannelFamily { depolarizing, amplitude_damping, dephasing, erasure, classical, identity, constant };

std::string_view to_string(ChannelFamily f);
/// Accepts the names printed by to_string; throws ChannelError otherwise.
ChannelFamily parse_family(std::string_view name);

struct ChannelParams {
  int d = 2;
  double p = 0.0;            // noise parameter (p, or r for amplitude damping)
  RealMatrix stochastic;     // classical family
  ComplexMatrix sigma;       // constant family; default maximally mixed
};

QuantumChannel make_channel(ChannelFamily family, const ChannelParams& params);

}  // namespace nscost
