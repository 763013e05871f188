#pragma once

// Closed-form zero-error costs and explicit primal/dual certificates for
// the depolarizing, amplitude damping, dephasing and erasure channels.

#include "nscost/channels.hpp"
#include "nscost/programs.hpp"

namespace nscost {

struct ClosedForm {
  ChannelFamily family;
  double param = 0.0;
  int d = 2;
  /// Optimal tr V.
  double tr_v = 1.0;
  /// 1/2 log2 tr_v
  double value_bits = 0.0;
};

/// Throws std::invalid_argument for other families, parameters outside
/// [0, 1], d < 2, or d != 2 for the qubit-only families.
ClosedForm closed_form_cost(ChannelFamily family, double param, int d = 2);

/// Explicit optimal pair (V, X) for the zero-error program. For dephasing
/// with p > 1/2 the dual uses the Bell vector |00> - |11>.
CertificatePair certificate(ChannelFamily family, double param, int d = 2);

/// True when the depolarizing and erasure closed forms coincide exactly.
bool depolarizing_erasure_coincidence(double p, int d = 2);

}  // namespace nscost
