#include "nscost/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nscost {

namespace {

void check_args(ChannelFamily family, double param, int d) {
  if (!(param >= 0.0 && param <= 1.0)) throw std::invalid_argument("noise parameter must lie in [0, 1]");
  switch (family) {
    case ChannelFamily::depolarizing:
    case ChannelFamily::erasure:
      if (d < 2) throw std::invalid_argument("dimension must be at least 2");
      return;
    case ChannelFamily::amplitude_damping:
    case ChannelFamily::dephasing:
      if (d != 2) throw std::invalid_argument(std::string(to_string(family)) + " is a qubit channel");
      return;
    default:
      throw std::invalid_argument("no closed form for family " + std::string(to_string(family)));
  }
}

// Unnormalized |psi><psi| for psi = sum_i sign^i |ii>.
ComplexMatrix bell(int d, double sign = 1.0) {
  ComplexMatrix v = ComplexMatrix::Zero(d * d, 1);
  for (int i = 0; i < d; ++i) v(i * d + i, 0) = std::pow(sign, i);
  return v * v.adjoint();
}

}  // namespace

ClosedForm closed_form_cost(ChannelFamily family, double param, int d) {
  check_args(family, param, d);
  ClosedForm c{family, param, d, 1.0, 0.0};
  const double dd = static_cast<double>(d) * d;
  switch (family) {
    case ChannelFamily::depolarizing:
    case ChannelFamily::erasure:
      c.tr_v = dd * (1.0 - param) + param;
      break;
    case ChannelFamily::amplitude_damping:
      c.tr_v = 2.0 * (1.0 + std::sqrt(1.0 - param)) - param;
      break;
    case ChannelFamily::dephasing:
      c.tr_v = std::abs(4.0 * param - 2.0) + 2.0;
      break;
    default:
      break;
  }
  c.value_bits = 0.5 * std::log2(c.tr_v);
  return c;
}

CertificatePair certificate(ChannelFamily family, double param, int d) {
  check_args(family, param, d);
  CertificatePair c;
  switch (family) {
    case ChannelFamily::depolarizing:
      c.primal_v = (d * (1.0 - param) + param / d) * identity(d);
      c.dual_x = bell(d);
      break;
    case ChannelFamily::amplitude_damping: {
      const double s = std::sqrt(1.0 - param);
      c.primal_v = ComplexMatrix::Zero(2, 2);
      c.primal_v(0, 0) = 1.0 + s;
      c.primal_v(1, 1) = s + 1.0 - param;
      c.dual_x = bell(2);
      break;
    }
    case ChannelFamily::dephasing:
      c.primal_v = (std::abs(2.0 * param - 1.0) + 1.0) * identity(2);
      c.dual_x = bell(2, param > 0.5 ? -1.0 : 1.0);
      break;
    case ChannelFamily::erasure: {
      c.primal_v = ComplexMatrix::Zero(d + 1, d + 1);
      for (int i = 0; i < d; ++i) c.primal_v(i, i) = d * (1.0 - param);
      c.primal_v(d, d) = param;
      c.dual_x = ComplexMatrix::Zero(d * (d + 1), d * (d + 1));
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) c.dual_x(i * (d + 1) + i, j * (d + 1) + j) = 1.0;
        c.dual_x(i * (d + 1) + d, i * (d + 1) + d) = 1.0 / d;
      }
      break;
    }
    default:
      break;
  }
  return c;
}

bool depolarizing_erasure_coincidence(double p, int d) {
  return closed_form_cost(ChannelFamily::depolarizing, p, d).value_bits ==
         closed_form_cost(ChannelFamily::erasure, p, d).value_bits;
}

}  // namespace nscost
