#include "nscost/channels.hpp"

#include <cmath>
#include <string>

namespace nscost {
namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ChannelError(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
  }
}

}  // namespace

ChannelDefects channel_defects(int dim_in, int dim_out, const ComplexMatrix& choi) {
  const ComplexMatrix marginal = partial_trace(choi, {dim_in, dim_out}, {1});
  return {min_eigenvalue(choi), (marginal - identity(dim_in)).cwiseAbs().maxCoeff()};
}

QuantumChannel::QuantumChannel(int dim_in, int dim_out, ComplexMatrix choi, double tol)
    : dim_in_(dim_in), dim_out_(dim_out), choi_(std::move(choi)) {
  if (dim_in_ < 1 || dim_out_ < 1) throw ChannelError("channel dimensions must be positive");
  if (choi_.rows() != dim_in_ * dim_out_ || choi_.cols() != dim_in_ * dim_out_) {
    throw DimensionError("Choi matrix size does not match dim_in * dim_out");
  }
  if (!is_hermitian(choi_, std::max(tol, kHermitianTol))) {
    throw ChannelError("Choi matrix is not Hermitian");
  }
  const auto defects = channel_defects(dim_in_, dim_out_, choi_);
  if (defects.min_choi_eigenvalue < -tol) {
    throw ChannelError("Choi matrix is not positive semidefinite (min eigenvalue " +
                       std::to_string(defects.min_choi_eigenvalue) + ")");
  }
  if (defects.tp_violation > tol) {
    throw ChannelError("map is not trace preserving (deviation " +
                       std::to_string(defects.tp_violation) + ")");
  }
}

bool QuantumChannel::is_real() const { return choi_.imag().cwiseAbs().maxCoeff() == 0.0; }

QuantumChannel choi_of_kraus(const std::vector<ComplexMatrix>& kraus, int dim_in, int dim_out) {
  if (kraus.empty()) throw ChannelError("Kraus set is empty");
  ComplexMatrix completeness = ComplexMatrix::Zero(dim_in, dim_in);
  ComplexMatrix choi = ComplexMatrix::Zero(dim_in * dim_out, dim_in * dim_out);
  for (const auto& k : kraus) {
    if (k.rows() != dim_out || k.cols() != dim_in) {
      throw DimensionError("Kraus operator must be dim_out x dim_in");
    }
    completeness += k.adjoint() * k;
    Eigen::VectorXcd vec(dim_in * dim_out);
    for (int i = 0; i < dim_in; ++i) {
      for (int b = 0; b < dim_out; ++b) vec(i * dim_out + b) = k(b, i);
    }
    choi += vec * vec.adjoint();
  }
  if ((completeness - identity(dim_in)).cwiseAbs().maxCoeff() > 1e-10) {
    throw ChannelError("Kraus operators are not trace preserving");
  }
  return QuantumChannel(dim_in, dim_out, std::move(choi));
}

ComplexMatrix apply_channel(const QuantumChannel& ch, const ComplexMatrix& rho) {
  const int a = ch.dim_in();
  const int b = ch.dim_out();
  if (rho.rows() != a || rho.cols() != a) throw DimensionError("apply_channel: input has wrong size");
  const auto& j = ch.choi();
  ComplexMatrix out = ComplexMatrix::Zero(b, b);
  for (int i = 0; i < a; ++i) {
    for (int k = 0; k < a; ++k) {
      if (rho(i, k) == Complex(0.0)) continue;
      out += rho(i, k) * j.block(i * b, k * b, b, b);
    }
  }
  return out;
}

QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first) {
  if (first.dim_out() != second.dim_in()) throw DimensionError("compose: dimension mismatch");
  const int a = first.dim_in();
  const int m = first.dim_out();
  const int c = second.dim_out();
  ComplexMatrix choi(a * c, a * c);
  for (int i = 0; i < a; ++i) {
    for (int k = 0; k < a; ++k) {
      choi.block(i * c, k * c, c, c) = apply_channel(second, first.choi().block(i * m, k * m, m, m));
    }
  }
  return QuantumChannel(a, c, std::move(choi), 1e-9);
}

QuantumChannel tensor(const QuantumChannel& n, const QuantumChannel& m) {
  const Dims dims{n.dim_in(), n.dim_out(), m.dim_in(), m.dim_out()};
  return QuantumChannel(n.dim_in() * m.dim_in(), n.dim_out() * m.dim_out(),
                        permute_systems(kron(n.choi(), m.choi()), dims, {0, 2, 1, 3}), 1e-9);
}

QuantumChannel identity_channel(int d) {
  if (d < 1) throw ChannelError("identity channel needs d >= 1");
  return QuantumChannel(d, d, max_entangled(d));
}

QuantumChannel depolarizing(int d, double p) {
  if (d < 2) throw ChannelError("depolarizing channel needs d >= 2");
  check_probability(p, "depolarizing parameter p");
  return QuantumChannel(d, d, (1.0 - p) * max_entangled(d) + (p / d) * identity(d * d));
}

QuantumChannel amplitude_damping(double r) {
  check_probability(r, "amplitude damping parameter r");
  ComplexMatrix e0 = ComplexMatrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - r);
  ComplexMatrix e1 = ComplexMatrix::Zero(2, 2);
  e1(0, 1) = std::sqrt(r);
  return choi_of_kraus({e0, e1}, 2, 2);
}

QuantumChannel dephasing(double p) {
  check_probability(p, "dephasing parameter p");
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return choi_of_kraus({std::sqrt(1.0 - p) * identity(2), std::sqrt(p) * z}, 2, 2);
}

QuantumChannel erasure(int d, double p) {
  if (d < 2) throw ChannelError("erasure channel needs d >= 2");
  check_probability(p, "erasure parameter p");
  const int out = d + 1;
  ComplexMatrix choi = ComplexMatrix::Zero(d * out, d * out);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) choi(i * out + i, j * out + j) += 1.0 - p;
    choi(i * out + d, i * out + d) += p;
  }
  return QuantumChannel(d, out, std::move(choi));
}

QuantumChannel classical(const RealMatrix& stochastic) {
  const int nx = static_cast<int>(stochastic.rows());
  const int ny = static_cast<int>(stochastic.cols());
  if (nx < 1 || ny < 1) throw ChannelError("classical channel needs a nonempty transition matrix");
  if (stochastic.minCoeff() < 0.0) throw ChannelError("transition probabilities must be nonnegative");
  for (int x = 0; x < nx; ++x) {
    if (std::abs(stochastic.row(x).sum() - 1.0) > 1e-10) {
      throw ChannelError("transition matrix row " + std::to_string(x) + " does not sum to one");
    }
  }
  ComplexMatrix choi = ComplexMatrix::Zero(nx * ny, nx * ny);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) choi(x * ny + y, x * ny + y) = stochastic(x, y);
  }
  return QuantumChannel(nx, ny, std::move(choi));
}

QuantumChannel constant_channel(int dim_in, const ComplexMatrix& sigma) {
  if (sigma.rows() != sigma.cols()) throw DimensionError("constant channel output must be square");
  if (!is_psd(sigma) || std::abs(sigma.trace() - 1.0) > 1e-10) {
    throw ChannelError("constant channel output must be a density matrix");
  }
  return QuantumChannel(dim_in, static_cast<int>(sigma.rows()), kron(identity(dim_in), sigma));
}

std::string_view to_string(ChannelFamily f) {
  switch (f) {
    case ChannelFamily::depolarizing: return "depolarizing";
    case ChannelFamily::amplitude_damping: return "amplitude_damping";
    case ChannelFamily::dephasing: return "dephasing";
    case ChannelFamily::erasure: return "erasure";
    case ChannelFamily::classical: return "classical";
    case ChannelFamily::identity: return "identity";
    case ChannelFamily::constant: return "constant";
  }
  return "unknown";
}

ChannelFamily parse_family(std::string_view name) {
  for (auto f : {ChannelFamily::depolarizing, ChannelFamily::amplitude_damping, ChannelFamily::dephasing,
                 ChannelFamily::erasure, ChannelFamily::classical, ChannelFamily::identity,
                 ChannelFamily::constant}) {
    if (name == to_string(f)) return f;
  }
  if (name == "amplitude-damping") return ChannelFamily::amplitude_damping;
  throw ChannelError("unknown channel family '" + std::string(name) + "'");
}

QuantumChannel make_channel(ChannelFamily family, const ChannelParams& params) {
  switch (family) {
    case ChannelFamily::depolarizing: return depolarizing(params.d, params.p);
    case ChannelFamily::amplitude_damping: return amplitude_damping(params.p);
    case ChannelFamily::dephasing: return dephasing(params.p);
    case ChannelFamily::erasure: return erasure(params.d, params.p);
    case ChannelFamily::classical: return classical(params.stochastic);
    case ChannelFamily::identity: return identity_channel(params.d);
    case ChannelFamily::constant: {
      if (params.sigma.size() == 0) {
        if (params.d < 1) throw ChannelError("constant channel needs d >= 1");
        return constant_channel(params.d, identity(params.d) / params.d);
      }
      return constant_channel(params.d, params.sigma);
    }
  }
  throw ChannelError("unknown channel family");
}

}  // namespace nscost
