#pragma once

// Channel simulation quantities as conic programs: simulation errors,
// one-shot NS (and NS∩PPT) costs, max-information and certificates.

#include <functional>
#include <stdexcept>
#include <string>

#include "nscost/channels.hpp"
#include "nscost/conic.hpp"

namespace nscost {

struct SolveSettings {
  conic::SolverOptions solver;
  /// Called with every problem before it is solved (used for dumps).
  std::function<void(const conic::ConicProblem&)> problem_hook;
};

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, conic::Status status)
      : std::runtime_error(what), status_(status) {}
  conic::Status status() const { return status_; }

 private:
  conic::Status status_;
};

/// Smallest integer m with m*m >= x - 1e-6, computed from log2 x.
double ceil_sqrt_from_log2(double log2_x);

struct CostResult {
  double tr_v_opt = 1.0;
  /// 1/2 log2 tr_v_opt
  double half_log_trv = 0.0;
  /// ceil(sqrt(tr_v_opt)); stored as a double so that huge n-fold values fit.
  double m_star = 1.0;
  /// log2 m_star
  double cost_bits = 0.0;
  /// cost_bits - half_log_trv, clamped at 0 against round-off.
  double delta = 0.0;
};

CostResult cost_from_log2_trv(double log2_trv);
CostResult cost_from_trv(double tr_v);

struct CertificatePair {
  ComplexMatrix primal_v;  // on B
  ComplexMatrix dual_x;    // on AB
};

enum class CodeClass { ns, ns_ppt };

/// 1/2 ||n1 - n2||_diamond.
double diamond_norm_dist(const QuantumChannel& n1, const QuantumChannel& n2, const SolveSettings& settings = {});

struct SimulationResult {
  double error = 0.0;
  /// Optimal code Choi matrix on A_i B_i A_o B_o.
  ComplexMatrix code;
};

/// omega(N, M): minimum error of simulating M (A_i -> B_o) from one use of N
/// (A_o -> B_i).
SimulationResult min_error_simulation(const QuantumChannel& n, const QuantumChannel& m, CodeClass code,
                                      const SolveSettings& settings = {});

/// omega(id_m, N) through the reduced program on N's systems.
double min_error_noiseless(int m, const QuantumChannel& n, CodeClass code, const SolveSettings& settings = {});

/// One-shot eps-error cost under NS codes; eps = 0 solves the zero-error
/// program.
CostResult one_shot_cost_ns(const QuantumChannel& n, double eps, const SolveSettings& settings = {});

/// Smallest m in 1..dim_in with omega_{NS∩PPT}(id_m, N) <= eps. The result
/// has tr_v_opt = m^2.
CostResult one_shot_cost_ns_ppt(const QuantumChannel& n, double eps, const SolveSettings& settings = {});

struct ZeroErrorResult {
  CostResult cost;
  CertificatePair certificate;
};

/// min { tr V | J_N <= 1_A (x) V } with its primal/dual pair.
ZeroErrorResult zero_error_cost(const QuantumChannel& n, const SolveSettings& settings = {});

double max_information(const QuantumChannel& n, const SolveSettings& settings = {});
double smooth_max_information(const QuantumChannel& n, double eps, const SolveSettings& settings = {});
/// 2^{I_max^eps} - 1
double robustness(const QuantumChannel& n, double eps, const SolveSettings& settings = {});

struct CodeDims {
  int a_i;
  int b_i;
  int a_o;
  int b_o;
};

/// Choi matrix of the code applied to N: tr_{A_o B_i}[(J_N^T (x) 1_{A_i B_o}) J_Pi],
/// with J_Pi on A_i B_i A_o B_o and J_N on A_o B_i.
ComplexMatrix choi_compose(const ComplexMatrix& j_n, const ComplexMatrix& j_pi, const CodeDims& dims);

/// Choi matrix on A_i B_i A_o B_o of the unassisted code D o (.) o E with
/// E: A_i -> A_o and D: B_i -> B_o.
ComplexMatrix product_code(const QuantumChannel& encoder, const QuantumChannel& decoder);

enum class CertificateOutcome { optimal_confirmed, primal_only, dual_only, infeasible, feasible_not_tight };

std::string_view to_string(CertificateOutcome o);

struct CertificateCheck {
  CertificateOutcome outcome = CertificateOutcome::infeasible;
  double primal_value = 0.0;  // tr V
  double dual_value = 0.0;    // tr(J_N X)
  double gap = 0.0;           // |primal - dual|
  double primal_violation = 0.0;
  double dual_violation = 0.0;
};

inline constexpr double kCertificateTol = 1e-9;

CertificateCheck verify_certificate(const QuantumChannel& n, const CertificatePair& cert);

}  // namespace nscost
