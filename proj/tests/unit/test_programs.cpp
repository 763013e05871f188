#include <gtest/gtest.h>

#include <cmath>

#include "nscost/analytic.hpp"
#include "nscost/programs.hpp"
#include "nscost/random.hpp"

namespace nscost {
namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Lower bound on half the diamond distance: trace distance of the outputs on
// the maximally entangled input, 1/(2d) ||J1 - J2||_1.
double entangled_input_bound(const QuantumChannel& a, const QuantumChannel& b) {
  return trace_norm_hermitian(a.choi() - b.choi()) / (2.0 * a.dim_in());
}

TEST(CostResult, CeilingAndDelta) {
  const CostResult c = cost_from_trv(3.55);
  EXPECT_EQ(c.m_star, 2.0);
  EXPECT_EQ(c.cost_bits, 1.0);
  EXPECT_NEAR(c.half_log_trv, 0.5 * std::log2(3.55), 1e-15);
  EXPECT_NEAR(c.delta, 1.0 - 0.5 * std::log2(3.55), 1e-15);
  // Values just above a perfect square within round-off stay on it.
  EXPECT_EQ(cost_from_trv(4.0 + 1e-9).m_star, 2.0);
  EXPECT_EQ(cost_from_trv(4.01).m_star, 3.0);
  EXPECT_EQ(cost_from_trv(1.0).cost_bits, 0.0);
  for (double t : {1.0, 1.5, 2.0, 3.99, 9.0, 17.3, 1e6}) {
    const CostResult r = cost_from_trv(t);
    EXPECT_GE(r.delta, 0.0);
    EXPECT_LE(r.delta, 1.0);
    EXPECT_GE(r.m_star * r.m_star, t - 1e-6);
  }
}

TEST(Diamond, IdenticalChannelsAreAtDistanceZero) {
  SolveSettings s;
  s.solver.gap_tol = 1e-10;
  EXPECT_LE(diamond_norm_dist(dephasing(0.3), dephasing(0.3), s), 1e-9);
  EXPECT_LE(diamond_norm_dist(identity_channel(2), identity_channel(2), s), 1e-9);
}

TEST(Diamond, IdentityVersusDepolarizing) {
  for (double p : {0.1, 0.3, 0.9}) {
    const double dist = diamond_norm_dist(identity_channel(2), depolarizing(2, p));
    EXPECT_NEAR(dist, 0.75 * p, 1e-6);
    EXPECT_GE(dist, entangled_input_bound(identity_channel(2), depolarizing(2, p)) - 1e-7);
  }
}

TEST(Diamond, IdentityVersusDephasing) {
  for (double p : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(diamond_norm_dist(identity_channel(2), dephasing(p)), p, 1e-6);
  }
}

TEST(Diamond, DimensionMismatchThrows) {
  EXPECT_THROW(diamond_norm_dist(identity_channel(2), identity_channel(3)), DimensionError);
}

TEST(Diamond, MetricOnZooSample) {
  Rng rng(11);
  const std::vector<QuantumChannel> zoo{identity_channel(2), depolarizing(2, 0.4), amplitude_damping(0.3),
                                        dephasing(0.2), random_channel(2, 2, rng)};
  const int n = static_cast<int>(zoo.size());
  std::vector<std::vector<double>> dist(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dist[i][j] = diamond_norm_dist(zoo[i], zoo[j]);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      EXPECT_GE(dist[i][j], -1e-8);
      EXPECT_NEAR(dist[i][j], dist[j][i], 1e-8);
      EXPECT_GE(dist[i][j], entangled_input_bound(zoo[i], zoo[j]) - 1e-7);
      for (int k = 0; k < n; ++k) EXPECT_LE(dist[i][k], dist[i][j] + dist[j][k] + 1e-7);
    }
  }
}

TEST(Simulation, ChannelSimulatesItself) {
  EXPECT_LE(min_error_simulation(dephasing(0.2), dephasing(0.2), CodeClass::ns).error, 1e-7);
  EXPECT_LE(min_error_simulation(dephasing(0.2), dephasing(0.2), CodeClass::ns_ppt).error, 1e-7);
}

TEST(Simulation, ConstantChannelIsFree) {
  EXPECT_LE(min_error_simulation(depolarizing(2, 1.0), constant_channel(2, identity(2) / 2), CodeClass::ns).error,
            1e-7);
}

TEST(Simulation, TrivialChannelAgainstReducedProgram) {
  const double full = min_error_simulation(identity_channel(1), identity_channel(2), CodeClass::ns).error;
  const double reduced = min_error_noiseless(1, identity_channel(2), CodeClass::ns);
  EXPECT_GT(full, 1e-3);
  EXPECT_NEAR(full, reduced, 1e-7);
}

TEST(Simulation, ReducedProgramAgreesWithFullProgram) {
  Rng rng(12);
  for (int trial = 0; trial < 3; ++trial) {
    const QuantumChannel ch = random_channel(2, 2, rng);
    for (auto code : {CodeClass::ns, CodeClass::ns_ppt}) {
      const double full = min_error_simulation(identity_channel(2), ch, code).error;
      EXPECT_NEAR(min_error_noiseless(2, ch, code), full, 1e-7);
    }
  }
  const QuantumChannel three = random_channel(3, 2, rng);
  EXPECT_NEAR(min_error_noiseless(2, three, CodeClass::ns),
              min_error_simulation(identity_channel(2), three, CodeClass::ns).error, 1e-7);
}

TEST(Simulation, PptIsNoBetterThanNs) {
  Rng rng(13);
  for (int trial = 0; trial < 3; ++trial) {
    const QuantumChannel a = random_channel(2, 2, rng), b = random_channel(2, 2, rng);
    EXPECT_GE(min_error_simulation(a, b, CodeClass::ns_ppt).error,
              min_error_simulation(a, b, CodeClass::ns).error - 1e-7);
  }
}

TEST(Simulation, NoiselessExamples) {
  EXPECT_LE(min_error_noiseless(2, identity_channel(2), CodeClass::ns), 1e-7);
  EXPECT_LE(min_error_noiseless(3, identity_channel(3), CodeClass::ns), 1e-7);
  EXPECT_LE(min_error_noiseless(2, depolarizing(2, 0.15), CodeClass::ns), 1e-7);
  EXPECT_LE(min_error_noiseless(1, depolarizing(2, 1.0), CodeClass::ns), 1e-7);
  EXPECT_THROW(min_error_noiseless(0, identity_channel(2), CodeClass::ns), std::invalid_argument);
}

TEST(ChoiCompose, IdentityWiringReturnsChannel) {
  Rng rng(14);
  const QuantumChannel n = random_channel(2, 3, rng);
  const ComplexMatrix pi = product_code(identity_channel(2), identity_channel(3));
  EXPECT_LT(max_abs(choi_compose(n.choi(), pi, {2, 3, 2, 3}) - n.choi()), 1e-12);
}

TEST(ChoiCompose, ProductCodeMatchesDirectComposition) {
  Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const QuantumChannel e = random_channel(2, 2, rng), n = random_channel(2, 2, rng), d = random_channel(2, 2, rng);
    const ComplexMatrix direct = compose(d, compose(n, e)).choi();
    EXPECT_LT(max_abs(choi_compose(n.choi(), product_code(e, d), {2, 2, 2, 2}) - direct), 1e-10);
  }
  // Unequal dimensions pin the system ordering: E: 2 -> 3, N: 3 -> 2, D: 2 -> 4.
  const QuantumChannel e = random_channel(2, 3, rng), n = random_channel(3, 2, rng), d = random_channel(2, 4, rng);
  EXPECT_LT(max_abs(choi_compose(n.choi(), product_code(e, d), {2, 2, 3, 4}) - compose(d, compose(n, e)).choi()),
            1e-10);
}

TEST(ChoiCompose, OptimalCodeForPerfectSimulation) {
  const auto sim = min_error_simulation(identity_channel(2), identity_channel(2), CodeClass::ns);
  EXPECT_LE(sim.error, 1e-7);
  EXPECT_LT(max_abs(choi_compose(identity_channel(2).choi(), sim.code, {2, 2, 2, 2}) - identity_channel(2).choi()),
            1e-6);
}

TEST(ChoiCompose, FeasibleCodesYieldChannels) {
  Rng rng(16);
  const QuantumChannel n = random_channel(2, 2, rng), m = random_channel(2, 2, rng);
  const auto sim = min_error_simulation(n, m, CodeClass::ns);
  const ComplexMatrix j = choi_compose(n.choi(), sim.code, {2, 2, 2, 2});
  const auto defects = channel_defects(2, 2, j);
  EXPECT_GE(defects.min_choi_eigenvalue, -1e-7);
  EXPECT_LE(defects.tp_violation, 1e-7);
}

TEST(ChoiCompose, DimensionMismatchThrows) {
  EXPECT_THROW(choi_compose(identity(4), identity(16), {2, 2, 2, 3}), DimensionError);
}

TEST(ZeroError, Examples) {
  for (double r : {0.0, 0.3, 0.5, 0.9}) {
    EXPECT_NEAR(zero_error_cost(amplitude_damping(r)).cost.half_log_trv,
                0.5 * std::log2(2 * (1 + std::sqrt(1 - r)) - r), 1e-6);
  }
  for (double p : {0.0, 0.4, 1.0}) {
    EXPECT_NEAR(zero_error_cost(erasure(2, p)).cost.half_log_trv, 0.5 * std::log2(4 * (1 - p) + p), 1e-6);
  }
  EXPECT_NEAR(zero_error_cost(amplitude_damping(1.0)).cost.half_log_trv, 0.0, 1e-7);
  EXPECT_EQ(zero_error_cost(amplitude_damping(1.0)).cost.cost_bits, 0.0);
}

TEST(ZeroError, SolverCertificateIsFeasible) {
  const auto z = zero_error_cost(depolarizing(2, 0.15));
  const auto check = verify_certificate(depolarizing(2, 0.15), z.certificate);
  EXPECT_LE(check.primal_violation, 1e-6);
  EXPECT_LE(check.dual_violation, 1e-6);
  EXPECT_NEAR(check.primal_value, 3.55, 1e-6);
  EXPECT_NEAR(check.dual_value, 3.55, 1e-6);
}

TEST(OneShotNs, Examples) {
  const CostResult id = one_shot_cost_ns(identity_channel(2), 0.0);
  EXPECT_EQ(id.cost_bits, 1.0);
  const CostResult dep = one_shot_cost_ns(depolarizing(2, 0.15), 0.0);
  EXPECT_NEAR(dep.tr_v_opt, 3.55, 1e-6);
  EXPECT_EQ(dep.m_star, 2.0);
  EXPECT_EQ(dep.cost_bits, 1.0);
  const CostResult deph = one_shot_cost_ns(dephasing(0.5), 0.0);
  EXPECT_NEAR(deph.tr_v_opt, 2.0, 1e-6);
  EXPECT_EQ(deph.m_star, 2.0);
  EXPECT_EQ(deph.cost_bits, 1.0);
  EXPECT_NEAR(deph.delta, 0.5, 1e-6);
}

TEST(OneShotNs, NonincreasingInEps) {
  const QuantumChannel ch = depolarizing(2, 0.15);
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.0, 5e-4, 5e-3, 5e-2, 0.2, 0.5}) {
    const double v = one_shot_cost_ns(ch, eps).half_log_trv;
    EXPECT_LE(v, prev + 1e-7);
    prev = v;
  }
  EXPECT_THROW(one_shot_cost_ns(ch, 1.5), std::invalid_argument);
}

TEST(OneShotNs, DataProcessing) {
  Rng rng(17);
  const QuantumChannel n = random_channel(2, 2, rng);
  for (int trial = 0; trial < 3; ++trial) {
    const QuantumChannel r = random_channel(2, 2, rng);
    for (double eps : {0.0, 0.05}) {
      EXPECT_LE(one_shot_cost_ns(compose(r, n), eps).half_log_trv, one_shot_cost_ns(n, eps).half_log_trv + 1e-7);
    }
  }
}

TEST(OneShotPpt, Examples) {
  EXPECT_EQ(one_shot_cost_ns_ppt(identity_channel(2), 0.0).cost_bits, 1.0);
  const CostResult constant = one_shot_cost_ns_ppt(constant_channel(2, identity(2) / 2), 0.3);
  EXPECT_EQ(constant.m_star, 1.0);
  EXPECT_EQ(constant.cost_bits, 0.0);
  const QuantumChannel dep = depolarizing(2, 0.15);
  EXPECT_GE(one_shot_cost_ns_ppt(dep, 0.05).cost_bits, one_shot_cost_ns(dep, 0.05).cost_bits);
}

TEST(OneShotPpt, NeverCheaperThanNs) {
  Rng rng(18);
  for (int trial = 0; trial < 4; ++trial) {
    const QuantumChannel ch = random_channel(2, 2, rng);
    for (double eps : {0.0, 0.1}) {
      EXPECT_GE(one_shot_cost_ns_ppt(ch, eps).cost_bits, one_shot_cost_ns(ch, eps).cost_bits);
    }
  }
}

TEST(MaxInformation, Examples) {
  EXPECT_NEAR(max_information(constant_channel(2, identity(3) / 3)), 0.0, 1e-7);
  EXPECT_NEAR(max_information(identity_channel(2)), 2.0, 1e-7);
  for (double p : {0.1, 0.5}) EXPECT_NEAR(max_information(depolarizing(2, p)), std::log2(4 * (1 - p) + p), 1e-7);
}

TEST(MaxInformation, AdditiveOnRandomPairs) {
  Rng rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    const QuantumChannel a = random_channel(2, 2, rng), b = random_channel(2, 2, rng);
    EXPECT_NEAR(max_information(tensor(a, b)), max_information(a) + max_information(b), 1e-5);
  }
}

TEST(SmoothMaxInformation, Examples) {
  const QuantumChannel dep = depolarizing(2, 0.15);
  EXPECT_NEAR(smooth_max_information(dep, 0.0), max_information(dep), 1e-9);
  const double v = smooth_max_information(dep, 5e-2);
  EXPECT_GE(v, 2 * 0.657);
  EXPECT_LE(v, std::log2(3.55) + 1e-9);
  const double a = smooth_max_information(dep, 5e-4), b = smooth_max_information(dep, 5e-3);
  EXPECT_GT(a, b);
  EXPECT_GT(b, v);
}

TEST(SmoothMaxInformation, CeilingIdentity) {
  const QuantumChannel ch = amplitude_damping(0.4);
  for (double eps : {0.0, 0.01, 0.1}) {
    const CostResult c = one_shot_cost_ns(ch, eps);
    const double imax = smooth_max_information(ch, eps);
    EXPECT_EQ(c.cost_bits, std::log2(ceil_sqrt_from_log2(imax)));
  }
}

TEST(Robustness, Examples) {
  EXPECT_NEAR(robustness(constant_channel(2, identity(2) / 2), 0.0), 0.0, 1e-7);
  EXPECT_NEAR(robustness(identity_channel(2), 0.0), 3.0, 1e-6);
  EXPECT_NEAR(robustness(depolarizing(2, 0.15), 0.0), 2.55, 1e-6);
}

TEST(VerifyCertificate, ExplicitPairs) {
  const double p = 0.3;
  const int d = 2;
  CertificatePair dep{(d * (1 - p) + p / d) * identity(d), max_entangled(d)};
  EXPECT_EQ(verify_certificate(depolarizing(d, p), dep).outcome, CertificateOutcome::optimal_confirmed);
  CertificatePair deph{(std::abs(2 * p - 1) + 1) * identity(2), max_entangled(2)};
  EXPECT_EQ(verify_certificate(dephasing(p), deph).outcome, CertificateOutcome::optimal_confirmed);
}

TEST(VerifyCertificate, ScaledPrimalIsCaught) {
  CertificatePair pair = certificate(ChannelFamily::depolarizing, 0.3, 2);
  pair.primal_v *= 0.9;
  const auto check = verify_certificate(depolarizing(2, 0.3), pair);
  EXPECT_EQ(check.outcome, CertificateOutcome::dual_only);
  EXPECT_GT(check.primal_violation, 1e-3);
}

TEST(VerifyCertificate, LooseButFeasiblePair) {
  CertificatePair pair{2.0 * identity(2), 0.5 * max_entangled(2)};
  EXPECT_EQ(verify_certificate(identity_channel(2), pair).outcome, CertificateOutcome::feasible_not_tight);
}

TEST(SolveSettings, HookSeesEveryProblemAndOverridesApply) {
  int calls = 0;
  SolveSettings s;
  s.problem_hook = [&](const conic::ConicProblem&) { ++calls; };
  (void)zero_error_cost(dephasing(0.2), s);
  EXPECT_EQ(calls, 1);
  s.solver.max_iter = 1;
  EXPECT_THROW(zero_error_cost(dephasing(0.2), s), SolverFailure);
}

}  // namespace
}  // namespace nscost
