#include "nscost/programs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nscost/model.hpp"

namespace nscost {

namespace {

constexpr double kCeilTol = 1e-6;
// Accepted simulation error above eps in the integer search.
constexpr double kSearchTol = 1e-7;

bool all_real(std::initializer_list<const ComplexMatrix*> ms) {
  return std::all_of(ms.begin(), ms.end(),
                     [](const ComplexMatrix* m) { return m->imag().cwiseAbs().maxCoeff() <= 1e-14; });
}

Field field_for(std::initializer_list<const ComplexMatrix*> ms) {
  return all_real(ms) ? Field::real : Field::complex;
}

conic::ConicSolution run(const HermitianModel& model, const SolveSettings& settings, const std::string& what) {
  const auto problem = model.build();
  if (settings.problem_hook) settings.problem_hook(problem);
  auto sol = conic::solve(problem, settings.solver);
  if (!sol.ok()) {
    throw SolverFailure(what + ": solver returned " + std::string(conic::to_string(sol.status)), sol.status);
  }
  return sol;
}

LinearMap identity_map() {
  return [](const ComplexMatrix& x) -> ComplexMatrix { return x; };
}

LinearMap scaled(double s) {
  return [s](const ComplexMatrix& x) -> ComplexMatrix { return s * x; };
}

// Scalar variable g -> g * 1_n.
LinearMap scalar_times_identity(int n, double s = 1.0) {
  return [n, s](const ComplexMatrix& g) -> ComplexMatrix { return (s * g(0, 0)) * identity(n); };
}

LinearMap trace_out(const Dims& dims, std::vector<int> traced, double s = 1.0) {
  return [dims, traced = std::move(traced), s](const ComplexMatrix& x) -> ComplexMatrix {
    return s * partial_trace(x, dims, traced);
  };
}

// V -> s * 1_a (x) V
LinearMap identity_tensor(int a, double s = 1.0) {
  return [a, s](const ComplexMatrix& v) -> ComplexMatrix { return s * kron(identity(a), v); };
}

LinearMap trace_map() {
  return [](const ComplexMatrix& v) -> ComplexMatrix { return ComplexMatrix::Constant(1, 1, v.trace()); };
}

// tr_B Y <= gamma 1_A for a scalar gamma variable (or fixed eps when
// gamma < 0).
void add_trace_bound(HermitianModel& model, int y, int a, int b, int gamma, double eps) {
  std::vector<Term> terms{{y, trace_out({a, b}, {1}, -1.0)}};
  if (gamma >= 0) {
    terms.push_back({gamma, scalar_times_identity(a)});
    model.add_psd_constraint(a, terms, ComplexMatrix::Zero(a, a));
  } else {
    model.add_psd_constraint(a, terms, eps * identity(a));
  }
}

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in [0, 1]");
}

// Optimal tr V of the smoothed program; eps = 0 is the zero-error program.
double smooth_trv(const QuantumChannel& n, double eps, const SolveSettings& settings) {
  check_eps(eps);
  if (eps == 0.0) return zero_error_cost(n, settings).cost.tr_v_opt;
  const int a = n.dim_in();
  const int b = n.dim_out();
  const auto& j = n.choi();
  HermitianModel model(field_for({&j}));
  const int y = model.add_psd(a * b);
  const int jt = model.add_psd(a * b);
  const int v = model.add_psd(b);
  add_trace_bound(model, y, a, b, -1, eps);
  model.add_psd_constraint(a * b, {{y, identity_map()}, {jt, scaled(-1.0)}}, j);
  model.add_equality(a, {{jt, trace_out({a, b}, {1})}}, identity(a));
  model.add_psd_constraint(a * b, {{v, identity_tensor(a)}, {jt, scaled(-1.0)}}, ComplexMatrix::Zero(a * b, a * b));
  model.set_objective({{v, identity(b)}}, false);
  return run(model, settings, "smoothed max-information").primal_value;
}

}  // namespace

double ceil_sqrt_from_log2(double log2_x) {
  const double half = 0.5 * log2_x;
  if (half > 52.0) return std::exp2(half);
  const double x = std::exp2(log2_x);
  const double target = x - kCeilTol;
  double m = std::max(1.0, std::ceil(std::sqrt(std::max(target, 0.0))));
  while (m > 1.0 && (m - 1.0) * (m - 1.0) >= target) m -= 1.0;
  while (m * m < target) m += 1.0;
  return m;
}

CostResult cost_from_log2_trv(double log2_trv) {
  CostResult r;
  r.tr_v_opt = std::exp2(log2_trv);
  r.half_log_trv = 0.5 * log2_trv;
  r.m_star = ceil_sqrt_from_log2(log2_trv);
  r.cost_bits = std::log2(r.m_star);
  r.delta = std::max(0.0, r.cost_bits - r.half_log_trv);
  return r;
}

CostResult cost_from_trv(double tr_v) {
  if (!(tr_v > 0.0)) throw std::invalid_argument("tr V must be positive");
  CostResult r = cost_from_log2_trv(std::log2(tr_v));
  r.tr_v_opt = tr_v;
  return r;
}

double diamond_norm_dist(const QuantumChannel& n1, const QuantumChannel& n2, const SolveSettings& settings) {
  if (n1.dim_in() != n2.dim_in() || n1.dim_out() != n2.dim_out()) {
    throw DimensionError("diamond_norm_dist: channels have different dimensions");
  }
  const int a = n1.dim_in();
  const int b = n1.dim_out();
  HermitianModel model(field_for({&n1.choi(), &n2.choi()}));
  const int gamma = model.add_nonneg();
  const int y = model.add_psd(a * b);
  add_trace_bound(model, y, a, b, gamma, 0.0);
  model.add_psd_constraint(a * b, {{y, identity_map()}}, n2.choi() - n1.choi());
  ComplexMatrix one = ComplexMatrix::Ones(1, 1);
  model.set_objective({{gamma, one}}, false);
  return std::max(0.0, run(model, settings, "diamond norm").primal_value);
}

ComplexMatrix choi_compose(const ComplexMatrix& j_n, const ComplexMatrix& j_pi, const CodeDims& d) {
  const int q = d.a_o * d.b_i;
  const int r = d.a_i * d.b_o;
  if (j_n.rows() != q || j_n.cols() != q) throw DimensionError("choi_compose: J_N must act on A_o B_i");
  if (j_pi.rows() != q * r || j_pi.cols() != q * r) throw DimensionError("choi_compose: J_Pi must act on A_i B_i A_o B_o");
  const ComplexMatrix p = permute_systems(j_pi, {d.a_i, d.b_i, d.a_o, d.b_o}, {2, 1, 0, 3});
  const ComplexMatrix x = kron(j_n.transpose(), identity(r)) * p;
  return partial_trace(x, {d.a_o, d.b_i, d.a_i, d.b_o}, {0, 1});
}

ComplexMatrix product_code(const QuantumChannel& encoder, const QuantumChannel& decoder) {
  const ComplexMatrix j = kron(encoder.choi(), decoder.choi());
  return permute_systems(j, {encoder.dim_in(), encoder.dim_out(), decoder.dim_in(), decoder.dim_out()}, {0, 2, 1, 3});
}

SimulationResult min_error_simulation(const QuantumChannel& n, const QuantumChannel& m, CodeClass code,
                                      const SolveSettings& settings) {
  const CodeDims d{m.dim_in(), n.dim_out(), n.dim_in(), m.dim_out()};
  const Dims dims{d.a_i, d.b_i, d.a_o, d.b_o};
  const int size = d.a_i * d.b_i * d.a_o * d.b_o;
  HermitianModel model(field_for({&n.choi(), &m.choi()}));
  const int gamma = model.add_nonneg();
  const int y = model.add_psd(d.a_i * d.b_o);
  const int pi = model.add_psd(size);
  add_trace_bound(model, y, d.a_i, d.b_o, gamma, 0.0);
  const ComplexMatrix j_n = n.choi();
  model.add_psd_constraint(
      d.a_i * d.b_o,
      {{y, identity_map()},
       {pi, [j_n, d](const ComplexMatrix& x) -> ComplexMatrix { return -choi_compose(j_n, x, d); }}},
      m.choi());
  model.add_equality(d.a_i * d.b_i, {{pi, trace_out(dims, {2, 3})}}, identity(d.a_i * d.b_i));
  // A does not signal to B.
  model.add_equality(d.a_i * d.b_i * d.b_o,
                     {{pi,
                       [dims, d](const ComplexMatrix& x) -> ComplexMatrix {
                         return partial_trace(x, dims, {2}) -
                                kron(identity(d.a_i) / static_cast<double>(d.a_i), partial_trace(x, dims, {0, 2}));
                       }}},
                     ComplexMatrix::Zero(d.a_i * d.b_i * d.b_o, d.a_i * d.b_i * d.b_o));
  // B does not signal to A.
  model.add_equality(d.a_i * d.b_i * d.a_o,
                     {{pi,
                       [dims, d](const ComplexMatrix& x) -> ComplexMatrix {
                         return partial_trace(x, dims, {3}) -
                                insert_identity(partial_trace(x, dims, {1, 3}), {d.a_i, d.a_o}, 1, d.b_i) /
                                    static_cast<double>(d.b_i);
                       }}},
                     ComplexMatrix::Zero(d.a_i * d.b_i * d.a_o, d.a_i * d.b_i * d.a_o));
  if (code == CodeClass::ns_ppt) {
    model.add_psd_constraint(
        size, {{pi, [dims](const ComplexMatrix& x) -> ComplexMatrix { return partial_transpose(x, dims, {1, 3}); }}},
        ComplexMatrix::Zero(size, size));
  }
  model.set_objective({{gamma, ComplexMatrix::Ones(1, 1)}}, false);
  const auto sol = run(model, settings, "simulation error");
  return {std::max(0.0, sol.primal_value), model.primal(sol, pi)};
}

double min_error_noiseless(int m, const QuantumChannel& n, CodeClass code, const SolveSettings& settings) {
  if (m < 1) throw std::invalid_argument("min_error_noiseless: m must be positive");
  const int a = n.dim_in();
  const int b = n.dim_out();
  const auto& j = n.choi();
  HermitianModel model(field_for({&j}));
  const int gamma = model.add_nonneg();
  const int y = model.add_psd(a * b);
  const int v = model.add_psd(b);
  add_trace_bound(model, y, a, b, gamma, 0.0);
  const double m2 = static_cast<double>(m) * m;
  model.add_equality(1, {{v, trace_map()}}, ComplexMatrix::Constant(1, 1, m2));
  if (m == 1) {
    // 1_A (x) V - J~ is PSD with zero trace, so J~ = 1_A (x) V; the PPT
    // condition is then implied by V >= 0.
    model.add_psd_constraint(a * b, {{y, identity_map()}, {v, identity_tensor(a, -1.0)}}, j);
  } else {
    const int jt = model.add_psd(a * b);
    model.add_psd_constraint(a * b, {{y, identity_map()}, {jt, scaled(-1.0)}}, j);
    model.add_equality(a, {{jt, trace_out({a, b}, {1})}}, identity(a));
    model.add_psd_constraint(a * b, {{v, identity_tensor(a)}, {jt, scaled(-1.0)}},
                             ComplexMatrix::Zero(a * b, a * b));
    if (code == CodeClass::ns_ppt) {
      const Dims dims{a, b};
      auto vt = [a](const ComplexMatrix& x) -> ComplexMatrix { return kron(identity(a), x.transpose()); };
      const double md = m;
      for (double sign : {1.0, -1.0}) {
        model.add_psd_constraint(
            a * b,
            {{v, vt},
             {jt, [dims, md, sign](const ComplexMatrix& x) -> ComplexMatrix {
                return (-sign * md) * partial_transpose(x, dims, {1});
              }}},
            ComplexMatrix::Zero(a * b, a * b));
      }
    }
  }
  model.set_objective({{gamma, ComplexMatrix::Ones(1, 1)}}, false);
  return std::max(0.0, run(model, settings, "noiseless simulation error").primal_value);
}

CostResult one_shot_cost_ns(const QuantumChannel& n, double eps, const SolveSettings& settings) {
  return cost_from_trv(smooth_trv(n, eps, settings));
}

CostResult one_shot_cost_ns_ppt(const QuantumChannel& n, double eps, const SolveSettings& settings) {
  check_eps(eps);
  int m = 1;
  for (; m < n.dim_in(); ++m) {
    if (min_error_noiseless(m, n, CodeClass::ns_ppt, settings) <= eps + kSearchTol) break;
  }
  return cost_from_trv(static_cast<double>(m) * m);
}

ZeroErrorResult zero_error_cost(const QuantumChannel& n, const SolveSettings& settings) {
  const int a = n.dim_in();
  const int b = n.dim_out();
  HermitianModel model(field_for({&n.choi()}));
  const int v = model.add_psd(b);
  const int s = model.add_psd_constraint(a * b, {{v, identity_tensor(a)}}, -n.choi());
  model.set_objective({{v, identity(b)}}, false);
  const auto sol = run(model, settings, "zero-error cost");
  ZeroErrorResult r;
  r.cost = cost_from_trv(sol.primal_value);
  r.certificate.primal_v = model.primal(sol, v);
  r.certificate.dual_x = model.dual_slack(sol, s);
  return r;
}

double max_information(const QuantumChannel& n, const SolveSettings& settings) {
  return std::log2(zero_error_cost(n, settings).cost.tr_v_opt);
}

double smooth_max_information(const QuantumChannel& n, double eps, const SolveSettings& settings) {
  return std::log2(smooth_trv(n, eps, settings));
}

double robustness(const QuantumChannel& n, double eps, const SolveSettings& settings) {
  return std::max(0.0, smooth_trv(n, eps, settings) - 1.0);
}

std::string_view to_string(CertificateOutcome o) {
  switch (o) {
    case CertificateOutcome::optimal_confirmed: return "optimal_confirmed";
    case CertificateOutcome::primal_only: return "primal_only";
    case CertificateOutcome::dual_only: return "dual_only";
    case CertificateOutcome::infeasible: return "infeasible";
    case CertificateOutcome::feasible_not_tight: return "feasible_not_tight";
  }
  return "unknown";
}

CertificateCheck verify_certificate(const QuantumChannel& n, const CertificatePair& cert) {
  CertificateCheck c;
  const int a = n.dim_in();
  const int b = n.dim_out();
  const auto inf = std::numeric_limits<double>::infinity();
  const bool v_ok = cert.primal_v.rows() == b && cert.primal_v.cols() == b && is_hermitian(cert.primal_v, kCertificateTol);
  const bool x_ok = cert.dual_x.rows() == a * b && cert.dual_x.cols() == a * b && is_hermitian(cert.dual_x, kCertificateTol);
  if (v_ok) {
    c.primal_value = cert.primal_v.trace().real();
    c.primal_violation = std::max(0.0, -min_eigenvalue(hermitian_part(kron(identity(a), cert.primal_v) - n.choi())));
  } else {
    c.primal_violation = inf;
  }
  if (x_ok) {
    const ComplexMatrix x = hermitian_part(cert.dual_x);
    c.dual_value = (n.choi() * x).trace().real();
    const double lx = min_eigenvalue(x);
    const double lt = min_eigenvalue(hermitian_part(identity(b) - partial_trace(x, {a, b}, {0})));
    c.dual_violation = std::max({0.0, -lx, -lt});
  } else {
    c.dual_violation = inf;
  }
  const bool primal = c.primal_violation <= kCertificateTol;
  const bool dual = c.dual_violation <= kCertificateTol;
  c.gap = std::abs(c.primal_value - c.dual_value);
  if (primal && dual) {
    c.outcome = c.gap <= kCertificateTol ? CertificateOutcome::optimal_confirmed : CertificateOutcome::feasible_not_tight;
  } else if (primal) {
    c.outcome = CertificateOutcome::primal_only;
  } else if (dual) {
    c.outcome = CertificateOutcome::dual_only;
  } else {
    c.outcome = CertificateOutcome::infeasible;
  }
  return c;
}

}  // namespace nscost
