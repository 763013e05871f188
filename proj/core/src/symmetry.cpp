#include "nscost/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nscost {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Sectors whose capacity w_k s stays below this for every feasible s are
// fixed at zero.
constexpr double kNegligibleSector = 1e-20;

double log2_binomial(int n, int k) {
  return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) / std::log(2.0);
}

double safe_log2(double x) { return x > 0.0 ? std::log2(x) : kNegInf; }

double exp2_or_zero(double l) { return l == kNegInf ? 0.0 : std::exp2(l); }

double log2_sum_exp2(const std::vector<double>& ls) {
  const double mx = *std::max_element(ls.begin(), ls.end());
  if (mx == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double l : ls) acc += exp2_or_zero(l - mx);
  return mx + std::log2(acc);
}

void check_unit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

conic::ConicSolution run_lp(const conic::ConicProblem& problem, const SolveSettings& settings, const char* what) {
  if (settings.problem_hook) settings.problem_hook(problem);
  auto sol = conic::solve(problem, settings.solver);
  if (!sol.ok()) {
    throw SolverFailure(std::string(what) + ": solver returned " + std::string(conic::to_string(sol.status)),
                        sol.status);
  }
  return sol;
}

conic::Entry lp_entry(int var, double value) { return {0, var, var, value}; }

}  // namespace

double LPReduction::normalization() const {
  std::vector<double> ls(log2_weights.size());
  for (std::size_t k = 0; k < ls.size(); ++k) ls[k] = log2_mass(static_cast<int>(k));
  return exp2_or_zero(log2_sum_exp2(ls));
}

LPReduction depolarizing_reduction(int n, int d, double p) {
  if (n < 1) throw std::invalid_argument("blocklength must be positive");
  if (d < 2) throw std::invalid_argument("depolarizing dimension must be at least 2");
  check_unit(p, "p");
  LPReduction r;
  r.n = n;
  r.d = d;
  r.p = p;
  const double q1 = d * (1.0 - p) + p / d;
  const double q2 = p / d;
  const double lq1 = safe_log2(q1);
  const double lq2 = safe_log2(q2);
  const double ld = std::log2(static_cast<double>(d));
  const double lc = std::log2(d - 1.0 / d);
  for (int k = 0; k <= n; ++k) {
    r.log2_weights.push_back(log2_binomial(n, k) - k * ld + (n - k) * lc);
    // 0 * log 0 terms: q^0 = 1 even when q = 0.
    const double a = k == 0 ? 0.0 : k * lq1;
    const double b = n - k == 0 ? 0.0 : (n - k) * lq2;
    r.log2_spectrum.push_back(a + b);
  }
  for (double l : r.log2_weights) {
    if (!std::isfinite(l) || l < -1000.0 || l > 1000.0) {
      throw std::overflow_error("sector weight outside the representable range");
    }
  }
  return r;
}

CostResult classical_cost_lp(const RealMatrix& stochastic, double eps, const SolveSettings& settings) {
  check_unit(eps, "eps");
  const int nx = static_cast<int>(stochastic.rows());
  const int ny = static_cast<int>(stochastic.cols());
  if (nx < 1 || ny < 1) throw ChannelError("empty transition matrix");
  for (int x = 0; x < nx; ++x) {
    if ((stochastic.row(x).array() < 0.0).any() || std::abs(stochastic.row(x).sum() - 1.0) > 1e-10) {
      throw ChannelError("transition matrix is not row-stochastic");
    }
  }
  // Variables: V_y, then Ntilde(y|x) and Y_xy when eps > 0.
  conic::ConicProblem p;
  const bool smooth = eps > 0.0;
  const int nvar = ny + (smooth ? 2 * nx * ny : 0);
  p.blocks.push_back({conic::BlockKind::lp, nvar});
  auto v = [](int y) { return y; };
  auto nt = [ny](int x, int y) { return ny + x * ny + y; };
  auto yy = [nx, ny](int x, int y) { return ny + nx * ny + x * ny + y; };
  for (int y = 0; y < ny; ++y) p.objective.push_back(lp_entry(v(y), 1.0));
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      if (!smooth) {
        // Ntilde = N is forced at eps = 0.
        p.constraints.push_back({{lp_entry(v(y), -1.0)}, conic::Sense::le, -stochastic(x, y)});
        continue;
      }
      p.constraints.push_back({{lp_entry(nt(x, y), 1.0), lp_entry(yy(x, y), -1.0)}, conic::Sense::le, stochastic(x, y)});
      p.constraints.push_back({{lp_entry(nt(x, y), 1.0), lp_entry(v(y), -1.0)}, conic::Sense::le, 0.0});
    }
    if (smooth) {
      conic::SparseBlockMatrix tp, budget;
      for (int y = 0; y < ny; ++y) {
        tp.push_back(lp_entry(nt(x, y), 1.0));
        budget.push_back(lp_entry(yy(x, y), 1.0));
      }
      p.constraints.push_back({tp, conic::Sense::eq, 1.0});
      p.constraints.push_back({budget, conic::Sense::le, eps});
    }
  }
  const auto sol = run_lp(p, settings, "classical LP");
  return cost_from_trv(sol.primal_value);
}

DepolarizingCost depolarizing_cost_lp(int n, int d, double p, double eps, const SolveSettings& settings) {
  check_unit(eps, "eps");
  const LPReduction red = depolarizing_reduction(n, d, p);
  std::vector<double> lw = red.log2_weights;
  std::vector<double> lm(n + 1), mass(n + 1);
  for (int k = 0; k <= n; ++k) {
    lm[k] = red.log2_mass(k);
    mass[k] = exp2_or_zero(lm[k]);
  }
  // Working variables r~_k = w_k r_k, y~_k = w_k y_k, s = s_ref * S.
  // Sum_k min(w_k s, m_k) + eps >= 1 holds at the optimum; its smallest
  // root s_lo is a lower bound used as the scale s_ref.
  auto slack = [&](double ls) {
    double acc = eps;
    for (int k = 0; k <= n; ++k) acc += std::min(exp2_or_zero(lw[k] + ls), mass[k]);
    return acc - 1.0;
  };
  const double ls0 = *std::max_element(red.log2_spectrum.begin(), red.log2_spectrum.end());
  // s = max_k p_k is feasible (r = p); Sum_k w_k s >= 1 is necessary.
  const double ls_floor = -log2_sum_exp2(lw);
  double lo = ls_floor;
  double hi = ls0;
  if (slack(lo) < 0.0) {
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (slack(mid) >= 0.0 ? hi : lo) = mid;
    }
  }
  const double ls_ref = std::min(lo, ls0);
  const double s_max = exp2_or_zero(ls0 - ls_ref);  // S <= s_max at the optimum

  struct Sector {
    int k;
    double cap;  // w_k s_ref
    bool capped;
  };
  std::vector<Sector> sectors;
  for (int k = 0; k <= n; ++k) {
    const double cap = exp2_or_zero(lw[k] + ls_ref);
    if (cap * s_max < kNegligibleSector) continue;
    // r~_k <= 1 and r~_k <= m_k + eps make the capacity row redundant once
    // w_k s_lo exceeds both.
    const bool capped = cap < std::min(1.0, mass[k] + eps);
    sectors.push_back({k, cap, capped});
  }
  const bool smooth = eps > 0.0;
  const int ns = static_cast<int>(sectors.size());
  int ncap = 0;
  for (const auto& s : sectors) ncap += s.capped ? 1 : 0;
  const int nchain = std::max(1, ncap);
  // Variable layout: [S_0 .. S_{nchain-1}] [r~ per sector] [y~ per sector].
  auto sv = [](int j) { return j; };
  auto rv = [nchain](int i) { return nchain + i; };
  auto yv = [nchain, ns](int i) { return nchain + ns + i; };
  conic::ConicProblem prob;
  prob.blocks.push_back({conic::BlockKind::lp, nchain + (smooth ? 2 : 0) * ns});
  prob.objective.push_back(lp_entry(sv(0), 1.0));
  prob.constraints.push_back({{lp_entry(sv(0), -1.0)}, conic::Sense::le, -1.0});
  for (int j = 0; j + 1 < nchain; ++j) {
    prob.constraints.push_back({{lp_entry(sv(j), 1.0), lp_entry(sv(j + 1), -1.0)}, conic::Sense::eq, 0.0});
  }
  int j = 0;
  conic::SparseBlockMatrix total, budget;
  for (int i = 0; i < ns; ++i) {
    const auto& s = sectors[i];
    if (!smooth) {
      // r~ = m is forced at eps = 0.
      if (s.capped) prob.constraints.push_back({{lp_entry(sv(j++), -s.cap)}, conic::Sense::le, -mass[s.k]});
      continue;
    }
    if (mass[s.k] < 1.0) {
      prob.constraints.push_back({{lp_entry(rv(i), 1.0), lp_entry(yv(i), -1.0)}, conic::Sense::le, mass[s.k]});
    }
    if (s.capped) {
      prob.constraints.push_back({{lp_entry(rv(i), 1.0), lp_entry(sv(j++), -s.cap)}, conic::Sense::le, 0.0});
    }
    total.push_back(lp_entry(rv(i), 1.0));
    budget.push_back(lp_entry(yv(i), 1.0));
  }
  if (smooth) {
    prob.constraints.push_back({total, conic::Sense::eq, 1.0});
    prob.constraints.push_back({budget, conic::Sense::le, eps});
  }
  const auto sol = run_lp(prob, settings, "depolarizing LP");
  const double log2_trv = n * std::log2(static_cast<double>(d)) + ls_ref + std::log2(sol.primal_value);
  DepolarizingCost out;
  out.total = cost_from_log2_trv(log2_trv);
  out.cost_per_use = out.total.cost_bits / n;
  out.unceiled_per_use = out.total.half_log_trv / n;
  out.iterations = sol.iterations;
  return out;
}

MutualInformation depolarizing_mutual_info(int d, double p) {
  if (d < 2) throw std::invalid_argument("depolarizing dimension must be at least 2");
  check_unit(p, "p");
  const double dd = static_cast<double>(d) * d;
  const double l1 = 1.0 - p + p / dd;
  const double l2 = p / dd;
  auto xlogx = [](double x) { return x > 0.0 ? x * std::log2(x) : 0.0; };
  MutualInformation mi;
  mi.mutual_info = std::log2(dd) + xlogx(l1) + (dd - 1.0) * xlogx(l2);
  mi.q_e = 0.5 * mi.mutual_info;
  return mi;
}

}  // namespace nscost
