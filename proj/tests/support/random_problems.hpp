#pragma once

// Random strictly feasible conic programs for solver tests and benchmarks.
// A primal interior point X0, a dual interior slack Z0 and multipliers y0
// are drawn first; b and C are then chosen so that both are feasible.

#include <random>

#include "nscost/conic.hpp"

namespace nscost::testing {

struct RandomProblemOptions {
  int max_sdp_blocks = 3;
  int max_sdp_size = 8;
  int max_lp_size = 8;
  int max_total = 32;
  int max_constraints = 20;
  /// Fraction of constraints given the le sense.
  double le_fraction = 0.0;
};

inline RealMatrix random_pd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  RealMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  }
  return a * a.transpose() / n + 0.1 * RealMatrix::Identity(n, n);
}

inline conic::ConicProblem random_feasible_problem(std::mt19937_64& rng, const RandomProblemOptions& opt = {}) {
  std::uniform_int_distribution<int> nblocks(1, opt.max_sdp_blocks);
  std::uniform_int_distribution<int> sdp_size(1, opt.max_sdp_size);
  std::uniform_int_distribution<int> lp_size(0, opt.max_lp_size);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::normal_distribution<double> g;

  conic::ConicProblem p;
  int total = 0;
  const int k = nblocks(rng);
  for (int b = 0; b < k; ++b) {
    const int n = std::min(sdp_size(rng), opt.max_total - total);
    if (n < 1) break;
    p.blocks.push_back({conic::BlockKind::sdp, n});
    total += n;
  }
  const int l = std::min(lp_size(rng), opt.max_total - total);
  if (l > 0) {
    p.blocks.push_back({conic::BlockKind::lp, l});
    total += l;
  }

  std::vector<RealMatrix> x0, z0;
  int nvars = 0;
  for (const auto& b : p.blocks) {
    if (b.kind == conic::BlockKind::sdp) {
      x0.push_back(random_pd(b.size, rng));
      z0.push_back(random_pd(b.size, rng));
      nvars += b.size * (b.size + 1) / 2;
    } else {
      RealMatrix xv(b.size, 1), zv(b.size, 1);
      for (int i = 0; i < b.size; ++i) {
        xv(i) = unif(rng);
        zv(i) = unif(rng);
      }
      x0.push_back(xv);
      z0.push_back(zv);
      nvars += b.size;
    }
  }

  std::uniform_int_distribution<int> ncons(1, std::max(1, std::min(nvars - 1, opt.max_constraints)));
  const int m = ncons(rng);
  std::vector<double> y0(m);
  for (int i = 0; i < m; ++i) {
    conic::Constraint c;
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
      const int n = p.blocks[b].size;
      if (p.blocks[b].kind == conic::BlockKind::sdp) {
        for (int r = 0; r < n; ++r) {
          for (int s = r; s < n; ++s) c.coeffs.push_back({static_cast<int>(b), r, s, g(rng)});
        }
      } else {
        for (int r = 0; r < n; ++r) c.coeffs.push_back({static_cast<int>(b), r, r, g(rng)});
      }
    }
    c.rhs = conic::inner(c.coeffs, x0);
    if (coin(rng) < opt.le_fraction) {
      c.sense = conic::Sense::le;
      c.rhs += unif(rng);
      y0[i] = -unif(rng);
    } else {
      y0[i] = g(rng);
    }
    p.constraints.push_back(std::move(c));
  }

  // C = Z0 + sum_i y0_i A_i, assembled per block in dense form.
  std::vector<RealMatrix> cd = z0;
  for (int i = 0; i < m; ++i) {
    const auto dense = conic::to_dense(p.constraints[i].coeffs, p.blocks);
    for (std::size_t b = 0; b < cd.size(); ++b) cd[b] += y0[i] * dense[b];
  }
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const int n = p.blocks[b].size;
    if (p.blocks[b].kind == conic::BlockKind::sdp) {
      for (int r = 0; r < n; ++r) {
        for (int s = r; s < n; ++s) p.objective.push_back({static_cast<int>(b), r, s, cd[b](r, s)});
      }
    } else {
      for (int r = 0; r < n; ++r) p.objective.push_back({static_cast<int>(b), r, r, cd[b](r)});
    }
  }
  return p;
}

/// Equality-only form of a problem: each le row receives its own slack in a
/// new LP block.
inline conic::ConicProblem with_explicit_slacks(const conic::ConicProblem& p) {
  conic::ConicProblem q = p;
  int nle = 0;
  for (const auto& c : p.constraints) nle += c.sense == conic::Sense::le ? 1 : 0;
  if (nle == 0) return q;
  const int block = static_cast<int>(q.blocks.size());
  q.blocks.push_back({conic::BlockKind::lp, nle});
  int k = 0;
  for (auto& c : q.constraints) {
    if (c.sense != conic::Sense::le) continue;
    c.coeffs.push_back({block, k, k, 1.0});
    c.sense = conic::Sense::eq;
    ++k;
  }
  return q;
}

}  // namespace nscost::testing
