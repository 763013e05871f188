#include "nscost/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Sparse>
#include <Eigen/SparseQR>

namespace nscost::conic {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::max_iter: return "max_iter";
    case Status::numerical_error: return "numerical_error";
  }
  return "unknown";
}

void ConicProblem::validate() const {
  auto check = [this](const SparseBlockMatrix& m, const std::string& where) {
    for (const auto& e : m) {
      if (e.block < 0 || e.block >= static_cast<int>(blocks.size())) {
        throw std::invalid_argument(where + ": entry references unknown block " + std::to_string(e.block));
      }
      const auto& spec = blocks[e.block];
      if (e.row < 0 || e.col < 0 || e.row >= spec.size || e.col >= spec.size) {
        throw std::invalid_argument(where + ": entry outside block " + std::to_string(e.block));
      }
      if (e.row > e.col) {
        throw std::invalid_argument(where + ": entries must be upper triangular (row <= col)");
      }
      if (spec.kind == BlockKind::lp && e.row != e.col) {
        throw std::invalid_argument(where + ": off-diagonal entry in LP block " + std::to_string(e.block));
      }
      if (!std::isfinite(e.value)) throw std::invalid_argument(where + ": non-finite coefficient");
    }
  };
  for (const auto& b : blocks) {
    if (b.size < 1) throw std::invalid_argument("blocks must have positive size");
  }
  check(objective, "objective");
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    check(constraints[i].coeffs, "constraint " + std::to_string(i));
    if (!std::isfinite(constraints[i].rhs)) throw std::invalid_argument("non-finite right-hand side");
  }
}

RealMatrix embed_hermitian(const ComplexMatrix& h) {
  if (!is_hermitian(h, 1e-10)) throw std::invalid_argument("embed_hermitian: input is not Hermitian");
  const Eigen::Index n = h.rows();
  RealMatrix out(2 * n, 2 * n);
  const RealMatrix re = h.real();
  const RealMatrix im = h.imag();
  out.topLeftCorner(n, n) = re;
  out.bottomRightCorner(n, n) = re;
  out.topRightCorner(n, n) = -im;
  out.bottomLeftCorner(n, n) = im;
  return out;
}

ComplexMatrix project_embedded(const RealMatrix& w) {
  const Eigen::Index n = w.rows() / 2;
  const RealMatrix re = 0.5 * (w.topLeftCorner(n, n) + w.bottomRightCorner(n, n));
  const RealMatrix im = 0.5 * (w.bottomLeftCorner(n, n) - w.topRightCorner(n, n));
  ComplexMatrix out(n, n);
  out.real() = re;
  out.imag() = im;
  return out;
}

double inner(const SparseBlockMatrix& a, const std::vector<RealMatrix>& x) {
  double acc = 0.0;
  for (const auto& e : a) {
    const auto& blk = x[e.block];
    if (blk.cols() == 1 && blk.rows() > 1) {
      acc += e.value * blk(e.row, 0);
    } else if (blk.cols() == 1 && blk.rows() == 1) {
      acc += e.value * blk(0, 0);
    } else {
      acc += (e.row == e.col ? 1.0 : 2.0) * e.value * blk(e.row, e.col);
    }
  }
  return acc;
}

std::vector<RealMatrix> to_dense(const SparseBlockMatrix& a, const std::vector<BlockSpec>& blocks) {
  std::vector<RealMatrix> out;
  out.reserve(blocks.size());
  for (const auto& b : blocks) {
    out.push_back(b.kind == BlockKind::sdp ? RealMatrix::Zero(b.size, b.size) : RealMatrix::Zero(b.size, 1));
  }
  for (const auto& e : a) {
    if (blocks[e.block].kind == BlockKind::lp) {
      out[e.block](e.row, 0) += e.value;
    } else {
      out[e.block](e.row, e.col) += e.value;
      if (e.row != e.col) out[e.block](e.col, e.row) += e.value;
    }
  }
  return out;
}

namespace {

constexpr double kStepFraction = 0.98;

struct FullEntry {
  int row;
  int col;
  double value;
};

// Coefficients of one constraint restricted to one SDP block, listed in
// both orientations so that <A, W> = sum v * W(col, row) for any W.
struct SdpRow {
  int constraint;
  std::vector<FullEntry> entries;
};

using Blocks = std::vector<RealMatrix>;

double frob_dot(const Blocks& a, const Blocks& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += (a[k].array() * b[k].array()).sum();
  return acc;
}

double frob_norm(const Blocks& a) { return std::sqrt(frob_dot(a, a)); }

// Largest alpha with x + alpha * dx in the cone, given the Cholesky factor
// of x (SDP) or x itself (LP). Returns +inf when unbounded.
double max_step_sdp(const RealMatrix& chol_lower, const RealMatrix& dx) {
  const auto l = chol_lower.triangularView<Eigen::Lower>();
  const RealMatrix t = l.solve(dx);
  RealMatrix w = l.solve(t.transpose());
  w = 0.5 * (w + w.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(w, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

double max_step_lp(const RealMatrix& x, const RealMatrix& dx) {
  double alpha = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < x.rows(); ++k) {
    if (dx(k, 0) < 0.0) alpha = std::min(alpha, -x(k, 0) / dx(k, 0));
  }
  return alpha;
}

class InteriorPoint {
 public:
  InteriorPoint(const ConicProblem& problem, const SolverOptions& options)
      : problem_(problem), options_(options) {}

  ConicSolution run();

 private:
  void standardize();
  void remove_dependent_rows();
  void index_rows();
  void initial_point();

  Blocks apply_adjoint(const RealVector& y) const;
  RealVector apply_a(const Blocks& w) const;  // tr(A_i W) for arbitrary W
  bool build_schur();
  bool factor_schur();
  RealVector solve_schur(const RealVector& rhs) const;
  void direction(double sigma_mu, const Blocks* dx_aff, const Blocks* dz_aff, Blocks& dx,
                 RealVector& dy, Blocks& dz) const;
  double step_length(const std::vector<RealMatrix>& chol_or_value, const Blocks& d) const;
  bool factor_iterates();
  double barrier_dim() const;

  ConicSolution finish(Status status);

  const ConicProblem& problem_;
  SolverOptions options_;

  // Internal standard form (equalities only, rows normalized).
  std::vector<BlockSpec> blocks_;
  std::vector<SparseBlockMatrix> rows_;
  RealVector b_;
  Blocks c_;
  std::vector<double> row_scale_;     // internal row = original row / scale
  std::vector<int> row_origin_;       // original constraint index of each internal row
  std::vector<int> slack_of_;         // slack index for original le rows, -1 otherwise
  int slack_block_ = -1;
  bool sign_flip_ = false;
  int dependent_ = 0;

  std::vector<std::vector<SdpRow>> sdp_rows_;                          // per block
  std::vector<std::vector<std::vector<std::pair<int, double>>>> lp_cols_;  // per block, per variable
  bool sparse_path_ = false;

  Blocks x_, z_;
  RealVector y_;
  Blocks rd_;
  RealVector rp_;

  // Factorizations of the current iterate.
  std::vector<RealMatrix> x_chol_, z_chol_, z_inv_;
  RealMatrix schur_dense_;
  Eigen::LLT<RealMatrix> schur_llt_;
  Eigen::SparseMatrix<double> schur_sparse_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> schur_ldlt_;
  bool pattern_analyzed_ = false;

  std::vector<IterateRecord> history_;
  int iterations_ = 0;
};

void InteriorPoint::standardize() {
  blocks_ = problem_.blocks;
  int n_slack = 0;
  slack_of_.assign(problem_.constraints.size(), -1);
  for (std::size_t i = 0; i < problem_.constraints.size(); ++i) {
    if (problem_.constraints[i].sense == Sense::le) slack_of_[i] = n_slack++;
  }
  if (n_slack > 0) {
    slack_block_ = static_cast<int>(blocks_.size());
    blocks_.push_back({BlockKind::lp, n_slack});
  }
  sign_flip_ = problem_.maximize;
  c_ = to_dense(problem_.objective, blocks_);
  if (sign_flip_) {
    for (auto& blk : c_) blk = -blk;
  }
  for (std::size_t i = 0; i < problem_.constraints.size(); ++i) {
    const auto& con = problem_.constraints[i];
    // Merge duplicate coordinates.
    SparseBlockMatrix merged = con.coeffs;
    std::sort(merged.begin(), merged.end(), [](const Entry& a, const Entry& b) {
      return std::tie(a.block, a.row, a.col) < std::tie(b.block, b.row, b.col);
    });
    SparseBlockMatrix row;
    for (const auto& e : merged) {
      if (!row.empty() && row.back().block == e.block && row.back().row == e.row && row.back().col == e.col) {
        row.back().value += e.value;
      } else {
        row.push_back(e);
      }
    }
    std::erase_if(row, [](const Entry& e) { return e.value == 0.0; });
    double norm2 = 0.0;
    for (const auto& e : row) norm2 += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
    double scale = std::sqrt(norm2);
    if (scale == 0.0) {
      // 0 = b or 0 <= b: either trivially true or infeasible; keep the row
      // only if it is violated so that the residual exposes it.
      const bool violated = con.sense == Sense::eq ? con.rhs != 0.0 : con.rhs < 0.0;
      if (!violated) continue;
      scale = 1.0;
    }
    for (auto& e : row) e.value /= scale;
    if (slack_of_[i] >= 0) row.push_back({slack_block_, slack_of_[i], slack_of_[i], 1.0});
    rows_.push_back(std::move(row));
    row_scale_.push_back(scale);
    row_origin_.push_back(static_cast<int>(i));
  }
  b_.resize(static_cast<Eigen::Index>(rows_.size()));
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    b_(static_cast<Eigen::Index>(k)) = problem_.constraints[row_origin_[k]].rhs / row_scale_[k];
  }
  sparse_path_ = std::all_of(blocks_.begin(), blocks_.end(),
                             [](const BlockSpec& b) { return b.kind == BlockKind::lp; });
}

// Drops equality rows that are linear combinations of others; the Schur
// complement would otherwise be singular. Consistency of the dropped rows
// is checked on the final iterate.
void InteriorPoint::remove_dependent_rows() {
  const int m = static_cast<int>(rows_.size());
  if (m < 2) return;
  std::vector<int> offset(blocks_.size() + 1, 0);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const int n = blocks_[k].size;
    offset[k + 1] = offset[k] + (blocks_[k].kind == BlockKind::sdp ? n * (n + 1) / 2 : n);
  }
  const int ncoords = offset.back();
  auto coord = [&](const Entry& e) {
    if (blocks_[e.block].kind == BlockKind::lp) return offset[e.block] + e.row;
    // column-major packed upper triangle
    return offset[e.block] + e.col * (e.col + 1) / 2 + e.row;
  };
  const double sqrt2 = std::sqrt(2.0);

  std::vector<int> keep;
  if (sparse_path_) {
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < m; ++i) {
      for (const auto& e : rows_[i]) trip.emplace_back(coord(e), i, e.value);
    }
    Eigen::SparseMatrix<double> at(ncoords, m);
    at.setFromTriplets(trip.begin(), trip.end());
    at.makeCompressed();
    Eigen::SparseQR<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> qr;
    qr.setPivotThreshold(1e-10);
    qr.compute(at);
    if (qr.info() != Eigen::Success) return;
    const int rank = static_cast<int>(qr.rank());
    if (rank == m) return;
    const auto& perm = qr.colsPermutation().indices();
    for (int k = 0; k < rank; ++k) keep.push_back(perm(k));
  } else {
    RealMatrix at = RealMatrix::Zero(ncoords, m);
    for (int i = 0; i < m; ++i) {
      for (const auto& e : rows_[i]) at(coord(e), i) += (e.row == e.col ? 1.0 : sqrt2) * e.value;
    }
    Eigen::ColPivHouseholderQR<RealMatrix> qr(at);
    qr.setThreshold(1e-10);
    const int rank = static_cast<int>(qr.rank());
    if (rank == m) return;
    const auto& perm = qr.colsPermutation().indices();
    for (int k = 0; k < rank; ++k) keep.push_back(perm(k));
  }
  std::sort(keep.begin(), keep.end());
  dependent_ = m - static_cast<int>(keep.size());
  std::vector<SparseBlockMatrix> rows;
  std::vector<double> scale;
  std::vector<int> origin;
  RealVector b(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    rows.push_back(std::move(rows_[keep[k]]));
    scale.push_back(row_scale_[keep[k]]);
    origin.push_back(row_origin_[keep[k]]);
    b(static_cast<Eigen::Index>(k)) = b_(keep[k]);
  }
  rows_ = std::move(rows);
  row_scale_ = std::move(scale);
  row_origin_ = std::move(origin);
  b_ = std::move(b);
}

void InteriorPoint::index_rows() {
  sdp_rows_.assign(blocks_.size(), {});
  lp_cols_.assign(blocks_.size(), {});
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k].kind == BlockKind::lp) lp_cols_[k].resize(blocks_[k].size);
  }
  for (int i = 0; i < static_cast<int>(rows_.size()); ++i) {
    // rows_ entries are sorted by block except the trailing slack entry.
    std::vector<FullEntry>* current = nullptr;
    int current_block = -1;
    for (const auto& e : rows_[i]) {
      if (blocks_[e.block].kind == BlockKind::lp) {
        lp_cols_[e.block][e.row].emplace_back(i, e.value);
        continue;
      }
      if (e.block != current_block) {
        sdp_rows_[e.block].push_back({i, {}});
        current = &sdp_rows_[e.block].back().entries;
        current_block = e.block;
      }
      current->push_back({e.row, e.col, e.value});
      if (e.row != e.col) current->push_back({e.col, e.row, e.value});
    }
  }
}

void InteriorPoint::initial_point() {
  const int m = static_cast<int>(rows_.size());
  x_.clear();
  z_.clear();
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const int n = blocks_[k].size;
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    // Per-row norms of the coefficients restricted to this block.
    std::vector<double> norm_block(m, 0.0);
    if (blocks_[k].kind == BlockKind::sdp) {
      for (const auto& r : sdp_rows_[k]) {
        double acc = 0.0;
        for (const auto& e : r.entries) acc += e.value * e.value;
        norm_block[r.constraint] = std::sqrt(acc);
      }
    } else {
      for (const auto& col : lp_cols_[k]) {
        for (const auto& [i, v] : col) norm_block[i] += v * v;
      }
      for (auto& v : norm_block) v = std::sqrt(v);
    }
    double ratio = 0.0;
    double norm_a = 0.0;
    for (int i = 0; i < m; ++i) {
      if (norm_block[i] == 0.0) continue;
      ratio = std::max(ratio, (1.0 + std::abs(b_(i))) / (1.0 + norm_block[i]));
      norm_a = std::max(norm_a, norm_block[i]);
    }
    const double norm_c = c_[k].norm();
    const double xi = std::max({10.0, sqrt_n, (blocks_[k].kind == BlockKind::sdp ? n : sqrt_n) * ratio});
    const double eta = std::max({10.0, sqrt_n, norm_a, norm_c});
    if (blocks_[k].kind == BlockKind::sdp) {
      x_.push_back(xi * RealMatrix::Identity(n, n));
      z_.push_back(eta * RealMatrix::Identity(n, n));
    } else {
      x_.push_back(RealMatrix::Constant(n, 1, xi));
      z_.push_back(RealMatrix::Constant(n, 1, eta));
    }
  }
  y_ = RealVector::Zero(m);
}

Blocks InteriorPoint::apply_adjoint(const RealVector& y) const {
  Blocks out;
  out.reserve(blocks_.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const int n = blocks_[k].size;
    if (blocks_[k].kind == BlockKind::sdp) {
      RealMatrix s = RealMatrix::Zero(n, n);
      for (const auto& r : sdp_rows_[k]) {
        const double yi = y(r.constraint);
        if (yi == 0.0) continue;
        for (const auto& e : r.entries) s(e.row, e.col) += e.value * yi;
      }
      out.push_back(std::move(s));
    } else {
      RealMatrix s = RealMatrix::Zero(n, 1);
      for (int v = 0; v < n; ++v) {
        double acc = 0.0;
        for (const auto& [i, a] : lp_cols_[k][v]) acc += a * y(i);
        s(v, 0) = acc;
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

RealVector InteriorPoint::apply_a(const Blocks& w) const {
  RealVector out = RealVector::Zero(static_cast<Eigen::Index>(rows_.size()));
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const auto& wk = w[k];
    if (blocks_[k].kind == BlockKind::sdp) {
      for (const auto& r : sdp_rows_[k]) {
        double acc = 0.0;
        for (const auto& e : r.entries) acc += e.value * wk(e.col, e.row);
        out(r.constraint) += acc;
      }
    } else {
      for (int v = 0; v < blocks_[k].size; ++v) {
        for (const auto& [i, a] : lp_cols_[k][v]) out(i) += a * wk(v, 0);
      }
    }
  }
  return out;
}

bool InteriorPoint::factor_iterates() {
  x_chol_.assign(blocks_.size(), RealMatrix());
  z_chol_.assign(blocks_.size(), RealMatrix());
  z_inv_.assign(blocks_.size(), RealMatrix());
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k].kind == BlockKind::lp) {
      if ((x_[k].array() <= 0.0).any() || (z_[k].array() <= 0.0).any()) return false;
      x_chol_[k] = x_[k];
      z_chol_[k] = z_[k];
      z_inv_[k] = z_[k].cwiseInverse();
      continue;
    }
    Eigen::LLT<RealMatrix> lx(x_[k]);
    Eigen::LLT<RealMatrix> lz(z_[k]);
    if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
    x_chol_[k] = lx.matrixL();
    z_chol_[k] = lz.matrixL();
    const int n = blocks_[k].size;
    RealMatrix zi = lz.solve(RealMatrix::Identity(n, n));
    z_inv_[k] = 0.5 * (zi + zi.transpose());
  }
  return true;
}

// M_ij = sum_blocks tr(A_i X A_j Z^{-1}).
bool InteriorPoint::build_schur() {
  const int m = static_cast<int>(rows_.size());
  if (sparse_path_) {
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      for (int v = 0; v < blocks_[k].size; ++v) {
        const double d = x_[k](v, 0) * z_inv_[k](v, 0);
        const auto& col = lp_cols_[k][v];
        for (const auto& [i, a] : col) {
          for (const auto& [j, c] : col) trip.emplace_back(i, j, a * c * d);
        }
      }
    }
    schur_sparse_.resize(m, m);
    schur_sparse_.setFromTriplets(trip.begin(), trip.end());
    return true;
  }
  schur_dense_.setZero(m, m);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k].kind == BlockKind::lp) continue;
    const int n = blocks_[k].size;
    const RealMatrix& x = x_[k];
    const RealMatrix& zi = z_inv_[k];
    const auto& rows = sdp_rows_[k];
    RealMatrix bj(n, n);
    for (std::size_t jj = 0; jj < rows.size(); ++jj) {
      const auto& aj = rows[jj].entries;
      if (static_cast<int>(aj.size()) <= 2 * n) {
        bj.setZero();
        for (const auto& e : aj) bj.noalias() += e.value * x.col(e.row) * zi.row(e.col);
      } else {
        RealMatrix dense = RealMatrix::Zero(n, n);
        for (const auto& e : aj) dense(e.row, e.col) += e.value;
        bj.noalias() = x * dense * zi;
      }
      const int j = rows[jj].constraint;
      for (std::size_t ii = jj; ii < rows.size(); ++ii) {
        double acc = 0.0;
        for (const auto& e : rows[ii].entries) acc += e.value * bj(e.col, e.row);
        schur_dense_(rows[ii].constraint, j) += acc;
      }
    }
  }
  // Block-local row lists are increasing in constraint index, so only the
  // lower triangle has been filled.
  schur_dense_.triangularView<Eigen::StrictlyUpper>() = schur_dense_.transpose();
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k].kind != BlockKind::lp) continue;
    for (int v = 0; v < blocks_[k].size; ++v) {
      const double d = x_[k](v, 0) * z_inv_[k](v, 0);
      const auto& col = lp_cols_[k][v];
      for (const auto& [i, a] : col) {
        for (const auto& [j, c] : col) schur_dense_(i, j) += a * c * d;
      }
    }
  }
  return schur_dense_.allFinite();
}

bool InteriorPoint::factor_schur() {
  if (sparse_path_) {
    if (!pattern_analyzed_) {
      schur_ldlt_.analyzePattern(schur_sparse_);
      pattern_analyzed_ = true;
    }
    schur_ldlt_.factorize(schur_sparse_);
    return schur_ldlt_.info() == Eigen::Success;
  }
  schur_llt_.compute(schur_dense_);
  if (schur_llt_.info() == Eigen::Success) return true;
  // Near-singular Schur complements appear close to the optimum of degenerate
  // problems; a tiny diagonal shift keeps the direction usable.
  const double shift = 1e-14 * std::max(1.0, schur_dense_.diagonal().cwiseAbs().maxCoeff());
  schur_dense_.diagonal().array() += shift;
  schur_llt_.compute(schur_dense_);
  return schur_llt_.info() == Eigen::Success;
}

RealVector InteriorPoint::solve_schur(const RealVector& rhs) const {
  if (sparse_path_) return schur_ldlt_.solve(rhs);
  return schur_llt_.solve(rhs);
}

// HKM direction for the target sigma_mu, optionally with the Mehrotra
// second-order correction built from the affine direction.
void InteriorPoint::direction(double sigma_mu, const Blocks* dx_aff, const Blocks* dz_aff, Blocks& dx,
                              RealVector& dy, Blocks& dz) const {
  const std::size_t nb = blocks_.size();
  Blocks g(nb), t(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    if (blocks_[k].kind == BlockKind::lp) {
      RealMatrix gk = sigma_mu * z_inv_[k] - x_[k];
      if (dx_aff != nullptr) gk.array() -= (*dx_aff)[k].array() * (*dz_aff)[k].array() * z_inv_[k].array();
      t[k] = gk.array() - x_[k].array() * rd_[k].array() * z_inv_[k].array();
      g[k] = std::move(gk);
      continue;
    }
    RealMatrix gk = sigma_mu * z_inv_[k] - x_[k];
    if (dx_aff != nullptr) gk.noalias() -= (*dx_aff)[k] * (*dz_aff)[k] * z_inv_[k];
    t[k] = gk - x_[k] * rd_[k] * z_inv_[k];
    g[k] = std::move(gk);
  }
  const RealVector rhs = rp_ - apply_a(t);
  dy = solve_schur(rhs);
  dz = apply_adjoint(dy);
  for (std::size_t k = 0; k < nb; ++k) dz[k] = rd_[k] - dz[k];
  dx.resize(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    if (blocks_[k].kind == BlockKind::lp) {
      dx[k] = g[k].array() - x_[k].array() * dz[k].array() * z_inv_[k].array();
    } else {
      RealMatrix d = g[k] - x_[k] * dz[k] * z_inv_[k];
      dx[k] = 0.5 * (d + d.transpose());
    }
  }
}

double InteriorPoint::step_length(const std::vector<RealMatrix>& chol_or_value, const Blocks& d) const {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    alpha = std::min(alpha, blocks_[k].kind == BlockKind::lp ? max_step_lp(chol_or_value[k], d[k])
                                                             : max_step_sdp(chol_or_value[k], d[k]));
  }
  return alpha;
}

double InteriorPoint::barrier_dim() const {
  double nu = 0.0;
  for (const auto& b : blocks_) nu += b.size;
  return nu;
}

ConicSolution InteriorPoint::run() {
  problem_.validate();
  standardize();
  for (std::size_t k = 0; k < problem_.blocks.size(); ++k) {
    if (problem_.blocks[k].kind == BlockKind::sdp) sparse_path_ = false;
  }
  if (rows_.empty()) {
    // No constraints: min <C, X> over the cone is 0 if C is in the dual cone
    // and unbounded otherwise.
    x_.clear();
    z_.clear();
    bool bounded = true;
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const int n = blocks_[k].size;
      if (blocks_[k].kind == BlockKind::lp) {
        bounded = bounded && c_[k].minCoeff() >= 0.0;
        x_.push_back(RealMatrix::Zero(n, 1));
      } else {
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(c_[k], Eigen::EigenvaluesOnly);
        bounded = bounded && es.eigenvalues().minCoeff() >= 0.0;
        x_.push_back(RealMatrix::Zero(n, n));
      }
      z_.push_back(c_[k]);
    }
    y_ = RealVector();
    return finish(bounded ? Status::optimal : Status::unbounded);
  }
  remove_dependent_rows();
  index_rows();
  initial_point();

  const double norm_b = b_.norm();
  const double norm_c = frob_norm(c_);
  const double nu = barrier_dim();
  int stalled = 0;

  for (iterations_ = 0;; ++iterations_) {
    const Blocks aty = apply_adjoint(y_);
    rd_.resize(blocks_.size());
    for (std::size_t k = 0; k < blocks_.size(); ++k) rd_[k] = c_[k] - z_[k] - aty[k];
    rp_ = b_ - apply_a(x_);
    const double pobj = frob_dot(c_, x_);
    const double dobj = b_.dot(y_);
    const double compl_xz = frob_dot(x_, z_);
    const double mu = compl_xz / nu;
    const double pres = rp_.norm() / (1.0 + norm_b);
    const double dres = frob_norm(rd_) / (1.0 + norm_c);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));

    IterateRecord rec;
    rec.iteration = iterations_;
    rec.primal_obj = sign_flip_ ? -pobj : pobj;
    rec.dual_obj = sign_flip_ ? -dobj : dobj;
    rec.primal_residual = pres;
    rec.dual_residual = dres;
    rec.complementarity = compl_xz;
    if (options_.keep_history) history_.push_back(rec);

    if (!std::isfinite(pobj) || !std::isfinite(dobj)) return finish(Status::numerical_error);
    if (gap <= options_.gap_tol && pres <= options_.feas_tol && dres <= options_.feas_tol) {
      return finish(Status::optimal);
    }
    // Divergence along a ray certifies infeasibility.
    if (dobj > 1e8 * (1.0 + std::abs(pobj))) {
      const Blocks ray = apply_adjoint(y_);
      double worst = 0.0;
      for (std::size_t k = 0; k < blocks_.size(); ++k) {
        if (blocks_[k].kind == BlockKind::lp) {
          worst = std::max(worst, ray[k].maxCoeff());
        } else {
          Eigen::SelfAdjointEigenSolver<RealMatrix> es(ray[k], Eigen::EigenvaluesOnly);
          worst = std::max(worst, es.eigenvalues().maxCoeff());
        }
      }
      if (worst / dobj <= options_.feas_tol) return finish(Status::infeasible);
    }
    if (pobj < -1e8 * (1.0 + std::abs(dobj))) {
      const RealVector ax = apply_a(x_);
      // A(X) stays equal to b along the ray while <C, X> diverges.
      if ((ax - b_).norm() / std::abs(pobj) <= options_.feas_tol || ax.norm() / std::abs(pobj) <= options_.feas_tol) {
        return finish(Status::unbounded);
      }
    }
    if (iterations_ >= options_.max_iter) return finish(Status::max_iter);

    if (!factor_iterates()) return finish(Status::numerical_error);
    if (!build_schur() || !factor_schur()) return finish(Status::numerical_error);

    // Predictor.
    Blocks dx_aff, dz_aff;
    RealVector dy_aff;
    direction(0.0, nullptr, nullptr, dx_aff, dy_aff, dz_aff);
    const double ap_aff = std::min(1.0, step_length(x_chol_, dx_aff));
    const double ad_aff = std::min(1.0, step_length(z_chol_, dz_aff));
    double mu_aff = 0.0;
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      mu_aff += ((x_[k] + ap_aff * dx_aff[k]).array() * (z_[k] + ad_aff * dz_aff[k]).array()).sum();
    }
    mu_aff /= nu;
    const double expon = std::max(1.0, 3.0 * std::pow(std::min(ap_aff, ad_aff), 2));
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, expon), 0.0, 1.0);

    // Corrector.
    Blocks dx, dz;
    RealVector dy;
    direction(sigma * mu, &dx_aff, &dz_aff, dx, dy, dz);
    if (!dy.allFinite()) return finish(Status::numerical_error);
    const double ap = std::min(1.0, kStepFraction * step_length(x_chol_, dx));
    const double ad = std::min(1.0, kStepFraction * step_length(z_chol_, dz));
    if (options_.keep_history) {
      history_.back().step_primal = ap;
      history_.back().step_dual = ad;
    }
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      x_[k] += ap * dx[k];
      z_[k] += ad * dz[k];
    }
    y_ += ad * dy;
    stalled = (ap < 1e-10 && ad < 1e-10) ? stalled + 1 : 0;
    if (stalled >= 5) return finish(Status::numerical_error);
  }
}

ConicSolution InteriorPoint::finish(Status status) {
  ConicSolution sol;
  sol.status = status;
  sol.iterations = iterations_;
  sol.history = std::move(history_);
  sol.dependent_constraints = dependent_;
  const std::size_t nb = problem_.blocks.size();
  sol.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(std::min(nb, x_.size())));
  sol.z.assign(z_.begin(), z_.begin() + static_cast<std::ptrdiff_t>(std::min(nb, z_.size())));
  const Eigen::Index m_orig = static_cast<Eigen::Index>(problem_.constraints.size());
  sol.y = RealVector::Zero(m_orig);
  for (std::size_t k = 0; k < row_origin_.size() && static_cast<Eigen::Index>(k) < y_.size(); ++k) {
    const double v = y_(static_cast<Eigen::Index>(k)) / row_scale_[k];
    sol.y(row_origin_[k]) = sign_flip_ ? -v : v;
  }
  const auto objective = to_dense(problem_.objective, problem_.blocks);
  sol.primal_value = sol.x.size() == nb ? frob_dot(objective, sol.x) : 0.0;
  RealVector b(m_orig);
  for (Eigen::Index i = 0; i < m_orig; ++i) b(i) = problem_.constraints[i].rhs;
  sol.dual_value = b.dot(sol.y);
  sol.gap = std::abs(sol.primal_value - sol.dual_value) / (1.0 + std::abs(sol.primal_value));

  // Residuals against the original constraints, row by row normalized.
  double worst_dependent = 0.0;
  RealVector viol = RealVector::Zero(m_orig);
  std::vector<char> kept(problem_.constraints.size(), 0);
  for (int o : row_origin_) kept[o] = 1;
  if (sol.x.size() == nb) {
    for (Eigen::Index i = 0; i < m_orig; ++i) {
      const auto& con = problem_.constraints[i];
      double norm2 = 0.0;
      for (const auto& e : con.coeffs) norm2 += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
      const double scale = norm2 > 0.0 ? std::sqrt(norm2) : 1.0;
      const double r = inner(con.coeffs, sol.x) - con.rhs;
      const double v = (con.sense == Sense::eq ? std::abs(r) : std::max(0.0, r)) / scale;
      viol(i) = v;
      if (!kept[i]) worst_dependent = std::max(worst_dependent, v);
    }
  }
  const double norm_b = b_.size() > 0 ? b_.norm() : 0.0;
  sol.primal_residual = viol.norm() / (1.0 + norm_b);
  sol.dual_residual = rd_.empty() ? 0.0 : frob_norm(rd_) / (1.0 + frob_norm(c_));
  if (status == Status::optimal && worst_dependent / (1.0 + norm_b) > 100.0 * options_.feas_tol) {
    // A dropped row is not implied by the kept ones: the system is inconsistent.
    sol.status = Status::infeasible;
  }
  return sol;
}

}  // namespace

ConicSolution solve(const ConicProblem& problem, const SolverOptions& options) {
  InteriorPoint ipm(problem, options);
  return ipm.run();
}

}  // namespace nscost::conic
