#include "nscost/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace nscost {

namespace {

constexpr double kDropTol = 1e-15;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

HermitianModel::HermitianModel(Field field) : field_(field) {}

int HermitianModel::add_psd(int dim) {
  if (dim < 1) throw DimensionError("PSD variable needs positive dimension");
  vars_.push_back({false, dim, n_psd_++});
  return static_cast<int>(vars_.size()) - 1;
}

int HermitianModel::add_nonneg() {
  vars_.push_back({true, 1, n_scalar_++});
  return static_cast<int>(vars_.size()) - 1;
}

// Orthonormal basis under Re tr(AB): E_jj, (E_jk + E_kj)/sqrt2 and, in the
// complex field, i(E_jk - E_kj)/sqrt2.
std::vector<ComplexMatrix> HermitianModel::basis(int var) const {
  const auto& v = vars_.at(var);
  const int n = v.dim;
  std::vector<ComplexMatrix> out;
  for (int j = 0; j < n; ++j) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(j, j) = 1.0;
    out.push_back(std::move(e));
  }
  if (v.scalar) return out;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(j, k) = kInvSqrt2;
      e(k, j) = kInvSqrt2;
      out.push_back(std::move(e));
    }
  }
  if (field_ == Field::complex) {
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        ComplexMatrix e = ComplexMatrix::Zero(n, n);
        e(j, k) = Complex(0.0, kInvSqrt2);
        e(k, j) = Complex(0.0, -kInvSqrt2);
        out.push_back(std::move(e));
      }
    }
  }
  return out;
}

// Block entries B with <B, Z> equal to the coordinate of X along basis
// element `index`.
std::vector<HermitianModel::VarEntry> HermitianModel::unit_entries(int var, int index) const {
  const auto& v = vars_.at(var);
  if (v.scalar) return {{var, v.slot, v.slot, 1.0}};
  const int n = v.dim;
  const int pairs = n * (n - 1) / 2;
  auto pair_of = [n](int p) {
    int j = 0;
    while (p >= n - 1 - j) {
      p -= n - 1 - j;
      ++j;
    }
    return std::pair<int, int>(j, j + 1 + p);
  };
  if (field_ == Field::real) {
    if (index < n) return {{var, index, index, 1.0}};
    const auto [j, k] = pair_of(index - n);
    return {{var, j, k, kInvSqrt2}};
  }
  if (index < n) return {{var, index, index, 0.5}, {var, n + index, n + index, 0.5}};
  if (index < n + pairs) {
    const auto [j, k] = pair_of(index - n);
    return {{var, j, k, 0.5 * kInvSqrt2}, {var, n + j, n + k, 0.5 * kInvSqrt2}};
  }
  const auto [j, k] = pair_of(index - n - pairs);
  return {{var, k, n + j, 0.5 * kInvSqrt2}, {var, j, n + k, -0.5 * kInvSqrt2}};
}

// Coordinates of a Hermitian matrix in the basis above (same ordering).
std::vector<double> HermitianModel::coordinates(const ComplexMatrix& m) const {
  const int n = static_cast<int>(m.rows());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  const double sqrt2 = std::sqrt(2.0);
  for (int j = 0; j < n; ++j) out.push_back(m(j, j).real());
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) out.push_back(sqrt2 * 0.5 * (m(j, k).real() + m(k, j).real()));
  }
  if (field_ == Field::complex) {
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) out.push_back(sqrt2 * 0.5 * (m(j, k).imag() - m(k, j).imag()));
    }
  }
  return out;
}

void HermitianModel::add_rows(int out_dim, const std::vector<Term>& terms, const std::vector<double>& rhs,
                              conic::Sense sense) {
  const std::size_t first = rows_.size();
  for (double r : rhs) rows_.push_back({{}, sense, r});
  for (const auto& t : terms) {
    const auto elems = basis(t.var);
    for (std::size_t b = 0; b < elems.size(); ++b) {
      const ComplexMatrix y = t.map(elems[b]);
      if (y.rows() != out_dim || y.cols() != out_dim) {
        throw DimensionError("linear map output has wrong dimension");
      }
      if (field_ == Field::real && y.imag().cwiseAbs().maxCoeff() > 1e-12) {
        throw std::logic_error("complex-valued map in a real-field model");
      }
      const auto coords = coordinates(y);
      const auto unit = unit_entries(t.var, static_cast<int>(b));
      for (std::size_t a = 0; a < coords.size(); ++a) {
        if (std::abs(coords[a]) <= kDropTol) continue;
        for (const auto& u : unit) rows_[first + a].coeffs.push_back({u.var, u.row, u.col, coords[a] * u.value});
      }
    }
  }
}

void HermitianModel::add_equality(int out_dim, const std::vector<Term>& terms, const ComplexMatrix& rhs) {
  if (rhs.rows() != out_dim || rhs.cols() != out_dim) throw DimensionError("right-hand side has wrong dimension");
  if (!is_hermitian(rhs, 1e-10)) throw std::invalid_argument("right-hand side must be Hermitian");
  if (field_ == Field::real && rhs.imag().cwiseAbs().maxCoeff() > 1e-12) {
    throw std::logic_error("complex right-hand side in a real-field model");
  }
  add_rows(out_dim, terms, coordinates(rhs), conic::Sense::eq);
}

int HermitianModel::add_psd_constraint(int out_dim, const std::vector<Term>& terms, const ComplexMatrix& offset) {
  const int slack = add_psd(out_dim);
  std::vector<Term> all = terms;
  all.push_back({slack, [](const ComplexMatrix& s) -> ComplexMatrix { return -s; }});
  add_equality(out_dim, all, -offset);
  return slack;
}

void HermitianModel::add_scalar_le(const std::vector<Term>& terms, double rhs) {
  add_rows(1, terms, {rhs}, conic::Sense::le);
}

std::vector<HermitianModel::VarEntry> HermitianModel::coefficient_entries(int var, const ComplexMatrix& h) const {
  const auto& v = vars_.at(var);
  if (h.rows() != v.dim || h.cols() != v.dim) throw DimensionError("objective coefficient has wrong dimension");
  const auto coords = coordinates(h);
  std::vector<VarEntry> out;
  for (std::size_t b = 0; b < coords.size(); ++b) {
    if (std::abs(coords[b]) <= kDropTol) continue;
    for (const auto& u : unit_entries(var, static_cast<int>(b))) out.push_back({u.var, u.row, u.col, coords[b] * u.value});
  }
  return out;
}

void HermitianModel::set_objective(const std::vector<std::pair<int, ComplexMatrix>>& terms, bool maximize) {
  objective_.clear();
  for (const auto& [var, h] : terms) {
    if (!is_hermitian(h, 1e-10)) throw std::invalid_argument("objective coefficient must be Hermitian");
    if (field_ == Field::real && h.imag().cwiseAbs().maxCoeff() > 1e-12) {
      throw std::logic_error("complex objective in a real-field model");
    }
    const auto e = coefficient_entries(var, h);
    objective_.insert(objective_.end(), e.begin(), e.end());
  }
  maximize_ = maximize;
}

int HermitianModel::block_of(int var) const {
  const auto& v = vars_.at(var);
  return v.scalar ? n_psd_ : v.slot;
}

conic::ConicProblem HermitianModel::build() const {
  conic::ConicProblem p;
  for (const auto& v : vars_) {
    if (!v.scalar) p.blocks.push_back({conic::BlockKind::sdp, field_ == Field::complex ? 2 * v.dim : v.dim});
  }
  if (n_scalar_ > 0) p.blocks.push_back({conic::BlockKind::lp, n_scalar_});
  auto convert = [this](const std::vector<VarEntry>& in) {
    conic::SparseBlockMatrix out;
    out.reserve(in.size());
    for (const auto& e : in) out.push_back({block_of(e.var), std::min(e.row, e.col), std::max(e.row, e.col), e.value});
    std::sort(out.begin(), out.end(), [](const conic::Entry& a, const conic::Entry& b) {
      return std::tie(a.block, a.row, a.col) < std::tie(b.block, b.row, b.col);
    });
    conic::SparseBlockMatrix merged;
    for (const auto& e : out) {
      if (!merged.empty() && merged.back().block == e.block && merged.back().row == e.row &&
          merged.back().col == e.col) {
        merged.back().value += e.value;
      } else {
        merged.push_back(e);
      }
    }
    std::erase_if(merged, [](const conic::Entry& e) { return std::abs(e.value) <= kDropTol; });
    return merged;
  };
  p.objective = convert(objective_);
  for (const auto& r : rows_) {
    auto coeffs = convert(r.coeffs);
    if (coeffs.empty() && std::abs(r.rhs) <= kDropTol && r.sense == conic::Sense::eq) continue;
    p.constraints.push_back({std::move(coeffs), r.sense, r.rhs});
  }
  p.maximize = maximize_;
  return p;
}

ComplexMatrix HermitianModel::primal(const conic::ConicSolution& sol, int var) const {
  const auto& v = vars_.at(var);
  const auto& blk = sol.x.at(block_of(var));
  if (v.scalar) return ComplexMatrix::Constant(1, 1, blk(v.slot, 0));
  if (field_ == Field::complex) return conic::project_embedded(blk);
  return blk.cast<Complex>();
}

ComplexMatrix HermitianModel::dual_slack(const conic::ConicSolution& sol, int var) const {
  const auto& v = vars_.at(var);
  const auto& blk = sol.z.at(block_of(var));
  if (v.scalar) return ComplexMatrix::Constant(1, 1, blk(v.slot, 0));
  if (field_ == Field::complex) return 2.0 * conic::project_embedded(blk);
  return blk.cast<Complex>();
}

}  // namespace nscost
