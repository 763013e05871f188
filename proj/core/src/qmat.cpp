#include "nscost/qmat.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace nscost {
namespace {

std::vector<int> strides_of(const Dims& dims) {
  std::vector<int> strides(dims.size(), 1);
  for (int s = static_cast<int>(dims.size()) - 2; s >= 0; --s) {
    strides[s] = strides[s + 1] * dims[s + 1];
  }
  return strides;
}

// Offsets of every digit combination of `systems` (slow system first) into
// the flat index of the full space.
std::vector<int> offsets_of(const Dims& dims, const std::vector<int>& strides,
                            const std::vector<int>& systems) {
  std::vector<int> offsets{0};
  for (int s : systems) {
    std::vector<int> next;
    next.reserve(offsets.size() * dims[s]);
    for (int base : offsets) {
      for (int k = 0; k < dims[s]; ++k) next.push_back(base + k * strides[s]);
    }
    offsets = std::move(next);
  }
  return offsets;
}

void check_square(const ComplexMatrix& m, const Dims& dims, const char* op) {
  for (int d : dims) {
    if (d < 1) throw DimensionError(std::string(op) + ": subsystem dimension must be positive");
  }
  const int n = product(dims);
  if (m.rows() != n || m.cols() != n) {
    throw DimensionError(std::string(op) + ": matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " but subsystem dimensions multiply to " +
                         std::to_string(n));
  }
}

// Splits 0..dims.size()-1 into (selected, rest), validating the selection.
std::pair<std::vector<int>, std::vector<int>> split_systems(const Dims& dims,
                                                            const std::vector<int>& selected,
                                                            const char* op) {
  std::vector<bool> mark(dims.size(), false);
  for (int s : selected) {
    if (s < 0 || s >= static_cast<int>(dims.size()) || mark[s]) {
      throw DimensionError(std::string(op) + ": invalid subsystem index " + std::to_string(s));
    }
    mark[s] = true;
  }
  std::vector<int> sel;
  std::vector<int> rest;
  for (int s = 0; s < static_cast<int>(dims.size()); ++s) (mark[s] ? sel : rest).push_back(s);
  return {sel, rest};
}

}  // namespace

ComplexMatrix identity(int n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix max_entangled(int d) {
  ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i * d + i, j * d + j) = 1.0;
  }
  return m;
}

ComplexMatrix basis_projector(int n, int k) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(k, k) = 1.0;
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    }
  }
  return true;
}

RealVector eigvalsh(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("eigvalsh: matrix is not square");
  if (m.size() == 0) return RealVector();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_eigenvalue(const ComplexMatrix& m) { return eigvalsh(m).minCoeff(); }

bool is_psd(const ComplexMatrix& m, double tol) {
  return is_hermitian(m, std::max(tol, kHermitianTol)) && min_eigenvalue(m) >= -tol;
}

double trace_norm_hermitian(const ComplexMatrix& m) {
  if (!is_hermitian(m, 1e-10)) throw std::invalid_argument("trace_norm_hermitian: input is not Hermitian");
  return eigvalsh(m).cwiseAbs().sum();
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

int product(std::span<const int> dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims,
                            const std::vector<int>& traced) {
  check_square(m, dims, "partial_trace");
  const auto [tr, keep] = split_systems(dims, traced, "partial_trace");
  const auto strides = strides_of(dims);
  const auto off_keep = offsets_of(dims, strides, keep);
  const auto off_tr = offsets_of(dims, strides, tr);
  const int n = static_cast<int>(off_keep.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) {
      Complex acc = 0.0;
      for (int t : off_tr) acc += m(off_keep[r] + t, off_keep[c] + t);
      out(r, c) = acc;
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const Dims& dims,
                                const std::vector<int>& transposed) {
  check_square(m, dims, "partial_transpose");
  const auto [tp, keep] = split_systems(dims, transposed, "partial_transpose");
  const auto strides = strides_of(dims);
  const auto off_keep = offsets_of(dims, strides, keep);
  const auto off_tp = offsets_of(dims, strides, tp);
  ComplexMatrix out(m.rows(), m.cols());
  for (int a : off_keep) {
    for (int b : off_keep) {
      for (int t1 : off_tp) {
        for (int t2 : off_tp) out(a + t1, b + t2) = m(a + t2, b + t1);
      }
    }
  }
  return out;
}

ComplexMatrix permute_systems(const ComplexMatrix& m, const Dims& dims,
                              const std::vector<int>& perm) {
  check_square(m, dims, "permute_systems");
  const auto [all, rest] = split_systems(dims, perm, "permute_systems");
  if (!rest.empty()) throw DimensionError("permute_systems: permutation must list every subsystem");
  const auto strides = strides_of(dims);
  // offsets_of enumerates digits of perm[0] slowest, which is exactly the
  // flat index order of the permuted space.
  const auto map = offsets_of(dims, strides, perm);
  const int n = static_cast<int>(map.size());
  ComplexMatrix out(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) out(r, c) = m(map[r], map[c]);
  }
  return out;
}

ComplexMatrix insert_identity(const ComplexMatrix& m, const Dims& dims, int position, int d) {
  check_square(m, dims, "insert_identity");
  if (position < 0 || position > static_cast<int>(dims.size()) || d < 1) {
    throw DimensionError("insert_identity: invalid position or dimension");
  }
  Dims ext = dims;
  ext.push_back(d);
  std::vector<int> perm;
  const int last = static_cast<int>(dims.size());
  for (int s = 0; s < last; ++s) {
    if (s == position) perm.push_back(last);
    perm.push_back(s);
  }
  if (position == last) perm.push_back(last);
  return permute_systems(kron(m, identity(d)), ext, perm);
}

}  // namespace nscost
