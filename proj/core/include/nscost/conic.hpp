#pragma once

// Block-diagonal conic programs over real symmetric matrices.
//
// Primal (minimize):   min <C, X>   s.t.  <A_i, X> = b_i  (or <= b_i),  X >= 0
// Dual:                max b^T y    s.t.  C - sum_i y_i A_i = Z >= 0
//
// X is block diagonal; each block is either a PSD cone ("sdp") or a
// nonnegative orthant ("lp", a diagonal block stored as a vector).
// All block matrices are stored sparsely as upper-triangular entries; an
// off-diagonal entry (r, c, v) stands for the symmetric pair
// A(r, c) = A(c, r) = v.

#include <cstdint>
#include <string_view>
#include <vector>

#include "nscost/qmat.hpp"

namespace nscost::conic {

enum class BlockKind { sdp, lp };

struct BlockSpec {
  BlockKind kind = BlockKind::sdp;
  int size = 0;
};

struct Entry {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Sparse block-diagonal symmetric matrix.
using SparseBlockMatrix = std::vector<Entry>;

enum class Sense { eq, le };

struct Constraint {
  SparseBlockMatrix coeffs;
  Sense sense = Sense::eq;
  double rhs = 0.0;
};

struct ConicProblem {
  std::vector<BlockSpec> blocks;
  SparseBlockMatrix objective;
  std::vector<Constraint> constraints;
  bool maximize = false;

  /// Throws std::invalid_argument when entries fall outside the declared
  /// block structure (or are off-diagonal in an LP block).
  void validate() const;
};

/// Embeds a Hermitian n x n matrix as the real symmetric 2n x 2n matrix
/// [[Re h, -Im h], [Im h, Re h]]. Throws on non-Hermitian input.
RealMatrix embed_hermitian(const ComplexMatrix& h);

/// Left inverse of embed_hermitian on the structured subspace; for an
/// arbitrary symmetric w returns (W11 + W22)/2 + i (W21 - W12)/2, which is
/// PSD whenever w is.
ComplexMatrix project_embedded(const RealMatrix& w);

struct SolverOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  /// Record one IterateRecord per iteration in the solution.
  bool keep_history = true;
};

enum class Status { optimal, infeasible, unbounded, max_iter, numerical_error };

std::string_view to_string(Status s);

struct IterateRecord {
  int iteration = 0;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  /// ||b - A(X)|| / (1 + ||b||)
  double primal_residual = 0.0;
  /// ||C - Z - A^*(y)|| / (1 + ||C||)
  double dual_residual = 0.0;
  double complementarity = 0.0;  // <X, Z>
  double step_primal = 0.0;
  double step_dual = 0.0;
};

struct ConicSolution {
  Status status = Status::numerical_error;
  double primal_value = 0.0;
  double dual_value = 0.0;
  /// |primal - dual| / (1 + |primal|)
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  /// One entry per declared block; LP blocks are column vectors.
  std::vector<RealMatrix> x;
  std::vector<RealMatrix> z;
  /// One multiplier per constraint, in the sign convention of the dual above
  /// (for maximization problems, of the equivalent minimization of -C).
  RealVector y;
  int iterations = 0;
  std::vector<IterateRecord> history;
  /// Constraints removed as linearly dependent before the solve.
  int dependent_constraints = 0;

  bool ok() const { return status == Status::optimal; }
};

/// Primal-dual interior-point solve (HKM direction, Mehrotra
/// predictor-corrector). Deterministic and single threaded.
ConicSolution solve(const ConicProblem& problem, const SolverOptions& options = {});

// Helpers shared by the solver, the model builder and the tests.

/// <A, X> for sparse A and block values X (LP blocks as vectors).
double inner(const SparseBlockMatrix& a, const std::vector<RealMatrix>& x);

/// Dense block form of a sparse block matrix.
std::vector<RealMatrix> to_dense(const SparseBlockMatrix& a, const std::vector<BlockSpec>& blocks);

}  // namespace nscost::conic
