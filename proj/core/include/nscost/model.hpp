#pragma once

// Builder for conic programs over Hermitian matrix variables.
//
// Variables are Hermitian PSD matrices or nonnegative scalars; constraints
// are linear maps of the variables. In the complex field each matrix block
// is embedded into a real symmetric block of twice the size; in the real
// field (all data real) matrices are solved as real symmetric blocks.

#include <functional>
#include <vector>

#include "nscost/conic.hpp"
#include "nscost/qmat.hpp"

namespace nscost {

enum class Field { real, complex };

/// Linear map on Hermitian matrices; it only needs to be correct on
/// Hermitian inputs.
using LinearMap = std::function<ComplexMatrix(const ComplexMatrix&)>;

struct Term {
  int var;
  LinearMap map;
};

class HermitianModel {
 public:
  explicit HermitianModel(Field field);

  Field field() const { return field_; }

  /// New PSD matrix variable of the given dimension; returns its id.
  int add_psd(int dim);
  /// New nonnegative scalar variable (seen by maps as a 1x1 matrix).
  int add_nonneg();

  /// sum_t map_t(X_t) = rhs, an out_dim x out_dim Hermitian matrix.
  void add_equality(int out_dim, const std::vector<Term>& terms, const ComplexMatrix& rhs);
  /// sum_t map_t(X_t) + offset >= 0 (PSD). Introduces a PSD slack variable
  /// equal to the left-hand side and returns its id; its dual slack is the
  /// multiplier of the matrix inequality.
  int add_psd_constraint(int out_dim, const std::vector<Term>& terms, const ComplexMatrix& offset);
  /// sum_t map_t(X_t) <= rhs for 1x1-valued maps.
  void add_scalar_le(const std::vector<Term>& terms, double rhs);

  /// Objective sum_t tr(H_t X_t).
  void set_objective(const std::vector<std::pair<int, ComplexMatrix>>& terms, bool maximize);

  conic::ConicProblem build() const;

  /// Value of a variable in a solution.
  ComplexMatrix primal(const conic::ConicSolution& sol, int var) const;
  /// Dual slack associated with a variable, as a Hermitian matrix in the
  /// original (unembedded) normalization.
  ComplexMatrix dual_slack(const conic::ConicSolution& sol, int var) const;

  int dim(int var) const { return vars_.at(var).dim; }

 private:
  struct Var {
    bool scalar = false;
    int dim = 1;
    int slot = 0;  // psd block index or scalar index
  };
  // Entry keyed by variable; block numbers are assigned in build().
  struct VarEntry {
    int var;
    int row;
    int col;
    double value;
  };
  struct Row {
    std::vector<VarEntry> coeffs;
    conic::Sense sense = conic::Sense::eq;
    double rhs = 0.0;
  };

  std::vector<ComplexMatrix> basis(int var) const;
  std::vector<VarEntry> unit_entries(int var, int index) const;
  std::vector<double> coordinates(const ComplexMatrix& m) const;
  void add_rows(int out_dim, const std::vector<Term>& terms, const std::vector<double>& rhs, conic::Sense sense);
  std::vector<VarEntry> coefficient_entries(int var, const ComplexMatrix& h) const;
  int block_of(int var) const;

  Field field_;
  std::vector<Var> vars_;
  int n_psd_ = 0;
  int n_scalar_ = 0;
  std::vector<Row> rows_;
  std::vector<VarEntry> objective_;
  bool maximize_ = false;
};

}  // namespace nscost
