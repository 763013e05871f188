#pragma once

// Dense complex linear algebra on multipartite operators.
//
// Multipartite matrices are described by a list of subsystem dimensions;
// the first subsystem is the slowest index (standard Kronecker ordering).

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace nscost {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Subsystem dimensions of a multipartite operator, slow index first.
using Dims = std::vector<int>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

ComplexMatrix identity(int n);

/// Unnormalized maximally entangled operator sum_{ij} |ii><jj| on C^d (x) C^d.
ComplexMatrix max_entangled(int d);

/// Computational-basis projector |k><k| in dimension n.
ComplexMatrix basis_projector(int n, int k);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);

/// Hermitian with smallest eigenvalue >= -tol.
bool is_psd(const ComplexMatrix& m, double tol = kPsdTol);

/// Eigenvalues of a Hermitian matrix in ascending order.
RealVector eigvalsh(const ComplexMatrix& m);

double min_eigenvalue(const ComplexMatrix& m);

/// ||m||_1 for Hermitian m (sum of absolute eigenvalues). Throws on
/// non-Hermitian input.
double trace_norm_hermitian(const ComplexMatrix& m);

/// (m + m^dagger) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& m);

int product(std::span<const int> dims);

/// Traces out the listed subsystems. The result acts on the remaining
/// subsystems in their original order.
ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims,
                            const std::vector<int>& traced);

/// Transposes the listed subsystems.
ComplexMatrix partial_transpose(const ComplexMatrix& m, const Dims& dims,
                                const std::vector<int>& transposed);

/// Reorders subsystems: subsystem i of the result is subsystem perm[i] of m.
ComplexMatrix permute_systems(const ComplexMatrix& m, const Dims& dims,
                              const std::vector<int>& perm);

/// Inserts an identity factor of dimension d so that it becomes subsystem
/// `position` of the result (0 <= position <= dims.size()).
ComplexMatrix insert_identity(const ComplexMatrix& m, const Dims& dims,
                              int position, int d);

}  // namespace nscost
