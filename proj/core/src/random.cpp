#include "nscost/random.hpp"

namespace nscost {

ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  }
  return g;
}

ComplexMatrix random_unitary(int d, Rng& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(d, d, rng));
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  const ComplexMatrix r = qr.matrixQR();
  // Fix the phases so the distribution is Haar.
  for (int j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexMatrix random_hermitian(int d, Rng& rng) { return hermitian_part(ginibre(d, d, rng)); }

ComplexMatrix random_density(int d, Rng& rng, int rank) {
  if (rank < 1) rank = d;
  const ComplexMatrix g = ginibre(d, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

std::vector<ComplexMatrix> random_kraus(int dim_in, int dim_out, Rng& rng, int kraus_rank) {
  if (kraus_rank < 1) kraus_rank = dim_in * dim_out;
  const int tall = dim_out * kraus_rank;
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(tall, dim_in, rng));
  const ComplexMatrix iso = qr.householderQ() * ComplexMatrix::Identity(tall, dim_in);
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(kraus_rank);
  for (int k = 0; k < kraus_rank; ++k) kraus.push_back(iso.block(k * dim_out, 0, dim_out, dim_in));
  return kraus;
}

QuantumChannel random_channel(int dim_in, int dim_out, Rng& rng, int kraus_rank) {
  return choi_of_kraus(random_kraus(dim_in, dim_out, rng, kraus_rank), dim_in, dim_out);
}

}  // namespace nscost
