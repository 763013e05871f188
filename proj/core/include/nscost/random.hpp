#pragma once

// Seeded random quantum objects for property tests and benchmarks.

#include <random>

#include "nscost/channels.hpp"

namespace nscost {

using Rng = std::mt19937_64;

/// Matrix with i.i.d. standard complex Gaussian entries.
ComplexMatrix ginibre(int rows, int cols, Rng& rng);

/// Haar-random unitary.
ComplexMatrix random_unitary(int d, Rng& rng);

/// Random Hermitian matrix (GUE-like).
ComplexMatrix random_hermitian(int d, Rng& rng);

/// Random density matrix of the given rank (Hilbert-Schmidt measure at full rank).
ComplexMatrix random_density(int d, Rng& rng, int rank = -1);

/// Random CPTP map with `kraus_rank` Kraus operators, drawn from a
/// Haar-random isometry. kraus_rank defaults to dim_in * dim_out.
QuantumChannel random_channel(int dim_in, int dim_out, Rng& rng, int kraus_rank = -1);

/// Kraus operators of a random channel, same distribution as random_channel.
std::vector<ComplexMatrix> random_kraus(int dim_in, int dim_out, Rng& rng, int kraus_rank = -1);

}  // namespace nscost
