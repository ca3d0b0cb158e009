#pragma once

// Dense reference implementations used as independent oracles in tests.
// Everything here recomputes results straight from the definitions with
// naive dense arithmetic, deliberately avoiding the sparse code paths under
// test.

#include <cstdint>
#include <vector>

#include "uniwalk/config.hpp"
#include "uniwalk/network.hpp"

namespace uniwalk::testing {

using DenseMatrix = std::vector<std::vector<double>>;

DenseMatrix dense_zero(std::size_t rows, std::size_t cols);

/// Dense supra-adjacency of one multiplex with per-layer row-normalized
/// adjacencies: diagonal (1-delta) M^[a], off-diagonal (delta/(L-1)) I.
DenseMatrix dense_multiplex_supra(const MultiplexNetwork& mux);

/// Dense normalized supra-heterogeneous transition matrix over the global
/// supra space, built from the edge lists alone.
DenseMatrix dense_transition(const MultilayerNetwork& network, const RwrConfig& config);

/// Replaces all-zero rows with p0 (the dangling teleport), yielding the
/// effective stochastic matrix the iteration uses.
DenseMatrix dense_effective(DenseMatrix transition, const std::vector<double>& p0);

/// Direct solve of p = (1-r) M^T p + r p0 by Gaussian elimination; M must be
/// the effective transition matrix.
std::vector<double> dense_steady_state(const DenseMatrix& effective,
                                       const std::vector<double>& p0, double r);

/// Classic single-network random walk with restart: row-normalized adjacency,
/// uniform restart over the seeds, iterated to 1e-14.
std::vector<double> textbook_rwr(const DenseMatrix& adjacency,
                                 const std::vector<std::size_t>& seeds, double r);

/// Solves a general linear system by Gaussian elimination with partial
/// pivoting (test sizes only).
std::vector<double> gaussian_solve(DenseMatrix a, std::vector<double> b);

} // namespace uniwalk::testing
