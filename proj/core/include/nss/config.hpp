#pragma once

#include <cstddef>
#include <cstdint>

namespace nss {

/// Seed used whenever the caller does not supply one.
inline constexpr std::uint64_t kDefaultSeed = 20011031;

/// Every numerical threshold used by the algebra and verification engines.
/// Defaults are the values the test-suite is calibrated against.
struct Tolerances {
  double orthonormality = 1e-10;   // HS Gram matrix vs identity
  double closure_growth = 1e-10;   // relative residual that admits a new basis element
  double closure_check = 1e-8;     // residual accepted when declaring an algebra closed
  double null_space = 1e-9;        // relative eigenvalue cut for commutant / center null spaces
  double merge = 1e-8;             // eigenvalue clustering (relative to spectral radius)
  double gap_ratio = 10.0;         // clusters closer than gap_ratio * merge are ambiguous
  double block_structure = 1e-7;   // residual of V^† E V against 1 ⊗ M
  double projector = 1e-8;         // Hermitian / idempotent check for code projectors
  double eigenstate = 1e-8;        // sector_of eigenvector test
  double ritz = 1e-9;              // Krylov Ritz residual
  double cluster_relative = 1e-6;  // exact-degeneracy clustering, relative to the gap
  double degenerate_splitting = 1e-10;
};

struct Limits {
  std::size_t dense_qubits = 12;        // PauliOp::to_dense and dense state vectors
  std::size_t algebra_dim = 4096;       // Hilbert space dimension accepted by close_algebra
  std::size_t commutant_dim = 32;       // Hilbert space dimension for the d^2 null-space solve
  std::size_t algebra_bytes = std::size_t{1} << 30;  // storage for an algebra basis
  std::size_t sparse_qubits = 20;       // matrix-free spectrum
  std::size_t closure_iterations = 50;
  std::size_t lanczos_restarts = 40;
  std::size_t krylov_bytes = std::size_t{512} << 20;  // memory budget for the Krylov basis
};

struct Config {
  Tolerances tol{};
  Limits limits{};
  std::uint64_t seed = kDefaultSeed;
};

}  // namespace nss
