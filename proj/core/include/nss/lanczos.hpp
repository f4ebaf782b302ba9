#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "nss/config.hpp"
#include "nss/pauli.hpp"

namespace nss {

struct PauliTerm {
  PauliOp op;
  double coeff = 0.0;
};

/// Hermitian operator Σ coeff_t P_t applied matrix-free to 2^n state vectors.
/// Terms are grouped by their X mask; the group with no X part is
/// precomputed as a diagonal.
class PauliSum {
 public:
  explicit PauliSum(std::size_t num_qubits);

  /// Every term must be Hermitian and act on num_qubits sites.
  void add(const PauliOp& op, double coeff);
  void add(const PauliSum& other, double scale = 1.0);

  std::size_t num_qubits() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return std::size_t{1} << n_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }

  /// out = H · in. Sizes must equal dimension().
  void apply(const cplx* in, cplx* out) const;
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& block) const;
  /// Sum of |coeff|, an upper bound on the operator norm.
  double norm_bound() const;
  Eigen::MatrixXcd to_dense(std::size_t max_qubits = Limits{}.dense_qubits) const;

 private:
  struct Group {
    std::uint64_t x = 0;
    std::vector<std::uint64_t> z;
    std::vector<cplx> coeff;  // includes i^(phase + |x∧z|)
  };
  void rebuild() const;

  std::size_t n_;
  std::vector<PauliTerm> terms_;
  mutable bool dirty_ = true;
  mutable std::vector<double> diagonal_;
  mutable std::vector<Group> groups_;
};

struct LanczosOptions {
  std::size_t num_eigenpairs = 8;
  std::size_t block_size = 8;
  double tol = 1e-9;  // Ritz residual ‖Hy − θy‖
  std::size_t max_restarts = 40;
  std::size_t basis_size = 0;  // Krylov vectors kept between restarts; 0 picks a default
  std::size_t memory_bytes = std::size_t{512} << 20;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t stream = 0;
};

struct EigenResult {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // columns
  double max_residual = 0.0;
  std::size_t restarts = 0;
  std::size_t applications = 0;  // H·v products
};

/// Lowest eigenpairs by thick-restart block Lanczos with full
/// reorthogonalization. Small problems (dimension below a few block sizes)
/// are diagonalized densely. Throws ConvergenceError with the worst residual
/// after max_restarts, ResourceLimit when the minimal Krylov basis exceeds
/// memory_bytes.
EigenResult lowest_eigenpairs(const PauliSum& h, const LanczosOptions& options = {});

}  // namespace nss
