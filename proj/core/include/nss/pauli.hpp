#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "nss/config.hpp"

namespace nss {

using cplx = std::complex<double>;

/// An n-qubit Pauli operator i^phase * P_0 ⊗ ... ⊗ P_{n-1}, where the letter on
/// site k is I, X, Z or Y according to the bit pair (x_k, z_k) and (1, 1) means Y.
/// Bits are packed 64 per word, site k in word k / 64.
///
/// Qubit k corresponds to bit k of a computational-basis index when the
/// operator acts on state vectors or is expanded by to_dense.
class PauliOp {
 public:
  /// Identity on num_qubits sites.
  explicit PauliOp(std::size_t num_qubits);

  /// Parses "+XIZY", "-iXZII", "iZ", "XX" (leading sign/phase optional).
  static PauliOp parse(std::string_view text);

  /// Single-site operator; letter is one of I, X, Y, Z.
  static PauliOp single(std::size_t num_qubits, std::size_t site, char letter);

  /// Product of the same letter on every listed site (sites may repeat; repeats cancel).
  static PauliOp uniform(std::size_t num_qubits, std::span<const std::size_t> sites, char letter);

  std::size_t num_qubits() const noexcept { return n_; }
  unsigned phase() const noexcept { return phase_; }
  bool x(std::size_t site) const;
  bool z(std::size_t site) const;
  char letter(std::size_t site) const;

  std::span<const std::uint64_t> x_words() const noexcept { return xs_; }
  std::span<const std::uint64_t> z_words() const noexcept { return zs_; }

  void set_x(std::size_t site, bool value);
  void set_z(std::size_t site, bool value);
  void set_letter(std::size_t site, char letter);
  void set_phase(unsigned phase) noexcept { phase_ = phase & 3u; }

  PauliOp with_phase(unsigned phase) const;
  PauliOp negated() const { return with_phase(phase_ + 2); }

  bool is_hermitian() const noexcept { return (phase_ & 1u) == 0; }
  /// True when every site carries I (the phase is ignored).
  bool is_identity_up_to_phase() const noexcept;
  bool same_bits(const PauliOp& other) const noexcept;

  /// Indices of sites where the letter is not I.
  std::vector<std::size_t> support() const;

  std::string str() const;

  friend bool operator==(const PauliOp& a, const PauliOp& b) noexcept {
    return a.n_ == b.n_ && a.phase_ == b.phase_ && a.xs_ == b.xs_ && a.zs_ == b.zs_;
  }

 private:
  friend PauliOp multiply(const PauliOp& a, const PauliOp& b);

  std::size_t n_;
  unsigned phase_ = 0;
  std::vector<std::uint64_t> xs_;
  std::vector<std::uint64_t> zs_;
};

/// Group product a·b with exact phase.
PauliOp multiply(const PauliOp& a, const PauliOp& b);
inline PauliOp operator*(const PauliOp& a, const PauliOp& b) { return multiply(a, b); }

/// Hermitian conjugate.
PauliOp adjoint(const PauliOp& a);

/// Symplectic commutation test.
bool commutes(const PauliOp& a, const PauliOp& b);

/// Number of non-identity sites.
std::size_t weight(const PauliOp& a);

/// i^k for k mod 4.
cplx phase_factor(unsigned k) noexcept;

/// Dense 2^n × 2^n matrix. Throws ResourceLimit when n exceeds max_qubits.
Eigen::MatrixXcd to_dense(const PauliOp& a, std::size_t max_qubits = Limits{}.dense_qubits);

/// out = a · in on a 2^n state vector (out must not alias in).
void apply(const PauliOp& a, std::span<const cplx> in, std::span<cplx> out);

/// out += coeff · a · in.
void apply_add(const PauliOp& a, cplx coeff, std::span<const cplx> in, std::span<cplx> out);

/// All Paulis (phase 0) on n sites with 1 <= weight <= max_weight, ordered by
/// weight, then by support, then by letters X < Y < Z.
std::vector<PauliOp> paulis_up_to_weight(std::size_t num_qubits, std::size_t max_weight);

}  // namespace nss
