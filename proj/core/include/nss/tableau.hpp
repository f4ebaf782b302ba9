#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nss/gf2.hpp"
#include "nss/pauli.hpp"

namespace nss {

/// Generating set of a stabilizer group: mutually commuting, GF(2)-independent
/// signed Paulis. With num_qubits generators it fixes a unique state.
class StabilizerTableau {
 public:
  /// Validates commutation, independence and hermiticity of every generator.
  explicit StabilizerTableau(std::vector<PauliOp> generators);

  std::size_t num_qubits() const noexcept { return n_; }
  const std::vector<PauliOp>& generators() const noexcept { return gens_; }
  bool is_complete() const noexcept { return gens_.size() == n_; }

  /// For p equal (bitwise, up to phase) to a product of generators, returns k
  /// such that p = i^k · (that product). nullopt when p is not in the span.
  std::optional<unsigned> group_phase(const PauliOp& p) const;

  /// <ψ|p|ψ> for the state stabilized by a complete tableau: i^k when p is in
  /// the group, 0 when p anticommutes with some generator.
  cplx expectation(const PauliOp& p) const;

  /// Tableau of p|ψ>: every generator anticommuting with p changes sign.
  StabilizerTableau conjugated_by(const PauliOp& p) const;

  /// Sign (+1/-1) of the product of generators that equals p up to sign; throws
  /// if p commutes with all generators but is outside the group.
  int eigenvalue(const PauliOp& p) const;

  /// Rechecks commutation and independence.
  bool valid() const;

 private:
  StabilizerTableau() = default;

  std::size_t n_ = 0;
  std::vector<PauliOp> gens_;
  Gf2RowSpace span_{0};
};

}  // namespace nss
