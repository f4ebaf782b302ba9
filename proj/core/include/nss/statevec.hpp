#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nss/config.hpp"
#include "nss/pauli.hpp"
#include "nss/tableau.hpp"

namespace nss {

/// Dense bridge between stabilizer descriptions and state vectors.
///
/// Global phases are canonicalized: the first amplitude whose magnitude is
/// within 1e-9 of the largest one is made real and positive.

/// Applies ∏ (1 + g)/2 over the tableau's generators to v, in place.
void project_onto_stabilized(const StabilizerTableau& tableau, Eigen::VectorXcd& v);

/// The unique state fixed by a complete tableau.
Eigen::VectorXcd stabilizer_state(const StabilizerTableau& tableau,
                                  std::size_t max_qubits = Limits{}.dense_qubits);

/// Orthonormal basis (columns) of the subspace fixed by a possibly incomplete
/// tableau; 2^(n - #generators) columns.
Eigen::MatrixXcd stabilized_subspace(const StabilizerTableau& tableau,
                                     std::size_t max_qubits = Limits{}.dense_qubits);

/// Dense projector onto the stabilized subspace.
Eigen::MatrixXcd stabilized_projector(const StabilizerTableau& tableau,
                                      std::size_t max_qubits = Limits{}.dense_qubits);

/// p · v as a new vector.
Eigen::VectorXcd apply(const PauliOp& p, const Eigen::VectorXcd& v);

/// Multiplies v by a unit phase so its canonical amplitude is real positive.
void canonicalize_phase(Eigen::VectorXcd& v);

}  // namespace nss
