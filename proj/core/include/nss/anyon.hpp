#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "nss/config.hpp"
#include "nss/lattice.hpp"
#include "nss/pauli.hpp"
#include "nss/tableau.hpp"

namespace nss {

/// e lives on vertices (flipped star), m on plaquettes (flipped plaquette).
enum class AnyonType { E, M };

std::string to_string(AnyonType t);
AnyonType anyon_type_from_string(const std::string& s);

struct Anyon {
  std::size_t id = 0;
  AnyonType type = AnyonType::E;
  std::size_t position = 0;  // vertex index for e, plaquette index for m
  PauliOp string;            // operators applied on behalf of this anyon
  std::size_t partner = 0;   // id of the anyon it would annihilate with
};

/// Edge sequence walked by an anyon: consecutive edges share a vertex
/// (kind e) or a plaquette (kind m).
struct LatticePath {
  AnyonType kind = AnyonType::E;
  std::vector<std::size_t> steps;
};

/// A toric-code state F|G> where |G> is a code state fixed by the independent
/// checks and the two sector loops, and F is the exact product of every Pauli
/// applied so far. Operations return new states; inputs are never modified.
class AnyonState {
 public:
  AnyonState(TorusLattice lat, const SectorLabel& sector, LoopBasis basis);

  const TorusLattice& lattice() const noexcept { return lat_; }
  LoopBasis loop_basis() const noexcept { return basis_; }
  const SectorLabel& initial_sector() const noexcept { return sector_; }
  const StabilizerTableau& ground() const noexcept { return ground_; }
  /// Exact product of applied Paulis (latest on the left).
  const PauliOp& applied() const noexcept { return applied_; }
  const std::vector<Anyon>& anyons() const noexcept { return anyons_; }
  const Anyon& anyon(std::size_t id) const;

  /// Stabilizer generators of the current state.
  StabilizerTableau tableau() const;
  /// Signs of the sector loops in the current tableau.
  SectorLabel logical_frame() const;
  /// Number of checks (all stars and plaquettes) with eigenvalue −1.
  std::size_t energy() const;
  /// Overlap <ref|ψ> with the reference state R|G>, where R is the canonical
  /// string operator for the current anyon positions and winding. ±1 (or ±i)
  /// always; changes by −1 under a full e–m encirclement and is unchanged by
  /// deforming a path across empty plaquettes.
  cplx accumulated_phase() const;
  /// The canonical operator R used by accumulated_phase.
  PauliOp reference_operator() const;
  /// Checks that −1 checks sit exactly under the recorded anyons.
  bool consistent() const;

  friend AnyonState create_pair(const AnyonState&, AnyonType, std::size_t);
  friend AnyonState move_anyon(const AnyonState&, std::size_t, const LatticePath&);
  friend AnyonState fuse(const AnyonState&, std::size_t, std::size_t, std::optional<std::size_t>);

 private:
  Anyon* find(std::size_t id);
  void apply_edges(const std::vector<std::size_t>& edges, char letter, Anyon* owner);

  TorusLattice lat_;
  LoopBasis basis_;
  SectorLabel sector_;
  StabilizerTableau ground_;
  PauliOp applied_;
  std::vector<Anyon> anyons_;
  std::size_t next_id_ = 0;
};

/// Code state |J> with no excitations.
AnyonState ground_state(const TorusLattice& lat, const SectorLabel& sector, LoopBasis basis = LoopBasis::Z);

/// Applies Z (e) or X (m) on one edge, creating anyons at its two vertices
/// (plaquettes). Throws InvalidMove when either endpoint is occupied by an
/// anyon of the same type.
AnyonState create_pair(const AnyonState& state, AnyonType type, std::size_t edge);

/// Drags an anyon along path. Throws InvalidMove for a path of the wrong
/// kind, a disconnected path, or one ending on another anyon of the same type.
AnyonState move_anyon(const AnyonState& state, std::size_t anyon_id, const LatticePath& path);

/// Minimal axis-aligned rectangle (primal for e, dual for m) with the mover
/// on its boundary, the target strictly inside and no other anyon on or
/// inside it; ties go to the lexicographically smallest edge set. The path
/// runs clockwise from the mover. Throws PathNotFound.
LatticePath enclosing_loop(const AnyonState& state, std::size_t mover, std::size_t around);

/// move_anyon along enclosing_loop.
AnyonState braid(const AnyonState& state, std::size_t mover, std::size_t around);

/// Annihilates two anyons of the same type sitting on the ends of one edge
/// (via_edge, or the lowest-index such edge). Throws InvalidFusion on a type
/// mismatch and InvalidMove when the anyons are not adjacent.
AnyonState fuse(const AnyonState& state, std::size_t a, std::size_t b,
                std::optional<std::size_t> via_edge = std::nullopt);

/// Shortest path between two vertices (e) or plaquettes (m): along the row
/// first, then along the column, each the short way round (ties go right/down).
LatticePath straight_path(const TorusLattice& lat, AnyonType kind, std::size_t from, std::size_t to);

/// Closed path from start once around the torus in the direction of
/// Gamma1 (along a row) or Gamma2 (along a column).
LatticePath winding_path(const TorusLattice& lat, AnyonType kind, std::size_t start, int direction);

/// <A|B> computed symbolically. Both states must share lattice and ground.
cplx relative_phase(const AnyonState& a, const AnyonState& b);

/// F|G> as a dense vector; |G> carries the canonical global phase.
Eigen::VectorXcd dense_state(const AnyonState& state, std::size_t max_qubits = Limits{}.dense_qubits);

/// <A|B> from dense vectors.
cplx relative_phase_dense(const AnyonState& a, const AnyonState& b, std::size_t max_qubits = Limits{}.dense_qubits);

/// {phase: [re, im], sector: [...], energy, anyons: [{id, type, position}]}.
nlohmann::json report_json(const AnyonState& state);

}  // namespace nss
