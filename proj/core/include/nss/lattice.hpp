#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "nss/pauli.hpp"
#include "nss/tableau.hpp"

namespace nss {

enum class Direction { Right = 0, Down = 1 };

/// Homology classes of the two non-contractible directions, for each Pauli type.
/// Gamma1 winds along a row (column index increases), Gamma2 along a column.
/// Z-type loops live on the primal lattice, X-type loops on the dual lattice;
/// Gamma1Z anticommutes with Gamma2X and Gamma2Z with Gamma1X.
enum class HomologyClass { Gamma1Z, Gamma2Z, Gamma1X, Gamma2X };

std::string to_string(HomologyClass c);

struct LoopOperator {
  HomologyClass homology_class;
  PauliOp op;
};

/// Which commuting loop pair labels the code states |J>.
///  Z: (Gamma1Z, Gamma2Z), the default.
///  X: (Gamma2X, Gamma1X), ordered so entry i is the partner that the Z-type
///     logical of class i flips.
enum class LoopBasis { Z, X };

struct SectorLabel {
  std::vector<int> j;  // eigenvalues in {-1, +1}, length 2g

  friend bool operator==(const SectorLabel&, const SectorLabel&) = default;
};

std::string to_string(const SectorLabel& s);

/// L1 × L2 periodic square lattice (genus 1) with one qubit per edge.
///
/// Vertex (r, c) has index r·L2 + c; plaquette (r, c) is the face whose
/// top-left corner is vertex (r, c). Edge 2·v + 0 leaves vertex v to the right,
/// edge 2·v + 1 leaves it downward.
class TorusLattice {
 public:
  TorusLattice(int rows, int cols);

  int rows() const noexcept { return l1_; }
  int cols() const noexcept { return l2_; }
  int genus() const noexcept { return 1; }
  std::size_t num_qubits() const noexcept { return 2 * num_vertices(); }
  std::size_t num_vertices() const noexcept { return static_cast<std::size_t>(l1_) * static_cast<std::size_t>(l2_); }
  std::size_t num_plaquettes() const noexcept { return num_vertices(); }

  std::size_t vertex(int r, int c) const noexcept;
  std::size_t plaquette(int r, int c) const noexcept { return vertex(r, c); }
  std::size_t edge(int r, int c, Direction d) const noexcept {
    return 2 * vertex(r, c) + static_cast<std::size_t>(d);
  }
  std::pair<int, int> vertex_coords(std::size_t v) const noexcept {
    return {static_cast<int>(v) / l2_, static_cast<int>(v) % l2_};
  }
  std::pair<int, int> plaquette_coords(std::size_t p) const noexcept { return vertex_coords(p); }

  /// (tail, head) vertices: head is right of / below tail.
  std::pair<std::size_t, std::size_t> edge_vertices(std::size_t e) const;
  /// Plaquettes sharing edge e: (above, below) for horizontal edges,
  /// (left, right) for vertical ones.
  std::pair<std::size_t, std::size_t> edge_plaquettes(std::size_t e) const;

  std::array<std::size_t, 4> star_edges(std::size_t v) const;
  std::array<std::size_t, 4> plaquette_edges(std::size_t p) const;

  /// All-X operator on the four edges at each vertex.
  const std::vector<PauliOp>& stars() const noexcept { return stars_; }
  /// All-Z operator on the four edges of each face.
  const std::vector<PauliOp>& plaquettes() const noexcept { return plaquettes_; }
  /// Stars followed by plaquettes.
  std::vector<PauliOp> checks() const;

  /// GF(2) rank of all checks (2·L1·L2 − 2 on the torus).
  std::size_t check_rank() const;
  /// 2^(n − rank); 4 = 2^{2g} for every torus.
  std::size_t code_dimension() const;

  /// Independent generators of the stabilizer group: the last star and the last
  /// plaquette are dropped (each equals the product of the others).
  std::vector<PauliOp> independent_checks() const;

  friend bool operator==(const TorusLattice& a, const TorusLattice& b) noexcept {
    return a.l1_ == b.l1_ && a.l2_ == b.l2_;
  }

 private:
  int l1_;
  int l2_;
  std::vector<PauliOp> stars_;
  std::vector<PauliOp> plaquettes_;
};

TorusLattice build_torus(int rows, int cols);

/// Minimal loop operators in the order Gamma1Z, Gamma2Z, Gamma1X, Gamma2X.
/// Representatives are straight lines through row 0 / column 0.
std::vector<LoopOperator> homology_basis(const TorusLattice& lat);

PauliOp loop_operator(const TorusLattice& lat, HomologyClass c);

/// The commuting pair whose joint eigenvalues label code states.
std::vector<PauliOp> sector_loops(const TorusLattice& lat, LoopBasis basis = LoopBasis::Z);

/// Winding numbers mod 2 of an operator that commutes with every check,
/// returned as {x1, x2, z1, z2}: x_i (z_i) is 1 when the X (Z) part winds in
/// class Gamma_i. Detected by anticommutation with the conjugate loops.
std::array<int, 4> homology_bits(const TorusLattice& lat, const PauliOp& cycle);

/// True iff cycle lies in the GF(2) span of the checks. Throws
/// InvalidArgument when cycle fails to commute with every check.
bool is_contractible(const TorusLattice& lat, const PauliOp& cycle);

/// Eigenvalues of the chosen loop pair on a dense state (NotAnEigenstate when
/// ‖Lψ − jψ‖ exceeds tol for either loop).
SectorLabel sector_of(const TorusLattice& lat, const Eigen::VectorXcd& state, LoopBasis basis = LoopBasis::Z,
                      double tol = 1e-8);

/// Eigenvalues of the chosen loop pair on a stabilizer state.
SectorLabel sector_of(const TorusLattice& lat, const StabilizerTableau& state, LoopBasis basis = LoopBasis::Z);

/// Tableau of the code state |J> in the given loop basis: independent checks
/// with + signs followed by the two loops carrying the signs of J.
StabilizerTableau code_state_tableau(const TorusLattice& lat, const SectorLabel& sector,
                                     LoopBasis basis = LoopBasis::Z);

/// Tableau of the code space (independent checks only).
StabilizerTableau code_space_tableau(const TorusLattice& lat);

/// Serializes dims, edge list and check supports.
nlohmann::json to_json(const TorusLattice& lat);
/// Rebuilds a lattice and checks that every listed edge and support matches.
TorusLattice lattice_from_json(const nlohmann::json& doc);

}  // namespace nss
