#include "nss/lattice.hpp"

#include <cmath>

#include "nss/errors.hpp"
#include "nss/gf2.hpp"

namespace nss {
namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

}  // namespace

std::string to_string(HomologyClass c) {
  switch (c) {
    case HomologyClass::Gamma1Z: return "gamma1_Z";
    case HomologyClass::Gamma2Z: return "gamma2_Z";
    case HomologyClass::Gamma1X: return "gamma1_X";
    case HomologyClass::Gamma2X: return "gamma2_X";
  }
  return "?";
}

std::string to_string(const SectorLabel& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.j.size(); ++i) {
    if (i) out += ",";
    out += s.j[i] > 0 ? "+1" : "-1";
  }
  return out + ")";
}

TorusLattice::TorusLattice(int rows, int cols) : l1_(rows), l2_(cols) {
  if (rows < 2 || cols < 2) {
    throw InvalidArgument("torus dimensions must be at least 2x2, got " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
  const std::size_t n = num_qubits();
  stars_.reserve(num_vertices());
  plaquettes_.reserve(num_plaquettes());
  for (std::size_t v = 0; v < num_vertices(); ++v) {
    auto se = star_edges(v);
    stars_.push_back(PauliOp::uniform(n, se, 'X'));
  }
  for (std::size_t p = 0; p < num_plaquettes(); ++p) {
    auto pe = plaquette_edges(p);
    plaquettes_.push_back(PauliOp::uniform(n, pe, 'Z'));
  }
}

std::size_t TorusLattice::vertex(int r, int c) const noexcept {
  return static_cast<std::size_t>(wrap(r, l1_)) * static_cast<std::size_t>(l2_) +
         static_cast<std::size_t>(wrap(c, l2_));
}

std::pair<std::size_t, std::size_t> TorusLattice::edge_vertices(std::size_t e) const {
  if (e >= num_qubits()) throw InvalidArgument("edge index out of range");
  const std::size_t v = e / 2;
  auto [r, c] = vertex_coords(v);
  if (e % 2 == 0) return {v, vertex(r, c + 1)};
  return {v, vertex(r + 1, c)};
}

std::pair<std::size_t, std::size_t> TorusLattice::edge_plaquettes(std::size_t e) const {
  if (e >= num_qubits()) throw InvalidArgument("edge index out of range");
  auto [r, c] = vertex_coords(e / 2);
  if (e % 2 == 0) return {plaquette(r - 1, c), plaquette(r, c)};
  return {plaquette(r, c - 1), plaquette(r, c)};
}

std::array<std::size_t, 4> TorusLattice::star_edges(std::size_t v) const {
  auto [r, c] = vertex_coords(v);
  return {edge(r, c, Direction::Right), edge(r, c, Direction::Down), edge(r, c - 1, Direction::Right),
          edge(r - 1, c, Direction::Down)};
}

std::array<std::size_t, 4> TorusLattice::plaquette_edges(std::size_t p) const {
  auto [r, c] = plaquette_coords(p);
  return {edge(r, c, Direction::Right), edge(r, c + 1, Direction::Down), edge(r + 1, c, Direction::Right),
          edge(r, c, Direction::Down)};
}

std::vector<PauliOp> TorusLattice::checks() const {
  std::vector<PauliOp> all = stars_;
  all.insert(all.end(), plaquettes_.begin(), plaquettes_.end());
  return all;
}

std::size_t TorusLattice::check_rank() const { return gf2_rank(checks()); }

std::size_t TorusLattice::code_dimension() const {
  const std::size_t free = num_qubits() - check_rank();
  if (free >= 63) throw ResourceLimit("code dimension overflows 64 bits");
  return std::size_t{1} << free;
}

std::vector<PauliOp> TorusLattice::independent_checks() const {
  std::vector<PauliOp> out(stars_.begin(), stars_.end() - 1);
  out.insert(out.end(), plaquettes_.begin(), plaquettes_.end() - 1);
  return out;
}

TorusLattice build_torus(int rows, int cols) { return TorusLattice(rows, cols); }

PauliOp loop_operator(const TorusLattice& lat, HomologyClass c) {
  const std::size_t n = lat.num_qubits();
  std::vector<std::size_t> edges;
  switch (c) {
    case HomologyClass::Gamma1Z:  // primal cycle along row 0
      for (int col = 0; col < lat.cols(); ++col) edges.push_back(lat.edge(0, col, Direction::Right));
      return PauliOp::uniform(n, edges, 'Z');
    case HomologyClass::Gamma2Z:  // primal cycle along column 0
      for (int row = 0; row < lat.rows(); ++row) edges.push_back(lat.edge(row, 0, Direction::Down));
      return PauliOp::uniform(n, edges, 'Z');
    case HomologyClass::Gamma1X:  // dual cycle along row 0 crosses the vertical edges of that row
      for (int col = 0; col < lat.cols(); ++col) edges.push_back(lat.edge(0, col, Direction::Down));
      return PauliOp::uniform(n, edges, 'X');
    case HomologyClass::Gamma2X:  // dual cycle along column 0 crosses the horizontal edges of that column
      for (int row = 0; row < lat.rows(); ++row) edges.push_back(lat.edge(row, 0, Direction::Right));
      return PauliOp::uniform(n, edges, 'X');
  }
  throw InvalidArgument("unknown homology class");
}

std::vector<LoopOperator> homology_basis(const TorusLattice& lat) {
  std::vector<LoopOperator> out;
  for (auto c : {HomologyClass::Gamma1Z, HomologyClass::Gamma2Z, HomologyClass::Gamma1X, HomologyClass::Gamma2X}) {
    out.push_back(LoopOperator{c, loop_operator(lat, c)});
  }
  return out;
}

std::vector<PauliOp> sector_loops(const TorusLattice& lat, LoopBasis basis) {
  if (basis == LoopBasis::Z) {
    return {loop_operator(lat, HomologyClass::Gamma1Z), loop_operator(lat, HomologyClass::Gamma2Z)};
  }
  return {loop_operator(lat, HomologyClass::Gamma2X), loop_operator(lat, HomologyClass::Gamma1X)};
}

std::array<int, 4> homology_bits(const TorusLattice& lat, const PauliOp& cycle) {
  if (cycle.num_qubits() != lat.num_qubits()) throw InvalidArgument("homology_bits: qubit count mismatch");
  auto anti = [&](HomologyClass c) { return commutes(cycle, loop_operator(lat, c)) ? 0 : 1; };
  return {anti(HomologyClass::Gamma2Z), anti(HomologyClass::Gamma1Z), anti(HomologyClass::Gamma2X),
          anti(HomologyClass::Gamma1X)};
}

bool is_contractible(const TorusLattice& lat, const PauliOp& cycle) {
  if (cycle.num_qubits() != lat.num_qubits()) throw InvalidArgument("is_contractible: qubit count mismatch");
  const auto all = lat.checks();
  for (const auto& check : all) {
    if (!commutes(check, cycle)) {
      throw InvalidArgument("is_contractible: " + cycle.str() + " has a boundary (anticommutes with " +
                            check.str() + ")");
    }
  }
  Gf2RowSpace span(2 * lat.num_qubits());
  for (const auto& check : all) span.insert(symplectic(check));
  return span.contains(symplectic(cycle));
}

SectorLabel sector_of(const TorusLattice& lat, const Eigen::VectorXcd& state, LoopBasis basis, double tol) {
  const std::size_t dim = std::size_t{1} << lat.num_qubits();
  if (lat.num_qubits() > 62 || static_cast<std::size_t>(state.size()) != dim) {
    throw InvalidArgument("sector_of: state vector length does not match the lattice");
  }
  const double norm = state.norm();
  if (norm == 0.0) throw NotAnEigenstate("sector_of: zero vector");
  SectorLabel label;
  for (const auto& loop : sector_loops(lat, basis)) {
    Eigen::VectorXcd image(state.size());
    apply(loop, std::span<const cplx>(state.data(), dim), std::span<cplx>(image.data(), dim));
    const double ev = (state.adjoint() * image)(0).real() / (norm * norm);
    const int j = ev >= 0 ? 1 : -1;
    const double residual = (image - static_cast<double>(j) * state).norm() / norm;
    if (residual > tol) {
      throw NotAnEigenstate("sector_of: state is not an eigenvector of " + loop.str() + " (residual " +
                            std::to_string(residual) + ")");
    }
    label.j.push_back(j);
  }
  return label;
}

SectorLabel sector_of(const TorusLattice& lat, const StabilizerTableau& state, LoopBasis basis) {
  if (state.num_qubits() != lat.num_qubits()) throw InvalidArgument("sector_of: tableau size mismatch");
  SectorLabel label;
  for (const auto& loop : sector_loops(lat, basis)) label.j.push_back(state.eigenvalue(loop));
  return label;
}

StabilizerTableau code_state_tableau(const TorusLattice& lat, const SectorLabel& sector, LoopBasis basis) {
  if (sector.j.size() != static_cast<std::size_t>(2 * lat.genus())) {
    throw InvalidArgument("sector label must have 2g = 2 entries");
  }
  auto gens = lat.independent_checks();
  auto loops = sector_loops(lat, basis);
  for (std::size_t i = 0; i < loops.size(); ++i) {
    if (sector.j[i] != 1 && sector.j[i] != -1) throw InvalidArgument("sector eigenvalues must be +1 or -1");
    gens.push_back(sector.j[i] > 0 ? loops[i] : loops[i].negated());
  }
  return StabilizerTableau(std::move(gens));
}

StabilizerTableau code_space_tableau(const TorusLattice& lat) { return StabilizerTableau(lat.independent_checks()); }

nlohmann::json to_json(const TorusLattice& lat) {
  nlohmann::json doc;
  doc["L1"] = lat.rows();
  doc["L2"] = lat.cols();
  doc["genus"] = lat.genus();
  doc["n_qubits"] = lat.num_qubits();
  auto edges = nlohmann::json::array();
  for (std::size_t e = 0; e < lat.num_qubits(); ++e) {
    auto [a, b] = lat.edge_vertices(e);
    edges.push_back({a, b, e % 2 == 0 ? "right" : "down"});
  }
  doc["edges"] = std::move(edges);
  auto stars = nlohmann::json::array();
  for (std::size_t v = 0; v < lat.num_vertices(); ++v) stars.push_back(lat.star_edges(v));
  doc["stars"] = std::move(stars);
  auto plaqs = nlohmann::json::array();
  for (std::size_t p = 0; p < lat.num_plaquettes(); ++p) plaqs.push_back(lat.plaquette_edges(p));
  doc["plaquettes"] = std::move(plaqs);
  return doc;
}

TorusLattice lattice_from_json(const nlohmann::json& doc) {
  try {
    TorusLattice lat(doc.at("L1").get<int>(), doc.at("L2").get<int>());
    if (doc.contains("genus") && doc.at("genus").get<int>() != 1) throw InvalidArgument("only genus 1 is supported");
    if (to_json(lat) != doc) throw InvalidArgument("lattice document does not match the canonical layout");
    return lat;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed lattice document: ") + e.what());
  }
}

}  // namespace nss
