#include "nss/anyon.hpp"

#include <algorithm>
#include <tuple>

#include "nss/errors.hpp"
#include "nss/statevec.hpp"

namespace nss {
namespace {

char letter_of(AnyonType t) { return t == AnyonType::E ? 'Z' : 'X'; }

int wrap(int i, int n) { return ((i % n) + n) % n; }

// Edge crossed by one step between neighbouring sites. For e the sites are
// vertices and the edge joins them; for m the sites are plaquettes and the
// edge separates them.
std::size_t step_edge(const TorusLattice& lat, AnyonType kind, int r, int c, int dr, int dc) {
  if (kind == AnyonType::E) {
    if (dc == 1) return lat.edge(r, c, Direction::Right);
    if (dc == -1) return lat.edge(r, c - 1, Direction::Right);
    if (dr == 1) return lat.edge(r, c, Direction::Down);
    return lat.edge(r - 1, c, Direction::Down);
  }
  if (dc == 1) return lat.edge(r, c + 1, Direction::Down);
  if (dc == -1) return lat.edge(r, c, Direction::Down);
  if (dr == 1) return lat.edge(r + 1, c, Direction::Right);
  return lat.edge(r, c, Direction::Right);
}

// Site reached from `site` through `edge`, or nullopt when they are not incident.
std::optional<std::size_t> across(const TorusLattice& lat, AnyonType kind, std::size_t site, std::size_t edge) {
  const auto [a, b] = kind == AnyonType::E ? lat.edge_vertices(edge) : lat.edge_plaquettes(edge);
  if (a == site) return b;
  if (b == site) return a;
  return std::nullopt;
}

struct Rectangle {
  std::vector<std::size_t> boundary_sites;  // clockwise from the top-left corner
  std::vector<std::size_t> boundary_edges;  // edge i leaves boundary_sites[i]
  std::vector<std::size_t> interior_sites;  // same kind as the boundary
  std::vector<std::size_t> enclosed_duals;  // opposite kind
};

Rectangle make_rectangle(const TorusLattice& lat, AnyonType kind, int r0, int c0, int h, int w) {
  Rectangle rect;
  auto push = [&](int r, int c, int dr, int dc) {
    rect.boundary_sites.push_back(lat.vertex(r, c));
    rect.boundary_edges.push_back(step_edge(lat, kind, r, c, dr, dc));
  };
  for (int j = 0; j < w; ++j) push(r0, c0 + j, 0, 1);
  for (int i = 0; i < h; ++i) push(r0 + i, c0 + w, 1, 0);
  for (int j = 0; j < w; ++j) push(r0 + h, c0 + w - j, 0, -1);
  for (int i = 0; i < h; ++i) push(r0 + h - i, c0, -1, 0);
  for (int i = 1; i < h; ++i) {
    for (int j = 1; j < w; ++j) rect.interior_sites.push_back(lat.vertex(r0 + i, c0 + j));
  }
  // A primal rectangle encloses the plaquettes whose top-left corner is in
  // rows r0..r0+h-1; a dual one encloses the vertices one step down-right.
  const int off = kind == AnyonType::E ? 0 : 1;
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) rect.enclosed_duals.push_back(lat.vertex(r0 + off + i, c0 + off + j));
  }
  return rect;
}

bool contains(const std::vector<std::size_t>& v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

std::string to_string(AnyonType t) { return t == AnyonType::E ? "e" : "m"; }

AnyonType anyon_type_from_string(const std::string& s) {
  if (s == "e" || s == "E") return AnyonType::E;
  if (s == "m" || s == "M") return AnyonType::M;
  throw InvalidArgument("unknown anyon type '" + s + "' (expected e or m)");
}

AnyonState::AnyonState(TorusLattice lat, const SectorLabel& sector, LoopBasis basis)
    : lat_(std::move(lat)),
      basis_(basis),
      sector_(sector),
      ground_(code_state_tableau(lat_, sector, basis)),
      applied_(lat_.num_qubits()) {}

const Anyon& AnyonState::anyon(std::size_t id) const {
  for (const auto& a : anyons_) {
    if (a.id == id) return a;
  }
  throw InvalidArgument("no anyon with id " + std::to_string(id));
}

Anyon* AnyonState::find(std::size_t id) {
  for (auto& a : anyons_) {
    if (a.id == id) return &a;
  }
  throw InvalidArgument("no anyon with id " + std::to_string(id));
}

void AnyonState::apply_edges(const std::vector<std::size_t>& edges, char letter, Anyon* owner) {
  const PauliOp p = PauliOp::uniform(lat_.num_qubits(), edges, letter);
  applied_ = p * applied_;
  if (owner) owner->string = p * owner->string;
}

StabilizerTableau AnyonState::tableau() const { return ground_.conjugated_by(applied_); }

SectorLabel AnyonState::logical_frame() const { return sector_of(lat_, tableau(), basis_); }

std::size_t AnyonState::energy() const {
  std::size_t count = 0;
  for (const auto& s : lat_.stars()) count += commutes(s, applied_) ? 0 : 1;
  for (const auto& p : lat_.plaquettes()) count += commutes(p, applied_) ? 0 : 1;
  return count;
}

PauliOp AnyonState::reference_operator() const {
  const std::size_t n = lat_.num_qubits();
  PauliOp xs(n);
  PauliOp zs(n);
  for (AnyonType t : {AnyonType::E, AnyonType::M}) {
    std::vector<std::size_t> pos;
    for (const auto& a : anyons_) {
      if (a.type == t) pos.push_back(a.position);
    }
    std::sort(pos.begin(), pos.end());
    PauliOp& target = t == AnyonType::E ? zs : xs;
    for (std::size_t i = 0; i + 1 < pos.size(); i += 2) {
      const LatticePath p = straight_path(lat_, t, pos[i], pos[i + 1]);
      target = PauliOp::uniform(n, p.steps, letter_of(t)) * target;
    }
  }
  const PauliOp diff = adjoint(xs * zs) * applied_;
  const auto bits = homology_bits(lat_, diff);
  if (bits[0]) xs = loop_operator(lat_, HomologyClass::Gamma1X) * xs;
  if (bits[1]) xs = loop_operator(lat_, HomologyClass::Gamma2X) * xs;
  if (bits[2]) zs = loop_operator(lat_, HomologyClass::Gamma1Z) * zs;
  if (bits[3]) zs = loop_operator(lat_, HomologyClass::Gamma2Z) * zs;
  return xs * zs;
}

cplx AnyonState::accumulated_phase() const { return ground_.expectation(adjoint(reference_operator()) * applied_); }

bool AnyonState::consistent() const {
  std::vector<std::size_t> e_sites, m_sites;
  for (const auto& a : anyons_) (a.type == AnyonType::E ? e_sites : m_sites).push_back(a.position);
  for (std::size_t v = 0; v < lat_.num_vertices(); ++v) {
    if (commutes(lat_.stars()[v], applied_) == contains(e_sites, v)) return false;
  }
  for (std::size_t p = 0; p < lat_.num_plaquettes(); ++p) {
    if (commutes(lat_.plaquettes()[p], applied_) == contains(m_sites, p)) return false;
  }
  return tableau().valid();
}

AnyonState ground_state(const TorusLattice& lat, const SectorLabel& sector, LoopBasis basis) {
  if (sector.j.size() != 2) throw InvalidArgument("sector label must have 2 entries on the torus");
  return AnyonState(lat, sector, basis);
}

AnyonState create_pair(const AnyonState& state, AnyonType type, std::size_t edge) {
  const TorusLattice& lat = state.lattice();
  if (edge >= lat.num_qubits()) {
    throw InvalidArgument("create_pair: edge " + std::to_string(edge) + " out of range");
  }
  const auto [a, b] = type == AnyonType::E ? lat.edge_vertices(edge) : lat.edge_plaquettes(edge);
  for (const auto& x : state.anyons()) {
    if (x.type == type && (x.position == a || x.position == b)) {
      throw InvalidMove("create_pair: " + to_string(type) + " anyon " + std::to_string(x.id) + " already occupies " +
                        std::to_string(x.position));
    }
  }
  AnyonState out = state;
  const std::size_t n = lat.num_qubits();
  const std::size_t ia = out.next_id_++;
  const std::size_t ib = out.next_id_++;
  out.anyons_.push_back({ia, type, a, PauliOp(n), ib});
  out.anyons_.push_back({ib, type, b, PauliOp(n), ia});
  out.apply_edges({edge}, letter_of(type), &out.anyons_[out.anyons_.size() - 2]);
  return out;
}

AnyonState move_anyon(const AnyonState& state, std::size_t anyon_id, const LatticePath& path) {
  const Anyon& src = state.anyon(anyon_id);
  const TorusLattice& lat = state.lattice();
  if (path.kind != src.type) {
    throw InvalidMove("move_anyon: " + to_string(path.kind) + "-path given for " + to_string(src.type) + " anyon " +
                      std::to_string(anyon_id));
  }
  if (path.steps.empty()) throw InvalidMove("move_anyon: empty path");
  std::size_t site = src.position;
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const std::size_t e = path.steps[i];
    if (e >= lat.num_qubits()) throw InvalidMove("move_anyon: edge " + std::to_string(e) + " out of range");
    const auto next = across(lat, src.type, site, e);
    if (!next) {
      throw InvalidMove("move_anyon: step " + std::to_string(i) + " (edge " + std::to_string(e) +
                        ") does not touch site " + std::to_string(site));
    }
    site = *next;
  }
  for (const auto& x : state.anyons()) {
    if (x.id != anyon_id && x.type == src.type && x.position == site) {
      throw InvalidMove("move_anyon: path ends on " + to_string(x.type) + " anyon " + std::to_string(x.id) +
                        "; use fuse to annihilate");
    }
  }
  AnyonState out = state;
  Anyon* a = out.find(anyon_id);
  a->position = site;
  out.apply_edges(path.steps, letter_of(a->type), a);
  return out;
}

LatticePath enclosing_loop(const AnyonState& state, std::size_t mover, std::size_t around) {
  const Anyon& mv = state.anyon(mover);
  const Anyon& tg = state.anyon(around);
  if (mover == around) throw InvalidArgument("braid: an anyon cannot encircle itself");
  const TorusLattice& lat = state.lattice();
  std::optional<std::tuple<std::size_t, std::vector<std::size_t>, Rectangle>> best;
  for (int r0 = 0; r0 < lat.rows(); ++r0) {
    for (int c0 = 0; c0 < lat.cols(); ++c0) {
      for (int h = 1; h < lat.rows(); ++h) {
        for (int w = 1; w < lat.cols(); ++w) {
          Rectangle rect = make_rectangle(lat, mv.type, r0, c0, h, w);
          if (!contains(rect.boundary_sites, mv.position)) continue;
          const auto& target_set = tg.type == mv.type ? rect.interior_sites : rect.enclosed_duals;
          if (!contains(target_set, tg.position)) continue;
          bool clear = true;
          for (const auto& x : state.anyons()) {
            if (x.id == mover || x.id == around) continue;
            if (x.type == mv.type) {
              clear = clear && !contains(rect.boundary_sites, x.position) && !contains(rect.interior_sites, x.position);
            } else {
              clear = clear && !contains(rect.enclosed_duals, x.position);
            }
          }
          if (!clear) continue;
          std::vector<std::size_t> key = rect.boundary_edges;
          std::sort(key.begin(), key.end());
          const std::size_t perimeter = rect.boundary_edges.size();
          if (!best || std::tie(perimeter, key) < std::tie(std::get<0>(*best), std::get<1>(*best))) {
            best.emplace(perimeter, std::move(key), std::move(rect));
          }
        }
      }
    }
  }
  if (!best) {
    throw PathNotFound("braid: no rectangle around " + to_string(tg.type) + " anyon " + std::to_string(around) +
                       " with " + to_string(mv.type) + " anyon " + std::to_string(mover) +
                       " on its boundary avoids the other anyons");
  }
  const Rectangle& rect = std::get<2>(*best);
  const auto it = std::find(rect.boundary_sites.begin(), rect.boundary_sites.end(), mv.position);
  const std::size_t start = static_cast<std::size_t>(it - rect.boundary_sites.begin());
  LatticePath path{mv.type, {}};
  for (std::size_t i = 0; i < rect.boundary_edges.size(); ++i) {
    path.steps.push_back(rect.boundary_edges[(start + i) % rect.boundary_edges.size()]);
  }
  return path;
}

AnyonState braid(const AnyonState& state, std::size_t mover, std::size_t around) {
  return move_anyon(state, mover, enclosing_loop(state, mover, around));
}

AnyonState fuse(const AnyonState& state, std::size_t a, std::size_t b, std::optional<std::size_t> via_edge) {
  if (a == b) throw InvalidArgument("fuse: an anyon cannot fuse with itself");
  const Anyon& x = state.anyon(a);
  const Anyon& y = state.anyon(b);
  if (x.type != y.type) {
    throw InvalidFusion("fuse: anyon " + std::to_string(a) + " is " + to_string(x.type) + " but anyon " +
                        std::to_string(b) + " is " + to_string(y.type));
  }
  const TorusLattice& lat = state.lattice();
  std::optional<std::size_t> edge;
  if (via_edge) {
    if (*via_edge >= lat.num_qubits() || across(lat, x.type, x.position, *via_edge) != y.position) {
      throw InvalidMove("fuse: edge " + std::to_string(*via_edge) + " does not join anyons " + std::to_string(a) +
                        " and " + std::to_string(b));
    }
    edge = via_edge;
  } else {
    for (std::size_t e = 0; e < lat.num_qubits() && !edge; ++e) {
      if (across(lat, x.type, x.position, e) == y.position) edge = e;
    }
  }
  if (!edge) {
    throw InvalidMove("fuse: anyons " + std::to_string(a) + " and " + std::to_string(b) + " are not adjacent");
  }
  AnyonState out = state;
  Anyon* xa = out.find(a);
  const PauliOp closed = xa->string * out.find(b)->string;
  xa->string = closed;
  out.apply_edges({*edge}, letter_of(x.type), xa);
  const std::size_t pa = x.partner;
  const std::size_t pb = y.partner;
  std::erase_if(out.anyons_, [&](const Anyon& z) { return z.id == a || z.id == b; });
  // Former partners of the fused anyons now form a pair.
  if (pa != b) {
    for (auto& z : out.anyons_) {
      if (z.id == pa) z.partner = pb;
      if (z.id == pb) z.partner = pa;
    }
  }
  return out;
}

LatticePath straight_path(const TorusLattice& lat, AnyonType kind, std::size_t from, std::size_t to) {
  const std::size_t sites = lat.num_vertices();
  if (from >= sites || to >= sites) throw InvalidArgument("straight_path: site index out of range");
  auto [r, c] = lat.vertex_coords(from);
  const auto [r2, c2] = lat.vertex_coords(to);
  LatticePath path{kind, {}};
  const int dc = wrap(c2 - c, lat.cols());
  const int sc = dc <= lat.cols() - dc ? 1 : -1;
  for (int k = 0, steps = std::min(dc, lat.cols() - dc); k < steps; ++k) {
    path.steps.push_back(step_edge(lat, kind, r, c, 0, sc));
    c = wrap(c + sc, lat.cols());
  }
  const int dr = wrap(r2 - r, lat.rows());
  const int sr = dr <= lat.rows() - dr ? 1 : -1;
  for (int k = 0, steps = std::min(dr, lat.rows() - dr); k < steps; ++k) {
    path.steps.push_back(step_edge(lat, kind, r, c, sr, 0));
    r = wrap(r + sr, lat.rows());
  }
  return path;
}

LatticePath winding_path(const TorusLattice& lat, AnyonType kind, std::size_t start, int direction) {
  if (start >= lat.num_vertices()) throw InvalidArgument("winding_path: site index out of range");
  if (direction != 1 && direction != 2) throw InvalidArgument("winding_path: direction must be 1 or 2");
  auto [r, c] = lat.vertex_coords(start);
  LatticePath path{kind, {}};
  const int steps = direction == 1 ? lat.cols() : lat.rows();
  for (int k = 0; k < steps; ++k) {
    if (direction == 1) {
      path.steps.push_back(step_edge(lat, kind, r, c, 0, 1));
      ++c;
    } else {
      path.steps.push_back(step_edge(lat, kind, r, c, 1, 0));
      ++r;
    }
  }
  return path;
}

namespace {

void require_comparable(const AnyonState& a, const AnyonState& b) {
  if (!(a.lattice() == b.lattice()) || a.loop_basis() != b.loop_basis() || !(a.initial_sector() == b.initial_sector())) {
    throw InvalidArgument("relative_phase: states start from different ground states");
  }
}

}  // namespace

cplx relative_phase(const AnyonState& a, const AnyonState& b) {
  require_comparable(a, b);
  return a.ground().expectation(adjoint(a.applied()) * b.applied());
}

Eigen::VectorXcd dense_state(const AnyonState& state, std::size_t max_qubits) {
  const Eigen::VectorXcd g = stabilizer_state(state.ground(), max_qubits);
  return apply(state.applied(), g);
}

cplx relative_phase_dense(const AnyonState& a, const AnyonState& b, std::size_t max_qubits) {
  require_comparable(a, b);
  const Eigen::VectorXcd g = stabilizer_state(a.ground(), max_qubits);
  return apply(a.applied(), g).dot(apply(b.applied(), g));
}

nlohmann::json report_json(const AnyonState& state) {
  const cplx ph = state.accumulated_phase();
  nlohmann::json anyons = nlohmann::json::array();
  for (const auto& a : state.anyons()) {
    anyons.push_back({{"id", a.id}, {"type", to_string(a.type)}, {"position", a.position}, {"partner", a.partner}});
  }
  return {{"phase", {ph.real(), ph.imag()}},
          {"sector", state.logical_frame().j},
          {"energy", state.energy()},
          {"anyons", std::move(anyons)}};
}

}  // namespace nss
