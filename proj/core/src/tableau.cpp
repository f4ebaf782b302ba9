#include "nss/tableau.hpp"

#include "nss/errors.hpp"

namespace nss {

StabilizerTableau::StabilizerTableau(std::vector<PauliOp> generators) : gens_(std::move(generators)) {
  if (gens_.empty()) throw InvalidArgument("stabilizer tableau needs at least one generator");
  n_ = gens_.front().num_qubits();
  span_ = Gf2RowSpace(2 * n_);
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    const auto& g = gens_[i];
    if (g.num_qubits() != n_) throw InvalidArgument("tableau generators act on different qubit counts");
    if (!g.is_hermitian()) throw InvalidArgument("tableau generator " + g.str() + " is not Hermitian");
    for (std::size_t j = 0; j < i; ++j) {
      if (!commutes(g, gens_[j])) throw InvalidArgument("tableau generators " + g.str() + " and " + gens_[j].str() + " anticommute");
    }
    if (!span_.insert(symplectic(g))) throw InvalidArgument("tableau generator " + g.str() + " is dependent");
  }
  if (gens_.size() > n_) throw InvalidArgument("tableau has more generators than qubits");
}

std::optional<unsigned> StabilizerTableau::group_phase(const PauliOp& p) const {
  if (p.num_qubits() != n_) throw InvalidArgument("group_phase: qubit count mismatch");
  auto combo = span_.decompose(symplectic(p));
  if (!combo) return std::nullopt;
  PauliOp prod(n_);
  for (std::size_t i : *combo) prod = prod * gens_[i];
  return (p.phase() + 4 - prod.phase()) & 3u;
}

cplx StabilizerTableau::expectation(const PauliOp& p) const {
  for (const auto& g : gens_) {
    if (!commutes(g, p)) return {0.0, 0.0};
  }
  auto k = group_phase(p);
  if (!k) {
    throw InvalidArgument("expectation: " + p.str() + " commutes with an incomplete tableau but lies outside its group");
  }
  return phase_factor(*k);
}

int StabilizerTableau::eigenvalue(const PauliOp& p) const {
  if (!p.is_hermitian()) throw InvalidArgument("eigenvalue: operator is not Hermitian");
  cplx e = expectation(p);
  if (e.real() > 0.5) return 1;
  if (e.real() < -0.5) return -1;
  throw NotAnEigenstate("stabilizer state is not an eigenstate of " + p.str());
}

StabilizerTableau StabilizerTableau::conjugated_by(const PauliOp& p) const {
  if (p.num_qubits() != n_) throw InvalidArgument("conjugated_by: qubit count mismatch");
  StabilizerTableau out = *this;
  for (auto& g : out.gens_) {
    if (!commutes(g, p)) g = g.negated();
  }
  return out;
}

bool StabilizerTableau::valid() const {
  Gf2RowSpace space(2 * n_);
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (!gens_[i].is_hermitian()) return false;
    for (std::size_t j = 0; j < i; ++j) {
      if (!commutes(gens_[i], gens_[j])) return false;
    }
    if (!space.insert(symplectic(gens_[i]))) return false;
  }
  return true;
}

}  // namespace nss
