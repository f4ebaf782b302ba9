#include "nss/pauli.hpp"

#include <bit>
#include <stdexcept>

#include "nss/errors.hpp"

namespace nss {
namespace {

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

unsigned popcount_and(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  unsigned total = 0;
  for (std::size_t w = 0; w < a.size(); ++w) total += static_cast<unsigned>(std::popcount(a[w] & b[w]));
  return total;
}

void require_same_size(const PauliOp& a, const PauliOp& b, const char* op) {
  if (a.num_qubits() != b.num_qubits()) {
    throw InvalidArgument(std::string(op) + ": operands act on " + std::to_string(a.num_qubits()) +
                          " and " + std::to_string(b.num_qubits()) + " qubits");
  }
}

// Low 64 bits of the masks; callers guarantee n <= 63 on the dense path.
struct DenseMasks {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  unsigned base_phase = 0;  // phase in the X^x Z^z normal form
};

DenseMasks dense_masks(const PauliOp& a) {
  if (a.num_qubits() > 62) throw ResourceLimit("state-vector path supports at most 62 qubits");
  DenseMasks m;
  m.x = a.x_words()[0];
  m.z = a.z_words()[0];
  m.base_phase = (a.phase() + static_cast<unsigned>(std::popcount(m.x & m.z))) & 3u;
  return m;
}

}  // namespace

PauliOp::PauliOp(std::size_t num_qubits)
    : n_(num_qubits), xs_(words_for(num_qubits), 0), zs_(words_for(num_qubits), 0) {
  if (num_qubits == 0) throw InvalidArgument("PauliOp needs at least one qubit");
}

PauliOp PauliOp::parse(std::string_view text) {
  unsigned phase = 0;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase += 1;
    ++pos;
  }
  std::string_view body = text.substr(pos);
  if (body.empty()) throw InvalidArgument("Pauli string has no sites: '" + std::string(text) + "'");
  PauliOp p(body.size());
  for (std::size_t k = 0; k < body.size(); ++k) p.set_letter(k, body[k]);
  p.set_phase(phase);
  return p;
}

PauliOp PauliOp::single(std::size_t num_qubits, std::size_t site, char letter) {
  PauliOp p(num_qubits);
  p.set_letter(site, letter);
  return p;
}

PauliOp PauliOp::uniform(std::size_t num_qubits, std::span<const std::size_t> sites, char letter) {
  PauliOp p(num_qubits);
  const bool want_x = letter == 'X' || letter == 'Y';
  const bool want_z = letter == 'Z' || letter == 'Y';
  if (!want_x && !want_z && letter != 'I') throw InvalidArgument(std::string("bad Pauli letter '") + letter + "'");
  for (std::size_t s : sites) {
    if (want_x) p.set_x(s, !p.x(s));
    if (want_z) p.set_z(s, !p.z(s));
  }
  return p;
}

bool PauliOp::x(std::size_t site) const {
  if (site >= n_) throw InvalidArgument("site index out of range");
  return (xs_[site / 64] >> (site % 64)) & 1u;
}

bool PauliOp::z(std::size_t site) const {
  if (site >= n_) throw InvalidArgument("site index out of range");
  return (zs_[site / 64] >> (site % 64)) & 1u;
}

char PauliOp::letter(std::size_t site) const {
  static constexpr char kLetters[4] = {'I', 'X', 'Z', 'Y'};
  return kLetters[(x(site) ? 1 : 0) | (z(site) ? 2 : 0)];
}

void PauliOp::set_x(std::size_t site, bool value) {
  if (site >= n_) throw InvalidArgument("site index out of range");
  const std::uint64_t bit = std::uint64_t{1} << (site % 64);
  if (value) xs_[site / 64] |= bit; else xs_[site / 64] &= ~bit;
}

void PauliOp::set_z(std::size_t site, bool value) {
  if (site >= n_) throw InvalidArgument("site index out of range");
  const std::uint64_t bit = std::uint64_t{1} << (site % 64);
  if (value) zs_[site / 64] |= bit; else zs_[site / 64] &= ~bit;
}

void PauliOp::set_letter(std::size_t site, char letter) {
  switch (letter) {
    case 'I': case '_': set_x(site, false); set_z(site, false); break;
    case 'X': set_x(site, true); set_z(site, false); break;
    case 'Y': set_x(site, true); set_z(site, true); break;
    case 'Z': set_x(site, false); set_z(site, true); break;
    default: throw InvalidArgument(std::string("bad Pauli letter '") + letter + "'");
  }
}

PauliOp PauliOp::with_phase(unsigned phase) const {
  PauliOp p = *this;
  p.set_phase(phase);
  return p;
}

bool PauliOp::is_identity_up_to_phase() const noexcept {
  for (std::size_t w = 0; w < xs_.size(); ++w) {
    if (xs_[w] | zs_[w]) return false;
  }
  return true;
}

bool PauliOp::same_bits(const PauliOp& other) const noexcept {
  return n_ == other.n_ && xs_ == other.xs_ && zs_ == other.zs_;
}

std::vector<std::size_t> PauliOp::support() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < n_; ++k) {
    if (x(k) || z(k)) out.push_back(k);
  }
  return out;
}

std::string PauliOp::str() const {
  static constexpr const char* kPrefix[4] = {"+", "+i", "-", "-i"};
  std::string s = kPrefix[phase_];
  s.reserve(s.size() + n_);
  for (std::size_t k = 0; k < n_; ++k) s.push_back(letter(k));
  return s;
}

PauliOp multiply(const PauliOp& a, const PauliOp& b) {
  require_same_size(a, b, "multiply");
  // Y = iXZ, so a letter string equals i^{|x∧z|} X^x Z^z. Moving Z^{z_a} past
  // X^{x_b} costs (-1)^{|z_a ∧ x_b|}.
  unsigned p = a.phase_ + b.phase_;
  p += popcount_and(a.xs_, a.zs_) + popcount_and(b.xs_, b.zs_);
  p += 2 * popcount_and(a.zs_, b.xs_);
  PauliOp out(a.n_);
  for (std::size_t w = 0; w < out.xs_.size(); ++w) {
    out.xs_[w] = a.xs_[w] ^ b.xs_[w];
    out.zs_[w] = a.zs_[w] ^ b.zs_[w];
  }
  p += 3 * popcount_and(out.xs_, out.zs_);  // back to letter form: multiply by i^{-|x∧z|}
  out.phase_ = p & 3u;
  return out;
}

PauliOp adjoint(const PauliOp& a) { return a.with_phase(4 - a.phase()); }

bool commutes(const PauliOp& a, const PauliOp& b) {
  require_same_size(a, b, "commutes");
  return ((popcount_and(a.x_words(), b.z_words()) + popcount_and(a.z_words(), b.x_words())) & 1u) == 0;
}

std::size_t weight(const PauliOp& a) {
  std::size_t total = 0;
  for (std::size_t w = 0; w < a.x_words().size(); ++w) {
    total += static_cast<std::size_t>(std::popcount(a.x_words()[w] | a.z_words()[w]));
  }
  return total;
}

cplx phase_factor(unsigned k) noexcept {
  switch (k & 3u) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

Eigen::MatrixXcd to_dense(const PauliOp& a, std::size_t max_qubits) {
  if (a.num_qubits() > max_qubits) {
    throw ResourceLimit("to_dense: " + std::to_string(a.num_qubits()) + " qubits exceeds the dense cap of " +
                        std::to_string(max_qubits));
  }
  const DenseMasks m = dense_masks(a);
  const std::uint64_t dim = std::uint64_t{1} << a.num_qubits();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t b = 0; b < dim; ++b) {
    const unsigned sign = static_cast<unsigned>(std::popcount(b & m.z) & 1);
    out(static_cast<Eigen::Index>(b ^ m.x), static_cast<Eigen::Index>(b)) = phase_factor(m.base_phase + 2 * sign);
  }
  return out;
}

void apply(const PauliOp& a, std::span<const cplx> in, std::span<cplx> out) {
  const DenseMasks m = dense_masks(a);
  const std::uint64_t dim = std::uint64_t{1} << a.num_qubits();
  if (in.size() != dim || out.size() != dim) throw InvalidArgument("apply: state vector has wrong length");
  const cplx f[2] = {phase_factor(m.base_phase), phase_factor(m.base_phase + 2)};
  for (std::uint64_t b = 0; b < dim; ++b) {
    out[b ^ m.x] = f[std::popcount(b & m.z) & 1] * in[b];
  }
}

void apply_add(const PauliOp& a, cplx coeff, std::span<const cplx> in, std::span<cplx> out) {
  const DenseMasks m = dense_masks(a);
  const std::uint64_t dim = std::uint64_t{1} << a.num_qubits();
  if (in.size() != dim || out.size() != dim) throw InvalidArgument("apply_add: state vector has wrong length");
  const cplx f[2] = {coeff * phase_factor(m.base_phase), coeff * phase_factor(m.base_phase + 2)};
  for (std::uint64_t b = 0; b < dim; ++b) {
    out[b ^ m.x] += f[std::popcount(b & m.z) & 1] * in[b];
  }
}

std::vector<PauliOp> paulis_up_to_weight(std::size_t num_qubits, std::size_t max_weight) {
  static constexpr char kLetters[3] = {'X', 'Y', 'Z'};
  std::vector<PauliOp> out;
  std::vector<std::size_t> sites;
  // Enumerate supports of each weight in lexicographic order, then letter tuples.
  for (std::size_t w = 1; w <= max_weight && w <= num_qubits; ++w) {
    sites.resize(w);
    for (std::size_t k = 0; k < w; ++k) sites[k] = k;
    while (true) {
      std::size_t combos = 1;
      for (std::size_t k = 0; k < w; ++k) combos *= 3;
      for (std::size_t c = 0; c < combos; ++c) {
        PauliOp p(num_qubits);
        std::size_t rest = c;
        for (std::size_t k = w; k-- > 0;) {
          p.set_letter(sites[k], kLetters[rest % 3]);
          rest /= 3;
        }
        out.push_back(std::move(p));
      }
      // next combination
      std::size_t k = w;
      while (k > 0 && sites[k - 1] == num_qubits - w + (k - 1)) --k;
      if (k == 0) break;
      ++sites[k - 1];
      for (std::size_t j = k; j < w; ++j) sites[j] = sites[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace nss
