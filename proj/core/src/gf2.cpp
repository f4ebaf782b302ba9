#include "nss/gf2.hpp"

#include <bit>

namespace nss {

bool BitVec::none() const noexcept {
  for (auto w : words_) {
    if (w) return false;
  }
  return true;
}

std::size_t BitVec::first_set() const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
  }
  return n_;
}

std::size_t BitVec::count() const noexcept {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

BitVec symplectic(const PauliOp& p) {
  const std::size_t n = p.num_qubits();
  BitVec v(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    if (p.x(k)) v.set(k, true);
    if (p.z(k)) v.set(n + k, true);
  }
  return v;
}

void Gf2RowSpace::grow_combos() {
  combo_capacity_ *= 2;
  for (auto& r : rows_) {
    BitVec wider(combo_capacity_);
    for (std::size_t i = 0; i < r.combo.size(); ++i) {
      if (r.combo.get(i)) wider.set(i, true);
    }
    r.combo = std::move(wider);
  }
}

bool Gf2RowSpace::insert(const BitVec& row) {
  if (inserted_ >= combo_capacity_) grow_combos();
  BitVec bits = row;
  BitVec combo(combo_capacity_);
  combo.set(inserted_, true);
  ++inserted_;
  // Rows are kept fully reduced: each pivot column appears in exactly one row.
  for (const auto& r : rows_) {
    if (bits.get(r.pivot)) {
      bits ^= r.bits;
      combo ^= r.combo;
    }
  }
  if (bits.none()) return false;
  const std::size_t pivot = bits.first_set();
  for (auto& r : rows_) {
    if (r.bits.get(pivot)) {
      r.bits ^= bits;
      r.combo ^= combo;
    }
  }
  rows_.push_back(Row{std::move(bits), std::move(combo), pivot});
  return true;
}

std::optional<std::vector<std::size_t>> Gf2RowSpace::decompose(const BitVec& v) const {
  BitVec bits = v;
  BitVec combo(combo_capacity_);
  for (const auto& r : rows_) {
    if (bits.get(r.pivot)) {
      bits ^= r.bits;
      combo ^= r.combo;
    }
  }
  if (!bits.none()) return std::nullopt;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < inserted_; ++i) {
    if (combo.get(i)) out.push_back(i);
  }
  return out;
}

std::size_t gf2_rank(const std::vector<PauliOp>& ops) {
  if (ops.empty()) return 0;
  Gf2RowSpace space(2 * ops.front().num_qubits());
  for (const auto& p : ops) space.insert(symplectic(p));
  return space.rank();
}

}  // namespace nss
