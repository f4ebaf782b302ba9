#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "nss/pauli.hpp"

namespace nss {

/// Packed GF(2) row vector.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t num_bits) : n_(num_bits), words_((num_bits + 63) / 64, 0) {}

  std::size_t size() const noexcept { return n_; }
  bool get(std::size_t i) const noexcept { return (words_[i / 64] >> (i % 64)) & 1u; }
  void set(std::size_t i, bool v) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (i % 64);
    if (v) words_[i / 64] |= bit; else words_[i / 64] &= ~bit;
  }
  void flip(std::size_t i) noexcept { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }
  BitVec& operator^=(const BitVec& o) noexcept {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    return *this;
  }
  bool none() const noexcept;
  /// Lowest set bit, or size() if none.
  std::size_t first_set() const noexcept;
  std::size_t count() const noexcept;

  friend bool operator==(const BitVec&, const BitVec&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Symplectic vector (x | z) of a Pauli, length 2n; phase dropped.
BitVec symplectic(const PauliOp& p);

/// Incrementally maintained row-echelon basis that remembers, for every
/// reduced row, which inserted rows were XOR-ed together to produce it.
class Gf2RowSpace {
 public:
  explicit Gf2RowSpace(std::size_t num_bits) : num_bits_(num_bits) {}

  /// Inserts a row; returns true when it was independent of the rows so far.
  /// Rows are numbered in insertion order whether or not they were independent.
  bool insert(const BitVec& row);

  /// Indices of inserted rows whose XOR equals v, or nullopt if v is outside the span.
  std::optional<std::vector<std::size_t>> decompose(const BitVec& v) const;

  bool contains(const BitVec& v) const { return decompose(v).has_value(); }
  std::size_t rank() const noexcept { return rows_.size(); }
  std::size_t num_inserted() const noexcept { return inserted_; }

 private:
  struct Row {
    BitVec bits;
    BitVec combo;  // over inserted rows
    std::size_t pivot;
  };
  void grow_combos();

  std::size_t num_bits_;
  std::size_t inserted_ = 0;
  std::size_t combo_capacity_ = 64;
  std::vector<Row> rows_;
};

/// GF(2) rank of the symplectic vectors of a set of Paulis.
std::size_t gf2_rank(const std::vector<PauliOp>& ops);

}  // namespace nss
