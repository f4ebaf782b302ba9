#include <random>

#include <gtest/gtest.h>

#include "nss/gf2.hpp"
#include "nss/pauli.hpp"
#include "oracles.hpp"

using namespace nss;

TEST(Gf2Property, RankMatchesEliminationOracle) {
  std::mt19937_64 rng(9);
  static const char kLetters[] = "IXYZ";
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 9;
    const std::size_t m = 1 + rng() % 14;
    std::vector<PauliOp> ops;
    std::vector<std::vector<int>> rows;
    for (std::size_t i = 0; i < m; ++i) {
      std::string s;
      // Sparse strings make dependencies likely.
      for (std::size_t k = 0; k < n; ++k) s += (rng() % 3 == 0) ? kLetters[1 + rng() % 3] : 'I';
      ops.push_back(PauliOp::parse(s));
      rows.push_back(oracle::symplectic_row(s));
    }
    EXPECT_EQ(static_cast<int>(gf2_rank(ops)), oracle::gf2_rank(rows));
  }
}

TEST(Gf2, DecomposeReturnsCombination) {
  Gf2RowSpace span(8);
  const auto a = symplectic(PauliOp::parse("XXII"));
  const auto b = symplectic(PauliOp::parse("IZZI"));
  EXPECT_TRUE(span.insert(a));
  EXPECT_TRUE(span.insert(b));
  BitVec ab = a;
  ab ^= b;
  EXPECT_FALSE(span.insert(ab));
  const auto combo = span.decompose(ab);
  ASSERT_TRUE(combo.has_value());
  EXPECT_EQ(combo->size(), 2u);
  EXPECT_FALSE(span.contains(symplectic(PauliOp::parse("IIIX"))));
  EXPECT_EQ(span.rank(), 2u);
}
