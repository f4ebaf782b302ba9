#include <random>

#include <gtest/gtest.h>

#include "nss/errors.hpp"
#include "nss/pauli.hpp"
#include "oracles.hpp"

using namespace nss;

namespace {

std::string letters_of(const PauliOp& p) {
  std::string s;
  for (std::size_t k = 0; k < p.num_qubits(); ++k) s += p.letter(k);
  return s;
}

PauliOp random_pauli(std::mt19937_64& rng, std::size_t n) {
  static const char kLetters[] = "IXYZ";
  std::string s;
  for (std::size_t k = 0; k < n; ++k) s += kLetters[rng() % 4];
  return PauliOp::parse(s).with_phase(static_cast<unsigned>(rng() % 4));
}

oracle::Mat oracle_dense(const PauliOp& p) { return oracle::dense_pauli(letters_of(p), phase_factor(p.phase())); }

}  // namespace

TEST(Pauli, XTimesZIsMinusIY) {
  const PauliOp xz = PauliOp::parse("X") * PauliOp::parse("Z");
  EXPECT_EQ(xz.phase(), 3u);
  EXPECT_EQ(xz.letter(0), 'Y');
  EXPECT_TRUE(to_dense(xz).isApprox(to_dense(PauliOp::parse("X")) * to_dense(PauliOp::parse("Z")), 1e-12));
}

TEST(Pauli, IdentityIsNeutral) {
  const PauliOp p = PauliOp::parse("-iXZYI");
  EXPECT_EQ(PauliOp(4) * p, p);
  EXPECT_EQ(p * PauliOp(4), p);
}

TEST(Pauli, SquareOfZIsIdentity) {
  const PauliOp zz = PauliOp::parse("Z") * PauliOp::parse("Z");
  EXPECT_TRUE(zz.is_identity_up_to_phase());
  EXPECT_EQ(zz.phase(), 0u);
}

TEST(Pauli, CommutationExamples) {
  EXPECT_FALSE(commutes(PauliOp::parse("X"), PauliOp::parse("Z")));
  EXPECT_TRUE(commutes(PauliOp::parse("XI"), PauliOp::parse("IX")));
  EXPECT_TRUE(commutes(PauliOp::parse("XX"), PauliOp::parse("ZZ")));
}

TEST(Pauli, WeightExamples) {
  EXPECT_EQ(weight(PauliOp(5)), 0u);
  EXPECT_EQ(weight(PauliOp::parse("XIZI")), 2u);
  EXPECT_EQ(weight(PauliOp::parse("IY")), 1u);
}

TEST(Pauli, DenseSingleQubit) {
  Eigen::MatrixXcd x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  EXPECT_TRUE(to_dense(PauliOp::parse("X")).isApprox(x));
  EXPECT_TRUE(to_dense(PauliOp::parse("Z")).isApprox(z));
}

TEST(Pauli, DenseMatchesKroneckerOracle) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const PauliOp p = random_pauli(rng, 1 + rng() % 4);
    EXPECT_LT((to_dense(p) - oracle_dense(p)).norm(), 1e-12) << p.str();
  }
}

TEST(Pauli, DimensionMismatchThrows) {
  EXPECT_THROW(multiply(PauliOp(2), PauliOp(3)), InvalidArgument);
  EXPECT_THROW(commutes(PauliOp(2), PauliOp(3)), InvalidArgument);
}

TEST(Pauli, DenseCapThrows) { EXPECT_THROW(to_dense(PauliOp(13)), ResourceLimit); }

TEST(Pauli, TextRoundTrip) {
  for (const char* s : {"+XIZY", "-iXZII", "+iZ", "-YYYY"}) EXPECT_EQ(PauliOp::parse(s).str(), s);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const PauliOp p = random_pauli(rng, 1 + rng() % 70);
    EXPECT_EQ(PauliOp::parse(p.str()), p);
  }
  EXPECT_THROW(PauliOp::parse("XQ"), InvalidArgument);
  EXPECT_THROW(PauliOp::parse(""), InvalidArgument);
}

TEST(PauliProperty, GroupLaws) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 4;
    const PauliOp a = random_pauli(rng, n), b = random_pauli(rng, n), c = random_pauli(rng, n);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_TRUE((a * a).is_identity_up_to_phase());
    const PauliOp a4 = a * a * a * a;
    EXPECT_TRUE(a4.is_identity_up_to_phase());
    EXPECT_EQ(a4.phase(), 0u);
  }
}

TEST(PauliProperty, CommutesMatchesDense) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 4;
    const PauliOp a = random_pauli(rng, n), b = random_pauli(rng, n);
    const oracle::Mat da = oracle_dense(a), db = oracle_dense(b);
    const bool dense_commute = (da * db - db * da).cwiseAbs().maxCoeff() < 1e-12;
    EXPECT_EQ(commutes(a, b), dense_commute);
  }
}

TEST(PauliProperty, CrossingParitiesAdd) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 6;
    const PauliOp a = random_pauli(rng, n), b = random_pauli(rng, n), c = random_pauli(rng, n);
    EXPECT_EQ(commutes(a * b, c), commutes(a, c) == commutes(b, c));
  }
}

TEST(PauliProperty, DenseIsHomomorphism) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 4;
    const PauliOp a = random_pauli(rng, n), b = random_pauli(rng, n);
    EXPECT_LT((to_dense(a * b) - to_dense(a) * to_dense(b)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(PauliProperty, ApplyMatchesDense) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 5;
    const PauliOp a = random_pauli(rng, n);
    const Eigen::VectorXcd v = Eigen::VectorXcd::Random(Eigen::Index{1} << n);
    Eigen::VectorXcd out(v.size());
    apply(a, std::span<const cplx>(v.data(), v.size()), std::span<cplx>(out.data(), out.size()));
    EXPECT_LT((out - oracle_dense(a) * v).norm(), 1e-12);
  }
}

TEST(Pauli, EnumerationCounts) {
  // 3 letters per site: C(n,1)·3 + C(n,2)·9.
  EXPECT_EQ(paulis_up_to_weight(4, 1).size(), 12u);
  EXPECT_EQ(paulis_up_to_weight(4, 2).size(), 12u + 6u * 9u);
  EXPECT_EQ(paulis_up_to_weight(18, 2).size(), 54u + 153u * 9u);
}
