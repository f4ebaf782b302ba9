#include <algorithm>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "nss/algebra.hpp"
#include "nss/errors.hpp"
#include "oracles.hpp"

using namespace nss;

namespace {

ErrorSet collective3() {
  ErrorSet es;
  es.dim = 8;
  for (char a : {'X', 'Y', 'Z'}) {
    Matrix s = Matrix::Zero(8, 8);
    for (int k = 0; k < 3; ++k) {
      std::string letters = "III";
      letters[k] = a;
      s += 0.5 * oracle::dense_pauli(letters);
    }
    es.generators.push_back(s);
  }
  return es;
}

ErrorSet from_letters(std::initializer_list<const char*> ops) {
  ErrorSet es;
  for (const char* s : ops) es.generators.push_back(oracle::dense_pauli(s));
  es.dim = static_cast<std::size_t>(es.generators.front().rows());
  return es;
}

std::vector<std::pair<std::size_t, std::size_t>> shape(const SectorDecomposition& dec) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& s : dec.sectors) out.emplace_back(s.n, s.d);
  std::sort(out.begin(), out.end());
  return out;
}

Matrix random_unitary(std::size_t d, unsigned seed) {
  std::srand(seed);
  const Matrix a = Matrix::Random(d, d);
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(d, d);
}

}  // namespace

TEST(Algebra, IdentityOnlyGivesScalars) {
  ErrorSet es;
  es.dim = 3;
  es.generators.push_back(Matrix::Identity(3, 3));
  const auto a = close_algebra(es);
  EXPECT_EQ(a.size(), 1u);
  EXPECT_TRUE(a.closed());
  const auto dec = decompose(a);
  ASSERT_EQ(dec.sectors.size(), 1u);
  EXPECT_EQ(dec.sectors[0].n, 3u);
  EXPECT_EQ(dec.sectors[0].d, 1u);
}

TEST(Algebra, PauliPairGivesFullMatrixAlgebra) {
  const auto a = close_algebra(from_letters({"X", "Z"}));
  EXPECT_EQ(a.size(), 4u);
  const auto dec = decompose(a);
  EXPECT_EQ(shape(dec), (std::vector<std::pair<std::size_t, std::size_t>>{{1, 2}}));
  EXPECT_TRUE(noiseless_subsystems(dec).empty());
}

TEST(Algebra, SingleQubitNoiseLeavesSpectatorNoiseless) {
  // X and Z on qubit 0 of two: M(2) ⊗ 1.
  const auto a = close_algebra(from_letters({"XI", "ZI"}));
  EXPECT_EQ(a.size(), 4u);
  const auto dec = decompose(a);
  EXPECT_EQ(shape(dec), (std::vector<std::pair<std::size_t, std::size_t>>{{2, 2}}));
  EXPECT_LT(dec.block_residual, 1e-9);
  const auto ns = noiseless_subsystems(dec);
  ASSERT_EQ(ns.size(), 1u);
  EXPECT_EQ(ns[0].n, 2u);
}

TEST(Algebra, CollectiveDephasingHasDecoherenceFreeSubspace) {
  ErrorSet es;
  es.dim = 4;
  es.generators.push_back(oracle::dense_pauli("ZI") + oracle::dense_pauli("IZ"));
  const auto a = close_algebra(es);
  EXPECT_EQ(a.size(), 3u);
  const auto dec = decompose(a);
  EXPECT_EQ(shape(dec), (std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {1, 1}, {2, 1}}));
  // Largest multiplicity first: the span of |01>, |10>.
  const Matrix& p = dec.sectors.front().central_projector;
  EXPECT_NEAR(std::abs(p(1, 1)), 1.0, 1e-10);
  EXPECT_NEAR(std::abs(p(2, 2)), 1.0, 1e-10);
  EXPECT_NEAR(std::abs(p(0, 0)), 0.0, 1e-10);
}

TEST(Algebra, CollectiveNoiseMatchesBruteForceClosure) {
  const auto es = collective3();
  const auto a = close_algebra(es);
  EXPECT_EQ(a.size(), oracle::brute_force_algebra_dim(es.generators));
  EXPECT_EQ(a.size(), 20u);
  EXPECT_LT(orthonormality_defect(a), 1e-10);
  EXPECT_LT(pairwise_closure_residual(a), 1e-9);
}

TEST(Algebra, CollectiveNoiseCommutantMatchesSvdOracle) {
  const auto es = collective3();
  const auto a = close_algebra(es);
  const auto ap = commutant(a);
  EXPECT_EQ(ap.size(), oracle::commutant_dim_svd(es.generators));
  EXPECT_EQ(ap.size(), 5u);
  for (const auto& x : ap.basis()) {
    for (const auto& g : es.generators) EXPECT_LT((x * g - g * x).norm(), 1e-9);
  }
}

TEST(Algebra, CollectiveNoiseSectors) {
  const auto es = collective3();
  const auto a = close_algebra(es);
  const auto dec = decompose(a);
  ASSERT_EQ(dec.sectors.size(), 2u);
  EXPECT_EQ(dec.sectors[0].n, 2u);
  EXPECT_EQ(dec.sectors[0].d, 2u);
  EXPECT_EQ(dec.sectors[1].n, 1u);
  EXPECT_EQ(dec.sectors[1].d, 4u);
  EXPECT_EQ(dec.sum_nd(), 8u);
  EXPECT_EQ(dec.sum_d2(), a.size());
  EXPECT_EQ(dec.sum_n2(), commutant(a).size());
  EXPECT_LT(dec.block_residual, 1e-7);
  EXPECT_LT(dec.rounding_residual, 1e-9);
  const auto [p_half, p_three] = oracle::three_spin_projectors();
  EXPECT_LT((dec.sectors[0].central_projector - p_half).norm(), 1e-8);
  EXPECT_LT((dec.sectors[1].central_projector - p_three).norm(), 1e-8);
  for (const auto& s : dec.sectors) {
    const Matrix& v = s.isometry;
    EXPECT_LT((v.adjoint() * v - Matrix::Identity(v.cols(), v.cols())).norm(), 1e-9);
    EXPECT_LT((v * v.adjoint() - s.central_projector).norm(), 1e-8);
    for (const auto& g : es.generators) EXPECT_LT(block_structure_residual(s, g), 1e-8);
  }
}

TEST(Algebra, DoubleCommutantReturnsAlgebra) {
  const auto a = close_algebra(collective3());
  const auto app = commutant(commutant(a));
  EXPECT_EQ(app.size(), a.size());
  EXPECT_LT(span_distance(a, app), 1e-7);
}

TEST(Algebra, CenterIsIntersection) {
  const auto a = close_algebra(collective3());
  const auto z = center(a);
  EXPECT_EQ(z.size(), 2u);
  const auto ap = commutant(a);
  for (const auto& c : z.basis()) {
    EXPECT_LT(a.residual(c), 1e-8);
    EXPECT_LT(ap.residual(c), 1e-8);
  }
}

TEST(AlgebraProperty, InvariantUnderGeneratorPermutationAndScaling) {
  const auto es = collective3();
  const auto base = decompose(close_algebra(es));
  ErrorSet shuffled = es;
  std::reverse(shuffled.generators.begin(), shuffled.generators.end());
  for (auto& g : shuffled.generators) g *= 3.7;
  shuffled.generators.push_back(es.generators[0] * es.generators[1]);
  const auto a2 = close_algebra(shuffled);
  EXPECT_LT(span_distance(close_algebra(es), a2), 1e-7);
  const auto dec = decompose(a2);
  EXPECT_EQ(shape(dec), shape(base));
  for (std::size_t i = 0; i < dec.sectors.size(); ++i)
    EXPECT_LT((dec.sectors[i].central_projector - base.sectors[i].central_projector).norm(), 1e-8);
}

TEST(AlgebraProperty, CovariantUnderUnitaryConjugation) {
  const auto es = collective3();
  const auto base = decompose(close_algebra(es));
  for (unsigned seed : {1u, 2u, 3u}) {
    const Matrix u = random_unitary(8, seed);
    ErrorSet rotated = es;
    for (auto& g : rotated.generators) g = u * g * u.adjoint();
    const auto dec = decompose(close_algebra(rotated));
    ASSERT_EQ(shape(dec), shape(base));
    for (std::size_t i = 0; i < dec.sectors.size(); ++i) {
      const Matrix expected = u * base.sectors[i].central_projector * u.adjoint();
      EXPECT_LT((dec.sectors[i].central_projector - expected).norm(), 1e-8);
    }
  }
}

TEST(AlgebraProperty, SumRulesOnRandomBlockAlgebras) {
  // 1_2 ⊗ M(2) ⊕ M(3) built from random generators in a rotated basis.
  for (unsigned seed = 10; seed < 14; ++seed) {
    std::srand(seed);
    ErrorSet es;
    es.dim = 7;
    for (int k = 0; k < 2; ++k) {
      Matrix g = Matrix::Zero(7, 7);
      const Matrix m2 = Matrix::Random(2, 2);
      g.topLeftCorner(4, 4) = oracle::kron(Matrix::Identity(2, 2), m2);
      g.bottomRightCorner(3, 3) = Matrix::Random(3, 3);
      es.generators.push_back(g);
    }
    const Matrix u = random_unitary(7, seed + 100);
    for (auto& g : es.generators) g = u * g * u.adjoint();
    const auto a = close_algebra(es);
    EXPECT_EQ(a.size(), oracle::brute_force_algebra_dim(es.generators));
    const auto dec = decompose(a);
    EXPECT_EQ(shape(dec), (std::vector<std::pair<std::size_t, std::size_t>>{{1, 3}, {2, 2}}));
    EXPECT_EQ(dec.sum_nd(), 7u);
    EXPECT_EQ(dec.sum_d2(), a.size());
    EXPECT_EQ(dec.sum_n2(), oracle::commutant_dim_svd(es.generators));
    EXPECT_LT(dec.block_residual, 1e-7);
  }
}

TEST(Algebra, DecompositionIsDeterministic) {
  const auto a = close_algebra(collective3());
  const auto d1 = to_json(decompose(a), true).dump();
  const auto d2 = to_json(decompose(close_algebra(collective3())), true).dump();
  EXPECT_EQ(d1, d2);
  AlgebraOptions other;
  other.seed = 99;
  EXPECT_EQ(shape(decompose(a, other)), shape(decompose(a)));
}

TEST(Algebra, CommutantCapAndClosureGuard) {
  ErrorSet es;
  es.dim = 33;
  es.generators.push_back(Matrix::Identity(33, 33));
  const auto a = close_algebra(es);
  EXPECT_THROW(commutant(a), ResourceLimit);
  MatrixAlgebra open(2, {Matrix::Identity(2, 2) / std::sqrt(2.0)}, {}, false);
  EXPECT_THROW(commutant(open), InvalidArgument);
  AlgebraOptions small;
  small.limits.algebra_dim = 4;
  EXPECT_THROW(close_algebra(collective3(), small), ResourceLimit);
}

TEST(Algebra, ValidationRejectsMismatchedGenerators) {
  ErrorSet es;
  es.dim = 2;
  es.generators.push_back(Matrix::Identity(3, 3));
  EXPECT_THROW(es.validate(), InvalidArgument);
  EXPECT_THROW(close_algebra(es), InvalidArgument);
  ErrorSet labelled = from_letters({"X"});
  labelled.labels = {"a", "b"};
  EXPECT_THROW(labelled.validate(), InvalidArgument);
}

TEST(Algebra, ErrorSetJsonRoundTrip) {
  auto es = collective3();
  es.labels = {"S_x", "S_y", "S_z"};
  const auto back = error_set_from_json(to_json(es));
  ASSERT_EQ(back.generators.size(), 3u);
  EXPECT_EQ(back.labels, es.labels);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT((back.generators[i] - es.generators[i]).norm(), 1e-15);
  EXPECT_THROW(error_set_from_json(nlohmann::json::parse(R"({"dim": 2, "generators": [[[1, 0]]]})")),
               InvalidArgument);
}

TEST(Algebra, ShippedCollectiveFileMatches) {
  std::ifstream in(NSSLAB_DATA_DIR "/collective3.json");
  ASSERT_TRUE(in);
  const auto es = error_set_from_json(nlohmann::json::parse(in));
  const auto ref = collective3();
  ASSERT_EQ(es.generators.size(), 3u);
  // The file stores Pauli sums, twice the spin operators.
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT((es.generators[i] - 2.0 * ref.generators[i]).norm(), 1e-12);
}
