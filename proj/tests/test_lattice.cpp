#include <chrono>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "nss/errors.hpp"
#include "nss/gf2.hpp"
#include "nss/lattice.hpp"
#include "nss/statevec.hpp"
#include "oracles.hpp"

using namespace nss;

namespace {

// Checks written out from coordinates, independent of TorusLattice.
std::vector<std::string> oracle_checks(int l1, int l2) {
  const int n = 2 * l1 * l2;
  auto right = [&](int r, int c) { return 2 * (((r + l1) % l1) * l2 + (c + l2) % l2); };
  auto down = [&](int r, int c) { return right(r, c) + 1; };
  std::vector<std::string> out;
  for (int r = 0; r < l1; ++r) {
    for (int c = 0; c < l2; ++c) {
      std::string s(n, 'I');
      for (int e : {right(r, c), down(r, c), right(r, c - 1), down(r - 1, c)}) s[e] = s[e] == 'X' ? 'I' : 'X';
      out.push_back(s);
    }
  }
  for (int r = 0; r < l1; ++r) {
    for (int c = 0; c < l2; ++c) {
      std::string s(n, 'I');
      for (int e : {right(r, c), down(r, c), right(r + 1, c), down(r, c + 1)}) s[e] = s[e] == 'Z' ? 'I' : 'Z';
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace

TEST(Lattice, CodeDimensionIsFourOnEveryTorus) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int l1 = 2; l1 <= 6; ++l1) {
    for (int l2 = 2; l2 <= 6; ++l2) {
      const TorusLattice lat = build_torus(l1, l2);
      EXPECT_EQ(lat.check_rank(), 2u * l1 * l2 - 2) << l1 << "x" << l2;
      EXPECT_EQ(lat.code_dimension(), 4u);
    }
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 1.0);
}

TEST(Lattice, ChecksMatchCoordinateOracle) {
  for (int l1 = 2; l1 <= 5; ++l1) {
    for (int l2 = 2; l2 <= 5; ++l2) {
      const TorusLattice lat(l1, l2);
      const auto expected = oracle_checks(l1, l2);
      const auto checks = lat.checks();
      ASSERT_EQ(checks.size(), expected.size());
      std::vector<std::vector<int>> rows;
      for (std::size_t i = 0; i < checks.size(); ++i) {
        EXPECT_EQ(checks[i], PauliOp::parse(expected[i])) << i;
        rows.push_back(oracle::symplectic_row(expected[i]));
      }
      EXPECT_EQ(static_cast<std::size_t>(oracle::gf2_rank(rows)), lat.check_rank());
    }
  }
}

TEST(Lattice, ChecksCommute) {
  const TorusLattice lat(3, 4);
  const auto checks = lat.checks();
  for (const auto& a : checks) {
    for (const auto& b : checks) EXPECT_TRUE(commutes(a, b));
  }
}

TEST(Lattice, InvalidSizesThrow) {
  EXPECT_THROW(TorusLattice(1, 3), InvalidArgument);
  EXPECT_THROW(TorusLattice(3, 0), InvalidArgument);
}

TEST(Lattice, LoopsCommuteWithChecksAndPairUp) {
  for (int l1 = 2; l1 <= 4; ++l1) {
    for (int l2 = 2; l2 <= 4; ++l2) {
      const TorusLattice lat(l1, l2);
      const auto loops = homology_basis(lat);
      ASSERT_EQ(loops.size(), 4u);
      for (const auto& loop : loops) {
        for (const auto& c : lat.checks()) EXPECT_TRUE(commutes(loop.op, c));
        EXPECT_FALSE(is_contractible(lat, loop.op));
      }
      const auto& g1z = loops[0].op;
      const auto& g2z = loops[1].op;
      const auto& g1x = loops[2].op;
      const auto& g2x = loops[3].op;
      EXPECT_FALSE(commutes(g1z, g2x));
      EXPECT_FALSE(commutes(g2z, g1x));
      EXPECT_TRUE(commutes(g1z, g1x));
      EXPECT_TRUE(commutes(g2z, g2x));
      EXPECT_TRUE(commutes(g1z, g2z));
      EXPECT_TRUE(commutes(g1x, g2x));
      EXPECT_EQ(weight(g1z), static_cast<std::size_t>(l2));
      EXPECT_EQ(weight(g2z), static_cast<std::size_t>(l1));
    }
  }
}

TEST(Lattice, HomologyBitsOfLoops) {
  const TorusLattice lat(3, 3);
  EXPECT_EQ(homology_bits(lat, loop_operator(lat, HomologyClass::Gamma1Z)), (std::array<int, 4>{0, 0, 1, 0}));
  EXPECT_EQ(homology_bits(lat, loop_operator(lat, HomologyClass::Gamma2Z)), (std::array<int, 4>{0, 0, 0, 1}));
  EXPECT_EQ(homology_bits(lat, loop_operator(lat, HomologyClass::Gamma1X)), (std::array<int, 4>{1, 0, 0, 0}));
  EXPECT_EQ(homology_bits(lat, loop_operator(lat, HomologyClass::Gamma2X)), (std::array<int, 4>{0, 1, 0, 0}));
}

TEST(Lattice, ContractibilityOfChecksAndProducts) {
  const TorusLattice lat(3, 4);
  EXPECT_TRUE(is_contractible(lat, lat.stars()[0] * lat.stars()[5]));
  EXPECT_TRUE(is_contractible(lat, lat.plaquettes()[2]));
  EXPECT_TRUE(is_contractible(lat, PauliOp(lat.num_qubits())));
  // A loop times checks is still non-contractible.
  EXPECT_FALSE(is_contractible(lat, loop_operator(lat, HomologyClass::Gamma1Z) * lat.plaquettes()[3]));
  EXPECT_THROW(is_contractible(lat, PauliOp::single(lat.num_qubits(), 0, 'Z')), InvalidArgument);
}

TEST(LatticeProperty, LogicalGroupHasSixteenClasses) {
  // Products of the four loops: 16 distinct homology classes, none contractible except identity.
  const TorusLattice lat(3, 3);
  const auto loops = homology_basis(lat);
  std::set<std::array<int, 4>> seen;
  for (int mask = 0; mask < 16; ++mask) {
    PauliOp p(lat.num_qubits());
    for (int k = 0; k < 4; ++k) {
      if (mask >> k & 1) p = p * loops[k].op;
    }
    seen.insert(homology_bits(lat, p));
    EXPECT_EQ(is_contractible(lat, p), mask == 0);
  }
  EXPECT_EQ(seen.size(), 16u);
}

TEST(LatticeProperty, RandomCyclesHaveStableHomology) {
  const TorusLattice lat(4, 3);
  std::mt19937_64 rng(17);
  const auto checks = lat.checks();
  const auto loops = homology_basis(lat);
  for (int t = 0; t < 100; ++t) {
    PauliOp base(lat.num_qubits());
    for (int k = 0; k < 4; ++k) {
      if (rng() & 1) base = base * loops[k].op;
    }
    PauliOp dressed = base;
    for (const auto& c : checks) {
      if (rng() & 1) dressed = dressed * c;
    }
    EXPECT_EQ(homology_bits(lat, base), homology_bits(lat, dressed));
  }
}

TEST(Lattice, SectorOfCodeStates) {
  const TorusLattice lat(2, 2);
  for (LoopBasis basis : {LoopBasis::Z, LoopBasis::X}) {
    for (int a : {1, -1}) {
      for (int b : {1, -1}) {
        const SectorLabel j{{a, b}};
        const auto tab = code_state_tableau(lat, j, basis);
        EXPECT_TRUE(tab.is_complete());
        EXPECT_EQ(sector_of(lat, tab, basis), j);
        EXPECT_EQ(sector_of(lat, stabilizer_state(tab), basis), j);
      }
    }
  }
}

TEST(Lattice, SectorOfRejectsSuperposition) {
  const TorusLattice lat(2, 2);
  Eigen::VectorXcd v = stabilizer_state(code_state_tableau(lat, SectorLabel{{1, 1}})) +
                       stabilizer_state(code_state_tableau(lat, SectorLabel{{-1, 1}}));
  v.normalize();
  EXPECT_THROW(sector_of(lat, v), NotAnEigenstate);
}

TEST(Lattice, CodeSpaceProjectorHasRankFour) {
  const TorusLattice lat(2, 2);
  const Eigen::MatrixXcd p = stabilized_projector(code_space_tableau(lat));
  EXPECT_NEAR(p.trace().real(), 4.0, 1e-10);
  EXPECT_LT((p * p - p).norm(), 1e-10);
  for (const auto& c : lat.checks()) EXPECT_LT((to_dense(c) * p - p).norm(), 1e-10);
}

TEST(Lattice, JsonRoundTrip) {
  const TorusLattice lat(3, 5);
  const auto doc = to_json(lat);
  EXPECT_EQ(lattice_from_json(doc), lat);
  auto broken = doc;
  broken["L2"] = 4;
  EXPECT_THROW(lattice_from_json(broken), InvalidArgument);
}
