#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "nss/errors.hpp"
#include "nss/gf2.hpp"
#include "nss/statevec.hpp"
#include "nss/verify.hpp"
#include "oracles.hpp"

using namespace nss;

namespace {

std::vector<std::string> oracle_check_strings(const TorusLattice& lat) {
  std::vector<std::string> out;
  for (const auto& c : lat.checks()) {
    std::string s;
    for (std::size_t k = 0; k < lat.num_qubits(); ++k) s += c.letter(k);
    out.push_back(s);
  }
  return out;
}

std::string letters_of(const PauliOp& p) {
  std::string s;
  for (std::size_t k = 0; k < p.num_qubits(); ++k) s += p.letter(k);
  return s;
}

// A Pauli violates the condition iff it commutes with all checks and is not
// in their span.
bool oracle_logical(const std::vector<std::string>& checks, const std::string& e) {
  for (const auto& c : checks) {
    if (oracle::crossing_parity(c, e)) return false;
  }
  std::vector<std::vector<int>> rows;
  for (const auto& c : checks) rows.push_back(oracle::symplectic_row(c));
  const int r0 = oracle::gf2_rank(rows);
  rows.push_back(oracle::symplectic_row(e));
  return oracle::gf2_rank(rows) > r0;
}

// H = −Σ A_v − Σ B_p + h Σ Z_i from Kronecker products.
oracle::Mat oracle_hamiltonian(const TorusLattice& lat, double h, char field = 'Z') {
  const std::size_t n = lat.num_qubits();
  oracle::Mat hm = oracle::Mat::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (const auto& c : oracle_check_strings(lat)) hm -= oracle::dense_pauli(c);
  for (std::size_t k = 0; k < n; ++k) {
    std::string s(n, 'I');
    s[k] = field;
    hm += h * oracle::dense_pauli(s);
  }
  return hm;
}

Matrix code_basis(const TorusLattice& lat) { return stabilized_subspace(code_space_tableau(lat)); }

}  // namespace

TEST(KnillLaflamme, ExhaustiveWeightTwoOnThreeByThree) {
  const TorusLattice lat(3, 3);
  const auto errors = paulis_up_to_weight(lat.num_qubits(), 2);
  ASSERT_EQ(errors.size(), 18u * 3 + 153u * 9);
  const auto report = kl_check_stabilizer(lat, errors);
  EXPECT_EQ(report.max_deviation, 0.0);
  const auto checks = oracle_check_strings(lat);
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const auto& e = report.entries[i];
    EXPECT_FALSE(oracle_logical(checks, letters_of(errors[i])));
    EXPECT_NE(e.verdict, KLVerdict::Logical);
    EXPECT_EQ(e.deviation, 0.0);
  }
}

TEST(KnillLaflamme, MinimalLoopsViolateOnTwoByTwo) {
  const TorusLattice lat(2, 2);
  std::vector<PauliOp> loops;
  for (const auto& l : homology_basis(lat)) loops.push_back(l.op);
  const auto report = kl_check_stabilizer(lat, loops);
  for (const auto& e : report.entries) {
    EXPECT_EQ(e.verdict, KLVerdict::Logical);
    EXPECT_EQ(e.deviation, 1.0);
  }
  const auto dense = kl_check_isometry(code_basis(lat), loops);
  for (const auto& e : dense.entries) EXPECT_NEAR(e.deviation, 1.0, 1e-10);
}

TEST(KnillLaflamme, StabilizerAgreesWithDenseOnAllPaulisAtTwoByTwo) {
  const TorusLattice lat(2, 2);
  std::vector<PauliOp> all{PauliOp(lat.num_qubits())};
  for (const auto& p : paulis_up_to_weight(lat.num_qubits(), lat.num_qubits())) all.push_back(p);
  ASSERT_EQ(all.size(), 65536u);
  const auto sym = kl_check_stabilizer(lat, all);
  const auto dense = kl_check_isometry(code_basis(lat), all);
  const auto checks = oracle_check_strings(lat);
  std::size_t logical = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_NEAR(sym.entries[i].deviation, dense.entries[i].deviation, 1e-9) << all[i].str();
    EXPECT_LT(std::abs(sym.entries[i].c - dense.entries[i].c), 1e-9) << all[i].str();
    logical += sym.entries[i].verdict == KLVerdict::Logical;
  }
  // 16 logical classes × 64 stabilizers, minus the trivial class.
  EXPECT_EQ(logical, 15u * 64);
  std::size_t sampled = 0;
  for (std::size_t i = 0; i < all.size(); i += 97, ++sampled)
    EXPECT_EQ(sym.entries[i].verdict == KLVerdict::Logical, oracle_logical(checks, letters_of(all[i])));
  EXPECT_GT(sampled, 600u);
}

TEST(KnillLaflamme, DenseCoefficientIsLinear) {
  const TorusLattice lat(2, 2);
  const Matrix p = stabilized_projector(code_space_tableau(lat));
  const Matrix a = to_dense(lat.stars()[0]);
  const Matrix b = to_dense(PauliOp::single(8, 3, 'X'));
  const Matrix c = to_dense(loop_operator(lat, HomologyClass::Gamma1Z));
  ErrorSet es;
  es.dim = 256;
  es.generators = {a, b, c, 0.3 * a - 2.0 * b + cplx(0, 1) * c};
  const auto r = kl_check_dense(p, es);
  const cplx expected = 0.3 * r.entries[0].c - 2.0 * r.entries[1].c + cplx(0, 1) * r.entries[2].c;
  EXPECT_LT(std::abs(r.entries[3].c - expected), 1e-10);
  EXPECT_NEAR(r.entries[0].c.real(), 1.0, 1e-10);
  EXPECT_NEAR(std::abs(r.entries[1].c), 0.0, 1e-10);
  EXPECT_NEAR(r.entries[2].deviation, 1.0, 1e-10);
  ASSERT_TRUE(r.worst().has_value());
  EXPECT_NE(*r.worst(), 0u);
}

TEST(KnillLaflamme, DenseRejectsNonProjector) {
  ErrorSet es;
  es.dim = 2;
  es.generators = {Matrix::Identity(2, 2)};
  Matrix bad = Matrix::Identity(2, 2) * 0.5;
  EXPECT_THROW(kl_check_dense(bad, es), InvalidArgument);
}

TEST(SectorOrbits, FourOrthogonalOrbitsSpanTwoByTwo) {
  const TorusLattice lat(2, 2);
  const auto report = sector_orbits(lat);
  ASSERT_EQ(report.orbits.size(), 4u);
  for (const auto& o : report.orbits) EXPECT_EQ(o.basis.cols(), 64);
  EXPECT_EQ(report.total_dim, 256u);
  EXPECT_TRUE(report.spans);
  EXPECT_LT(report.max_overlap, 1e-10);
  // Each orbit stays an eigenspace of both Z loops.
  const auto loops = sector_loops(lat);
  for (const auto& o : report.orbits) {
    for (int k = 0; k < 2; ++k) {
      const Matrix lb = to_dense(loops[k]) * o.basis;
      EXPECT_LT((lb - o.label.j[k] * o.basis).norm(), 1e-9);
    }
  }
}

TEST(SectorOrbits, GeneratorsCommuteWithZLoops) {
  const TorusLattice lat(2, 3);
  const auto gens = local_sector_generators(lat);
  EXPECT_FALSE(gens.empty());
  for (const auto& g : gens) {
    EXPECT_LE(weight(g), 2u);
    for (const auto& l : sector_loops(lat)) EXPECT_TRUE(commutes(g, l));
  }
}

TEST(Spectrum, UnperturbedTwoByTwo) {
  const TorusLattice lat(2, 2);
  const auto r = spectrum(lat, uniform_field(lat, FieldKind::Z), 0.0);
  EXPECT_NEAR(r.ground_energy, -8.0, 1e-9);
  EXPECT_EQ(r.ground_degeneracy, 4u);
  EXPECT_NEAR(r.gap_delta, 4.0, 1e-9);
  EXPECT_LT(r.splitting, 1e-9);
  EXPECT_LT(r.coupling_k, 1e-9);
  const Eigen::VectorXd exact = Eigen::SelfAdjointEigenSolver<oracle::Mat>(oracle_hamiltonian(lat, 0.0)).eigenvalues();
  for (Eigen::Index i = 0; i < r.levels.size(); ++i) EXPECT_NEAR(r.levels[i], exact[i], 1e-9);
}

TEST(Spectrum, PerturbedLevelsMatchDenseDiagonalization) {
  {
    const TorusLattice lat(2, 2);
    for (double h : {0.05, 0.3}) {
      for (FieldKind kind : {FieldKind::Z, FieldKind::X}) {
        const auto r = spectrum(lat, uniform_field(lat, kind), h);
        const Eigen::VectorXd exact =
            Eigen::SelfAdjointEigenSolver<oracle::Mat>(oracle_hamiltonian(lat, h, kind == FieldKind::Z ? 'Z' : 'X'),
                                                       Eigen::EigenvaluesOnly)
                .eigenvalues();
        for (Eigen::Index i = 0; i < r.levels.size(); ++i) EXPECT_NEAR(r.levels[i], exact[i], 1e-8);
        EXPECT_NEAR(r.splitting, exact[3] - exact[0], 1e-8);
        EXPECT_NEAR(r.gap_delta, exact[4] - exact[3], 1e-8);
        EXPECT_LT(r.max_residual, 1e-8);
      }
    }
  }
}

TEST(Spectrum, WeakFieldOrdering) {
  const TorusLattice lat(2, 2);
  const auto r = spectrum(lat, uniform_field(lat, FieldKind::Z), 0.05);
  for (Eigen::Index i = 1; i < r.levels.size(); ++i) EXPECT_LE(r.levels[i - 1], r.levels[i]);
  EXPECT_GE(r.splitting, 0.0);
  EXPECT_GT(r.gap_delta, r.splitting);
  EXPECT_GT(r.coupling_k, 0.0);
  EXPECT_LT(r.coupling_k, 1.0);
  EXPECT_EQ(r.ground_vectors.cols(), 4);
}

TEST(SpectrumProperty, EvenInFieldStrength) {
  const TorusLattice lat(2, 2);
  for (double h : {0.1, 0.4}) {
    const auto plus = spectrum(lat, uniform_field(lat, FieldKind::Z), h);
    const auto minus = spectrum(lat, uniform_field(lat, FieldKind::Z), -h);
    EXPECT_LT((plus.levels - minus.levels).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Spectrum, RemovedStarsRaiseDegeneracy) {
  const TorusLattice lat(2, 2);
  SpectrumOptions opts;
  opts.num_levels = 12;
  for (auto [removed, expected] : {std::pair{1, 4u}, std::pair{2, 8u}}) {
    PauliSum h0(lat.num_qubits());
    for (std::size_t v = static_cast<std::size_t>(removed); v < lat.stars().size(); ++v) h0.add(lat.stars()[v], -1.0);
    for (const auto& p : lat.plaquettes()) h0.add(p, -1.0);
    const auto r = spectrum(h0, {}, 0.0, expected, opts);
    EXPECT_EQ(r.ground_degeneracy, expected) << removed;
  }
}

TEST(Scaling, PlumbingAndFit) {
  ScalingOptions opts;
  opts.threads = 2;
  const auto result = scaling_study({{2, 2}, {2, 3}, {3, 2}, {2, 2}}, 0.2, FieldKind::Z, opts);
  ASSERT_EQ(result.points.size(), 3u);
  EXPECT_EQ(result.warnings.size(), 1u);
  EXPECT_EQ(result.points[0].lattice_size, 8u);
  EXPECT_FALSE(result.degenerate);
  ASSERT_EQ(result.fits.size(), 2u);
  ASSERT_TRUE(result.best.has_value());
  // Optimality: residuals are orthogonal to 1 and x.
  for (const auto& fit : result.fits) {
    double r1 = 0, rx = 0, ss = 0;
    for (const auto& p : result.points) {
      const double x = std::pow(static_cast<double>(p.lattice_size), 1.0 / fit.n);
      const double r = std::log(p.splitting) - (fit.intercept - fit.alpha * x);
      r1 += r;
      rx += r * x;
      ss += r * r;
    }
    EXPECT_NEAR(r1, 0.0, 1e-9);
    EXPECT_NEAR(rx, 0.0, 1e-8);
    EXPECT_NEAR(fit.residual, std::sqrt(ss / 3.0), 1e-12);
  }
  for (const auto& p : result.points) {
    EXPECT_GT(p.gap, 0.0);
    EXPECT_GE(p.deviation_max, 0.0);
  }
  std::ostringstream csv;
  write_csv(csv, result);
  std::string line;
  std::istringstream in(csv.str());
  std::getline(in, line);
  EXPECT_EQ(line, "L1,L2,h,splitting,gap,coupling_k,deviation_max");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Scaling, DegenerateAtZeroField) {
  const auto result = scaling_study({{2, 2}, {2, 3}, {3, 2}}, 0.0, FieldKind::Z);
  EXPECT_TRUE(result.degenerate);
  EXPECT_FALSE(result.best.has_value());
}

TEST(Scaling, RejectsTooFewSizes) {
  EXPECT_THROW(scaling_study({{2, 2}, {2, 2}, {2, 3}}, 0.1, FieldKind::Z), InsufficientData);
  EXPECT_THROW(scaling_study({{2, 2}, {2, 3}, {6, 6}}, 0.1, FieldKind::Z), ResourceLimit);
}
