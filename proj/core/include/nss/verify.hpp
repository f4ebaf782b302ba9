#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nss/algebra.hpp"
#include "nss/config.hpp"
#include "nss/lanczos.hpp"
#include "nss/lattice.hpp"
#include "nss/pauli.hpp"

namespace nss {

enum class KLVerdict {
  InStabilizer,  // c = phase of the group element
  Detectable,    // anticommutes with a check, c = 0
  Logical,       // commutes with every check but acts on the code: the condition fails
  Numerical,     // dense path
};

std::string to_string(KLVerdict v);

struct KLEntry {
  std::string label;
  cplx c = 0.0;
  double deviation = 0.0;
  KLVerdict verdict = KLVerdict::Numerical;
};

struct KLReport {
  std::vector<KLEntry> entries;
  double max_deviation = 0.0;

  /// Index of the worst entry, or nullopt when empty.
  std::optional<std::size_t> worst() const;
};

/// Exact Knill–Laflamme verdicts on the toric code space from symplectic
/// arithmetic only. Labels default to the Pauli strings.
KLReport kl_check_stabilizer(const TorusLattice& lat, const std::vector<PauliOp>& errors,
                             const std::vector<std::string>& labels = {});

/// Dense check against a code projector Π:
/// c(X) = tr(ΠXΠ)/tr(Π), deviation = ‖ΠXΠ − c(X)Π‖₂.
KLReport kl_check_dense(const Matrix& projector, const ErrorSet& errors, const Tolerances& tol = {});

/// Same quantities with the code space given by orthonormal columns W and
/// Pauli errors applied matrix-free: deviation = ‖W†XW − c·1‖₂.
KLReport kl_check_isometry(const Matrix& code_basis, const std::vector<PauliOp>& errors,
                           const std::vector<std::string>& labels = {});

struct SectorOrbit {
  SectorLabel label;
  Matrix basis;  // orthonormal columns
};

struct SectorOrbitReport {
  std::vector<SectorOrbit> orbits;
  /// Largest ‖B_J† B_K‖₂ over J ≠ K.
  double max_overlap = 0.0;
  std::size_t total_dim = 0;
  bool spans = false;  // total_dim == 2^n
  std::size_t num_generators = 0;
};

/// Local error generators used by sector_orbits: Paulis of weight ≤ 2 that
/// commute with both Z-type loops (the others move between sectors).
std::vector<PauliOp> local_sector_generators(const TorusLattice& lat);

/// Builds the four code states |J> and their orbits under repeated action of
/// the generators (defaults to local_sector_generators), then measures
/// mutual overlaps and total dimension.
SectorOrbitReport sector_orbits(const TorusLattice& lat, const std::optional<std::vector<PauliOp>>& generators = {},
                                const Limits& limits = {});

/// −Σ stars − Σ plaquettes.
PauliSum toric_hamiltonian(const TorusLattice& lat);

enum class FieldKind { Z, X };
std::string to_string(FieldKind k);
FieldKind field_kind_from_string(const std::string& s);

/// Σ_i P_i over every qubit with P the field letter.
std::vector<PauliTerm> uniform_field(const TorusLattice& lat, FieldKind kind);

struct SpectralReport {
  Eigen::VectorXd levels;  // lowest computed eigenvalues, ascending
  double ground_energy = 0.0;
  double gap_delta = 0.0;  // E_m − E_{m−1}, m = multiplet size
  std::size_t ground_degeneracy = 0;
  double splitting = 0.0;  // E_{m−1} − E_0
  double coupling_k = 0.0;
  std::size_t multiplet = 0;
  double max_residual = 0.0;
  Matrix ground_vectors;  // the m lowest eigenvectors
};

struct SpectrumOptions {
  Tolerances tol{};
  Limits limits{};
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t stream = 0;
  std::size_t num_levels = 8;
};

/// Spectrum of H = H0 + h·V from the matrix-free eigensolver. The ground
/// multiplet has `multiplet` levels. coupling_k is the largest
/// ‖(1 − P_g) h c_t P_t P_g‖₂ over perturbation terms, with P_g the projector
/// onto the computed multiplet: the strongest ground-to-excited matrix
/// element of a single term, independent of the basis chosen inside
/// degenerate levels.
SpectralReport spectrum(const PauliSum& h0, const std::vector<PauliTerm>& perturbation, double h,
                        std::size_t multiplet, const SpectrumOptions& options = {});

/// Toric Hamiltonian −Σ A_v − Σ B_p + h Σ perturbation, multiplet of 4.
SpectralReport spectrum(const TorusLattice& lat, const std::vector<PauliTerm>& perturbation, double h,
                        const SpectrumOptions& options = {});

struct ScalingPoint {
  int l1 = 0;
  int l2 = 0;
  std::size_t lattice_size = 0;  // |Λ| = number of qubits
  double h = 0.0;
  double splitting = 0.0;
  double gap = 0.0;
  double coupling_k = 0.0;
  double deviation_max = 0.0;  // KL deviation of weight-1 Paulis on the perturbed multiplet
};

struct ExponentialFit {
  int n = 0;              // log(splitting) ≈ a − α |Λ|^{1/n}
  double alpha = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the fit in log space
};

struct ScalingResult {
  std::vector<ScalingPoint> points;  // sorted by lattice size
  std::vector<ExponentialFit> fits;  // n = 1 and n = 2
  std::optional<ExponentialFit> best;
  bool degenerate = false;  // every splitting below the degenerate threshold
  std::vector<std::string> warnings;
};

struct ScalingOptions {
  SpectrumOptions spectrum{};
  /// Worker threads; 0 means the NSSLAB_THREADS environment variable or,
  /// when unset, the hardware concurrency.
  std::size_t threads = 0;
};

/// Runs spectrum at every size (duplicates dropped with a warning) and fits
/// the splitting. Throws InsufficientData for fewer than three distinct sizes
/// or fewer than three positive splittings in a non-degenerate run.
ScalingResult scaling_study(const std::vector<std::pair<int, int>>& sizes, double h, FieldKind kind,
                            const ScalingOptions& options = {});

/// Header `L1,L2,h,splitting,gap,coupling_k,deviation_max`, 17 significant digits.
void write_csv(std::ostream& os, const ScalingResult& result);

/// Worker count from NSSLAB_THREADS (≥ 1) or the hardware.
std::size_t configured_threads();

}  // namespace nss
