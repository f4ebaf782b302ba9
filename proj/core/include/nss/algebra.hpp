#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "nss/config.hpp"

namespace nss {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Error operators E_α acting on C^d.
struct ErrorSet {
  std::size_t dim = 0;
  std::vector<Matrix> generators;
  std::vector<std::string> labels;

  /// Throws InvalidArgument unless every generator is dim × dim and labels
  /// (when present) match the generators one to one.
  void validate() const;
};

/// Hilbert–Schmidt orthonormal basis of a *-closed operator space on C^d.
class MatrixAlgebra {
 public:
  MatrixAlgebra(std::size_t dim, std::vector<Matrix> basis, std::vector<Matrix> generators, bool closed);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return basis_.size(); }
  const std::vector<Matrix>& basis() const noexcept { return basis_; }
  /// Operators that generate the algebra (error generators and their
  /// adjoints, or the basis itself for a computed commutant).
  const std::vector<Matrix>& generators() const noexcept { return generators_; }
  bool closed() const noexcept { return closed_; }

  /// Coefficients ⟨B_k, m⟩ in the HS basis.
  Eigen::VectorXcd coefficients(const Matrix& m) const;
  /// Norm of m minus its projection onto the span.
  double residual(const Matrix& m) const;

 private:
  std::size_t dim_;
  std::vector<Matrix> basis_;
  std::vector<Matrix> generators_;
  bool closed_;
};

struct AlgebraOptions {
  Tolerances tol{};
  Limits limits{};
  std::uint64_t seed = kDefaultSeed;
};

/// Smallest *-algebra containing the identity, every generator and every
/// adjoint, found by growing the span under left multiplication by the
/// generators until a fixed point.
MatrixAlgebra close_algebra(const ErrorSet& errors, const AlgebraOptions& options = {});

/// {X : [X, B] = 0 for every element B}, as the null space of the stacked
/// commutator map. Hilbert dimension is limited by Limits::commutant_dim.
MatrixAlgebra commutant(const MatrixAlgebra& algebra, const AlgebraOptions& options = {});

/// Center Z = A ∩ A′, expressed as an HS-orthonormal basis inside A.
MatrixAlgebra center(const MatrixAlgebra& algebra, const AlgebraOptions& options = {});

/// One irreducible sector H_J ≅ C^{n_J} ⊗ C^{d_J}. Column i·d_J + c of the
/// isometry is the basis vector u_i ⊗ e_c, so every algebra element conjugates
/// to 1_{n_J} ⊗ M.
struct Sector {
  std::size_t label = 0;
  Matrix central_projector;
  std::size_t n = 0;  // noiseless factor (multiplicity of the irrep)
  std::size_t d = 0;  // irrep dimension
  Matrix isometry;    // dim × (n·d)
};

struct SectorDecomposition {
  std::size_t dim = 0;
  std::size_t algebra_dim = 0;
  std::vector<Sector> sectors;
  /// Largest distance of a computed dimension (trace of a projector) from the
  /// integer it was rounded to.
  double rounding_residual = 0.0;
  /// Largest ‖V_J† E V_J − 1 ⊗ M_E‖_F / max(1, ‖E‖_F) over generators and sectors.
  double block_residual = 0.0;

  std::size_t sum_nd() const;
  std::size_t sum_d2() const;
  std::size_t sum_n2() const;
};

/// Central decomposition of a closed algebra. Deterministic for a given seed.
/// Throws DegenerateSpectrum when a random central or compressed element has
/// eigenvalue clusters too close to separate.
SectorDecomposition decompose(const MatrixAlgebra& algebra, const AlgebraOptions& options = {});

struct NoiselessFactor {
  std::size_t sector = 0;
  std::size_t n = 0;
  std::size_t d = 0;
};

/// Sectors with n_J ≥ 2.
std::vector<NoiselessFactor> noiseless_subsystems(const SectorDecomposition& dec);

/// ‖V† E V − 1_n ⊗ M_E‖_F with M_E the normalized partial trace over the n factor.
double block_structure_residual(const Sector& sector, const Matrix& op);

/// Frobenius distance between the orthogonal projectors onto span(a) and span(b)
/// in operator space.
double span_distance(const MatrixAlgebra& a, const MatrixAlgebra& b);

/// Largest residual of B_i B_j and B_i† against the span, over all pairs.
/// O(size²) products; intended for checks on small algebras.
double pairwise_closure_residual(const MatrixAlgebra& algebra);

/// Largest |⟨B_i, B_j⟩ − δ_ij|.
double orthonormality_defect(const MatrixAlgebra& algebra);

// JSON documents. Complex numbers are [re, im] pairs; matrices are row-major
// nested arrays of such pairs.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ErrorSet& errors);
ErrorSet error_set_from_json(const nlohmann::json& doc);
/// Sector table (label, n, d, projector rank) plus, when include_matrices is
/// set, each isometry and central projector.
nlohmann::json to_json(const SectorDecomposition& dec, bool include_matrices = false);

}  // namespace nss
