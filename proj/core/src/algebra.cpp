#include "nss/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/Sparse>

#include "nss/errors.hpp"
#include "nss/rng.hpp"

namespace nss {
namespace {

using SparseMatrix = Eigen::SparseMatrix<cplx>;
using Eigen::Index;

// Random-stream identifiers; see decompose().
constexpr std::uint64_t kCenterStream = 1;
constexpr std::uint64_t kSectorStream = 2;
constexpr std::uint64_t kIntertwinerStream = 3;

Eigen::Map<const Eigen::VectorXcd> as_vector(const Matrix& m) {
  return {m.data(), m.size()};
}

cplx hs_inner(const Matrix& a, const Matrix& b) { return as_vector(a).dot(as_vector(b)); }

// Generator wrapper: products g·B run through a sparse kernel when g is
// mostly zeros (Pauli strings and their sums are).
struct Multiplier {
  Matrix dense;
  SparseMatrix sparse;
  bool use_sparse = false;

  explicit Multiplier(const Matrix& g) : dense(g) {
    const Index nnz = (g.array() != cplx(0.0, 0.0)).count();
    if (nnz * 4 < g.size()) {
      sparse = g.sparseView();
      use_sparse = true;
    }
  }
  Matrix times(const Matrix& b) const {
    if (use_sparse) return sparse * b;
    return dense * b;
  }
  Matrix times_right(const Matrix& b) const {
    if (use_sparse) return b * sparse;
    return b * dense;
  }
};

std::vector<Matrix> generators_with_adjoints(const std::vector<Matrix>& gens) {
  std::vector<Matrix> out;
  for (const auto& g : gens) {
    const double norm = g.norm();
    if (norm == 0.0) continue;
    out.push_back(g);
    if ((g - g.adjoint()).norm() > 1e-14 * norm) out.push_back(g.adjoint());
  }
  return out;
}

// Orthonormal basis stored as columns of a d² × k matrix, grown by blocked
// classical Gram–Schmidt with one reorthogonalization pass.
class SpanBuilder {
 public:
  SpanBuilder(Index vec_len, double growth_tol, std::size_t byte_budget)
      : len_(vec_len), tol_(growth_tol), budget_(byte_budget) {}

  Index size() const { return k_; }
  const Matrix& storage() const { return q_; }

  /// Orthogonalizes each column of block against the span (and against columns
  /// admitted earlier from the same block). Returns the indices of admitted
  /// columns; largest_admitted_residual() reports the smallest relative norm
  /// that still made it in.
  std::vector<Index> absorb(Matrix block) {
    std::vector<Index> added;
    Eigen::VectorXd norms = block.colwise().norm().transpose();
    if (k_ > 0) {
      // Candidates already in the span are dropped after one pass; a second
      // pass can only shrink their residual further.
      auto q = q_.leftCols(k_);
      Matrix coeff = q.adjoint() * block;
      block.noalias() -= q * coeff;
      std::vector<Index> keep;
      for (Index j = 0; j < block.cols(); ++j) {
        const double rel = norms[j] > 0.0 ? block.col(j).norm() / norms[j] : 0.0;
        if (rel > tol_) {
          keep.push_back(j);
        } else {
          max_rejected_residual_ = std::max(max_rejected_residual_, rel);
        }
      }
      Matrix survivors(block.rows(), static_cast<Index>(keep.size()));
      Eigen::VectorXd kept_norms(static_cast<Index>(keep.size()));
      for (std::size_t t = 0; t < keep.size(); ++t) {
        survivors.col(static_cast<Index>(t)) = block.col(keep[t]);
        kept_norms[static_cast<Index>(t)] = norms[keep[t]];
      }
      if (!keep.empty()) {
        Matrix coeff2 = q.adjoint() * survivors;
        survivors.noalias() -= q * coeff2;
      }
      block = std::move(survivors);
      norms = std::move(kept_norms);
    }
    const Index first_new = k_;
    for (Index j = 0; j < block.cols(); ++j) {
      if (norms[j] == 0.0) continue;
      auto col = block.col(j);
      for (int pass = 0; pass < 2; ++pass) {
        for (Index t = first_new; t < k_; ++t) col -= q_.col(t) * q_.col(t).dot(col);
      }
      const double rel = col.norm() / norms[j];
      if (rel > tol_) {
        push(col / col.norm());
        added.push_back(k_ - 1);
        last_added_residual_ = rel;
      } else {
        max_rejected_residual_ = std::max(max_rejected_residual_, rel);
      }
    }
    return added;
  }

  double last_added_residual() const { return last_added_residual_; }
  double max_rejected_residual() const { return max_rejected_residual_; }

 private:
  void push(const Eigen::VectorXcd& v) {
    if (k_ == q_.cols()) {
      const Index cap = std::max<Index>(8, 2 * q_.cols());
      const double bytes = static_cast<double>(cap) * static_cast<double>(len_) * sizeof(cplx);
      if (bytes > static_cast<double>(budget_)) {
        if (static_cast<double>(k_ + 1) * static_cast<double>(len_) * sizeof(cplx) > static_cast<double>(budget_)) {
          throw ResourceLimit("algebra basis exceeds the storage budget of " + std::to_string(budget_) + " bytes");
        }
        q_.conservativeResize(len_, k_ + 1);
      } else {
        q_.conservativeResize(len_, cap);
      }
    }
    q_.col(k_) = v;
    ++k_;
  }

  Index len_;
  double tol_;
  std::size_t budget_;
  Matrix q_;
  Index k_ = 0;
  double last_added_residual_ = 0.0;
  double max_rejected_residual_ = 0.0;
};

std::vector<Matrix> unstack(const Matrix& q, Index k, Index dim) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(k));
  for (Index j = 0; j < k; ++j) out.push_back(Eigen::Map<const Matrix>(q.col(j).data(), dim, dim));
  return out;
}

Matrix stack(const std::vector<Matrix>& mats) {
  if (mats.empty()) return {};
  const Index len = mats.front().size();
  Matrix q(len, static_cast<Index>(mats.size()));
  for (std::size_t j = 0; j < mats.size(); ++j) q.col(static_cast<Index>(j)) = as_vector(mats[j]);
  return q;
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }
Matrix antihermitian_part_as_hermitian(const Matrix& m) { return (m - m.adjoint()) * cplx(0.0, -0.5); }

/// Random Hermitian element of span(mats), drawn from rng.
Matrix random_hermitian(const std::vector<Matrix>& mats, const CounterRng& rng) {
  Matrix h = Matrix::Zero(mats.front().rows(), mats.front().cols());
  for (std::size_t j = 0; j < mats.size(); ++j) {
    h += rng.symmetric(2 * j) * hermitian_part(mats[j]);
    h += rng.symmetric(2 * j + 1) * antihermitian_part_as_hermitian(mats[j]);
  }
  return h;
}

Matrix random_element(const std::vector<Matrix>& mats, const CounterRng& rng) {
  Matrix a = Matrix::Zero(mats.front().rows(), mats.front().cols());
  for (std::size_t j = 0; j < mats.size(); ++j) a += cplx(rng.symmetric(2 * j), rng.symmetric(2 * j + 1)) * mats[j];
  return a;
}

struct Cluster {
  Index begin;
  Index end;  // exclusive
  Index size() const { return end - begin; }
};

/// Splits ascending eigenvalues into clusters. Throws DegenerateSpectrum when
/// two neighbouring clusters are separated by less than gap_ratio · merge.
std::vector<Cluster> cluster_eigenvalues(const Eigen::VectorXd& ev, const Tolerances& tol, const char* what) {
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  const double merge = tol.merge * scale;
  std::vector<Cluster> out;
  Index start = 0;
  for (Index i = 1; i <= ev.size(); ++i) {
    if (i == ev.size() || ev[i] - ev[i - 1] > merge) {
      out.push_back({start, i});
      if (i < ev.size() && ev[i] - ev[i - 1] < tol.gap_ratio * merge) {
        throw DegenerateSpectrum(std::string(what) +
                                 ": eigenvalue clusters are too close to separate; rerun with a different seed");
      }
      start = i;
    }
  }
  return out;
}

/// Orthonormal basis (as coefficient combinations) of span(mats): returns
/// the matrices F_i = Σ_k u_ik mats_k / sqrt(λ_i) for the significant Gram eigenpairs.
std::vector<Matrix> orthonormal_span(const std::vector<Matrix>& mats, double rel_tol) {
  const Index k = static_cast<Index>(mats.size());
  Matrix gram(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = a; b < k; ++b) {
      gram(a, b) = hs_inner(mats[static_cast<std::size_t>(a)], mats[static_cast<std::size_t>(b)]);
      gram(b, a) = std::conj(gram(a, b));
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  std::vector<Matrix> out;
  for (Index i = k - 1; i >= 0; --i) {
    const double lam = es.eigenvalues()[i];
    if (lam <= rel_tol * top || lam <= 0.0) break;
    Matrix f = Matrix::Zero(mats.front().rows(), mats.front().cols());
    for (Index t = 0; t < k; ++t) f += es.eigenvectors()(t, i) * mats[static_cast<std::size_t>(t)];
    out.push_back(f / std::sqrt(lam));
  }
  return out;
}

}  // namespace

void ErrorSet::validate() const {
  if (dim == 0) throw InvalidArgument("error set dimension must be positive");
  if (generators.empty()) throw InvalidArgument("error set has no generators");
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const auto& g = generators[i];
    if (static_cast<std::size_t>(g.rows()) != dim || static_cast<std::size_t>(g.cols()) != dim) {
      throw InvalidArgument("error generator " + std::to_string(i) + " is " + std::to_string(g.rows()) + "x" +
                            std::to_string(g.cols()) + ", expected " + std::to_string(dim) + "x" +
                            std::to_string(dim));
    }
    if (!g.allFinite()) throw InvalidArgument("error generator " + std::to_string(i) + " has non-finite entries");
  }
  if (!labels.empty() && labels.size() != generators.size()) {
    throw InvalidArgument("error set has " + std::to_string(labels.size()) + " labels for " +
                          std::to_string(generators.size()) + " generators");
  }
}

MatrixAlgebra::MatrixAlgebra(std::size_t dim, std::vector<Matrix> basis, std::vector<Matrix> generators, bool closed)
    : dim_(dim), basis_(std::move(basis)), generators_(std::move(generators)), closed_(closed) {}

Eigen::VectorXcd MatrixAlgebra::coefficients(const Matrix& m) const {
  Eigen::VectorXcd c(static_cast<Index>(basis_.size()));
  for (std::size_t k = 0; k < basis_.size(); ++k) c[static_cast<Index>(k)] = hs_inner(basis_[k], m);
  return c;
}

double MatrixAlgebra::residual(const Matrix& m) const {
  Matrix r = m;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis_) r -= hs_inner(b, r) * b;
  }
  return r.norm();
}

MatrixAlgebra close_algebra(const ErrorSet& errors, const AlgebraOptions& options) {
  errors.validate();
  const std::size_t d = errors.dim;
  if (d > options.limits.algebra_dim) {
    throw ResourceLimit("close_algebra: dimension " + std::to_string(d) + " exceeds the cap of " +
                        std::to_string(options.limits.algebra_dim));
  }
  const Index dim = static_cast<Index>(d);
  const std::vector<Matrix> gens = generators_with_adjoints(errors.generators);
  std::vector<Multiplier> mults;
  mults.reserve(gens.size());
  for (const auto& g : gens) mults.emplace_back(g);

  SpanBuilder span(dim * dim, options.tol.closure_growth, options.limits.algebra_bytes);
  {
    Matrix id = Matrix::Identity(dim, dim);
    span.absorb(Eigen::Map<const Matrix>(id.data(), dim * dim, 1));
  }
  // Every word in the generators is g·(shorter word), so closing the span
  // under left multiplication from {1} reaches the whole algebra.
  std::vector<Index> frontier{0};
  std::size_t iteration = 0;
  constexpr Index kChunk = 32;
  while (!frontier.empty()) {
    if (iteration >= options.limits.closure_iterations) {
      throw ConvergenceError("close_algebra: no fixed point after " + std::to_string(iteration) + " iterations",
                             span.last_added_residual());
    }
    std::vector<Index> next;
    Matrix block(dim * dim, kChunk);
    Index fill = 0;
    auto flush = [&] {
      if (fill == 0) return;
      auto added = span.absorb(block.leftCols(fill));
      next.insert(next.end(), added.begin(), added.end());
      fill = 0;
    };
    for (const auto& m : mults) {
      for (Index f : frontier) {
        const Matrix b = Eigen::Map<const Matrix>(span.storage().col(f).data(), dim, dim);
        const Matrix prod = m.times(b);
        block.col(fill++) = Eigen::Map<const Eigen::VectorXcd>(prod.data(), prod.size());
        if (fill == kChunk) flush();
      }
    }
    flush();
    frontier = std::move(next);
    ++iteration;
  }
  const bool closed = span.max_rejected_residual() <= options.tol.closure_check;
  return MatrixAlgebra(d, unstack(span.storage(), span.size(), dim), gens, closed);
}

MatrixAlgebra commutant(const MatrixAlgebra& algebra, const AlgebraOptions& options) {
  if (!algebra.closed()) throw InvalidArgument("commutant: algebra is not closed");
  const std::size_t d = algebra.dim();
  if (d > options.limits.commutant_dim) {
    throw ResourceLimit("commutant: dimension " + std::to_string(d) + " exceeds the null-space cap of " +
                        std::to_string(options.limits.commutant_dim));
  }
  const Index dim = static_cast<Index>(d);
  const Index n2 = dim * dim;
  const Matrix id = Matrix::Identity(dim, dim);
  // vec(gX − Xg) = (I ⊗ g − gᵀ ⊗ I) vec(X) for column-major vec.
  Matrix gram = Matrix::Zero(n2, n2);
  for (const auto& g : algebra.generators()) {
    Matrix lmap(n2, n2);
    for (Index a = 0; a < dim; ++a) {
      for (Index b = 0; b < dim; ++b) {
        lmap.block(a * dim, b * dim, dim, dim) = (a == b ? g : Matrix::Zero(dim, dim)) - g(b, a) * id;
      }
    }
    gram.noalias() += lmap.adjoint() * lmap;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const double top = std::max(es.eigenvalues().maxCoeff(), 1.0);
  std::vector<Matrix> basis;
  for (Index i = 0; i < n2; ++i) {
    if (es.eigenvalues()[i] > options.tol.null_space * top) break;
    basis.push_back(Eigen::Map<const Matrix>(es.eigenvectors().col(i).data(), dim, dim));
  }
  MatrixAlgebra out(d, basis, basis, true);
  if (basis.size() <= 64) {
    const double res = pairwise_closure_residual(out);
    return MatrixAlgebra(d, basis, basis, res <= options.tol.closure_check);
  }
  return out;
}

MatrixAlgebra center(const MatrixAlgebra& algebra, const AlgebraOptions& options) {
  if (!algebra.closed()) throw InvalidArgument("center: algebra is not closed");
  const std::vector<Matrix>& basis = algebra.basis();
  const Index k = static_cast<Index>(basis.size());
  const Index dim = static_cast<Index>(algebra.dim());
  // Null space of Σ_g M_g† M_g with column j of M_g = vec([B_j, g]).
  Matrix gram = Matrix::Zero(k, k);
  Matrix stacked(dim * dim, k);
  for (const auto& g : algebra.generators()) {
    const Multiplier m(g);
    for (Index j = 0; j < k; ++j) {
      const Matrix& b = basis[static_cast<std::size_t>(j)];
      Matrix comm = m.times_right(b) - m.times(b);
      stacked.col(j) = Eigen::Map<const Eigen::VectorXcd>(comm.data(), comm.size());
    }
    gram.selfadjointView<Eigen::Lower>().rankUpdate(stacked.adjoint());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);  // reads the lower triangle
  const double top = std::max(es.eigenvalues().maxCoeff(), 1.0);
  std::vector<Matrix> zbasis;
  for (Index i = 0; i < k; ++i) {
    if (es.eigenvalues()[i] > options.tol.null_space * top) break;
    Matrix z = Matrix::Zero(dim, dim);
    for (Index t = 0; t < k; ++t) z += es.eigenvectors()(t, i) * basis[static_cast<std::size_t>(t)];
    zbasis.push_back(std::move(z));
  }
  return MatrixAlgebra(algebra.dim(), zbasis, zbasis, true);
}

SectorDecomposition decompose(const MatrixAlgebra& algebra, const AlgebraOptions& options) {
  if (!algebra.closed()) throw InvalidArgument("decompose: algebra is not closed");
  const Index dim = static_cast<Index>(algebra.dim());
  const Tolerances& tol = options.tol;
  const CounterRng root(options.seed, 0);

  const MatrixAlgebra z = center(algebra, options);
  if (z.size() == 0) throw ConvergenceError("decompose: center is empty (identity missing from the algebra)", 1.0);

  // Central projectors from the eigenspaces of a random Hermitian central element.
  const Matrix zh = random_hermitian(z.basis(), root.split(kCenterStream));
  Eigen::SelfAdjointEigenSolver<Matrix> zes(zh);
  const auto clusters = cluster_eigenvalues(zes.eigenvalues(), tol, "decompose (center)");
  if (clusters.size() != z.size()) {
    throw DegenerateSpectrum("decompose: random central element has " + std::to_string(clusters.size()) +
                             " eigenvalue clusters for a " + std::to_string(z.size()) +
                             "-dimensional center; rerun with a different seed");
  }

  SectorDecomposition dec;
  dec.dim = algebra.dim();
  dec.algebra_dim = algebra.size();
  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    const Cluster& cl = clusters[ci];
    const Matrix w = zes.eigenvectors().middleCols(cl.begin, cl.size());
    const Index r = cl.size();

    std::vector<Matrix> compressed;
    compressed.reserve(algebra.size());
    for (const auto& b : algebra.basis()) compressed.push_back(w.adjoint() * (b * w));
    const std::vector<Matrix> local = orthonormal_span(compressed, tol.null_space);
    const std::size_t local_dim = local.size();
    const std::size_t dj = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(local_dim))));
    if (dj == 0 || dj * dj != local_dim || static_cast<std::size_t>(r) % dj != 0) {
      throw DegenerateSpectrum("decompose: compressed algebra of dimension " + std::to_string(local_dim) +
                               " on a " + std::to_string(r) +
                               "-dimensional sector is not a full matrix block; rerun with a different seed");
    }
    const std::size_t nj = static_cast<std::size_t>(r) / dj;

    Sector sector;
    sector.n = nj;
    sector.d = dj;
    sector.central_projector = w * w.adjoint();
    dec.rounding_residual =
        std::max(dec.rounding_residual, std::abs(sector.central_projector.trace().real() - static_cast<double>(r)));

    if (dj == 1) {
      sector.isometry = w;
    } else {
      const CounterRng srng = root.split(kSectorStream).split(ci);
      const Matrix rh = random_hermitian(local, srng);
      Eigen::SelfAdjointEigenSolver<Matrix> res(rh);
      const auto sub = cluster_eigenvalues(res.eigenvalues(), tol, "decompose (sector)");
      bool pattern_ok = sub.size() == dj;
      for (const auto& s : sub) pattern_ok = pattern_ok && static_cast<std::size_t>(s.size()) == nj;
      if (!pattern_ok) {
        throw DegenerateSpectrum("decompose: random element of a sector does not split into " + std::to_string(dj) +
                                 " blocks of size " + std::to_string(nj) + "; rerun with a different seed");
      }
      const Matrix e1 = res.eigenvectors().middleCols(sub[0].begin, sub[0].size());
      const Matrix a = random_element(local, root.split(kIntertwinerStream).split(ci));
      Matrix mix(r, static_cast<Index>(nj * dj));
      for (std::size_t c = 0; c < dj; ++c) {
        Matrix kc;
        if (c == 0) {
          kc = e1;
        } else {
          const Matrix ec = res.eigenvectors().middleCols(sub[c].begin, sub[c].size());
          const Matrix y = ec * (ec.adjoint() * (a * e1));
          Eigen::JacobiSVD<Matrix> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
          const auto& sv = svd.singularValues();
          if (sv.minCoeff() < 1e-6 * std::max(sv.maxCoeff(), 1e-300) || sv.maxCoeff() < 1e-12) {
            throw DegenerateSpectrum("decompose: intertwiner is singular; rerun with a different seed");
          }
          kc = svd.matrixU() * svd.matrixV().adjoint();
        }
        for (std::size_t i = 0; i < nj; ++i) mix.col(static_cast<Index>(i * dj + c)) = kc.col(static_cast<Index>(i));
      }
      sector.isometry = w * mix;
    }
    for (const auto& g : algebra.generators()) {
      const double scale = std::max(1.0, g.norm());
      dec.block_residual = std::max(dec.block_residual, block_structure_residual(sector, g) / scale);
    }
    dec.sectors.push_back(std::move(sector));
  }

  // Deterministic ordering: larger noiseless factor first, then larger
  // irrep, then by the first basis state the projector touches.
  auto first_support = [](const Sector& s) {
    const Eigen::VectorXd diag = s.central_projector.diagonal().real();
    for (Index i = 0; i < diag.size(); ++i) {
      if (diag[i] > 1e-6) return i;
    }
    return diag.size();
  };
  std::stable_sort(dec.sectors.begin(), dec.sectors.end(), [&](const Sector& a, const Sector& b) {
    if (a.n != b.n) return a.n > b.n;
    if (a.d != b.d) return a.d > b.d;
    return first_support(a) < first_support(b);
  });
  for (std::size_t i = 0; i < dec.sectors.size(); ++i) dec.sectors[i].label = i;
  (void)dim;
  return dec;
}

std::size_t SectorDecomposition::sum_nd() const {
  std::size_t s = 0;
  for (const auto& x : sectors) s += x.n * x.d;
  return s;
}

std::size_t SectorDecomposition::sum_d2() const {
  std::size_t s = 0;
  for (const auto& x : sectors) s += x.d * x.d;
  return s;
}

std::size_t SectorDecomposition::sum_n2() const {
  std::size_t s = 0;
  for (const auto& x : sectors) s += x.n * x.n;
  return s;
}

std::vector<NoiselessFactor> noiseless_subsystems(const SectorDecomposition& dec) {
  std::vector<NoiselessFactor> out;
  for (const auto& s : dec.sectors) {
    if (s.n >= 2) out.push_back({s.label, s.n, s.d});
  }
  return out;
}

double block_structure_residual(const Sector& sector, const Matrix& op) {
  const Matrix m = sector.isometry.adjoint() * (op * sector.isometry);
  const Index n = static_cast<Index>(sector.n);
  const Index d = static_cast<Index>(sector.d);
  Matrix avg = Matrix::Zero(d, d);
  for (Index i = 0; i < n; ++i) avg += m.block(i * d, i * d, d, d);
  avg /= static_cast<double>(n);
  Matrix expected = Matrix::Zero(n * d, n * d);
  for (Index i = 0; i < n; ++i) expected.block(i * d, i * d, d, d) = avg;
  return (m - expected).norm();
}

double span_distance(const MatrixAlgebra& a, const MatrixAlgebra& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("span_distance: algebras act on different spaces");
  if (a.size() == 0 || b.size() == 0) return std::sqrt(static_cast<double>(a.size() + b.size()));
  const Matrix overlap = stack(a.basis()).adjoint() * stack(b.basis());
  const double cross = overlap.squaredNorm();
  const double sq = static_cast<double>(a.size() + b.size()) - 2.0 * cross;
  return std::sqrt(std::max(sq, 0.0));
}

double pairwise_closure_residual(const MatrixAlgebra& algebra) {
  double worst = 0.0;
  const auto& basis = algebra.basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    worst = std::max(worst, algebra.residual(basis[i].adjoint()));
    for (std::size_t j = 0; j < basis.size(); ++j) {
      worst = std::max(worst, algebra.residual(basis[i] * basis[j]));
    }
  }
  if (!basis.empty()) worst = std::max(worst, algebra.residual(Matrix::Identity(basis[0].rows(), basis[0].cols())));
  return worst;
}

double orthonormality_defect(const MatrixAlgebra& algebra) {
  if (algebra.size() == 0) return 0.0;
  const Matrix q = stack(algebra.basis());
  const Matrix g = q.adjoint() * q;
  return (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

}  // namespace nss
