#include "nss/lanczos.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "nss/errors.hpp"
#include "nss/rng.hpp"

namespace nss {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXd;

namespace {

constexpr std::size_t kMaxQubits = 30;

std::uint64_t low_word(std::span<const std::uint64_t> words) { return words.empty() ? 0 : words[0]; }

}  // namespace

PauliSum::PauliSum(std::size_t num_qubits) : n_(num_qubits) {
  if (num_qubits == 0 || num_qubits > kMaxQubits) {
    throw InvalidArgument("PauliSum: qubit count " + std::to_string(num_qubits) + " outside [1, " +
                          std::to_string(kMaxQubits) + "]");
  }
}

void PauliSum::add(const PauliOp& op, double coeff) {
  if (op.num_qubits() != n_) {
    throw InvalidArgument("PauliSum: term acts on " + std::to_string(op.num_qubits()) + " qubits, expected " +
                          std::to_string(n_));
  }
  if (!op.is_hermitian()) throw InvalidArgument("PauliSum: term " + op.str() + " is not Hermitian");
  if (!std::isfinite(coeff)) throw InvalidArgument("PauliSum: non-finite coefficient");
  terms_.push_back({op, coeff});
  dirty_ = true;
}

void PauliSum::add(const PauliSum& other, double scale) {
  for (const auto& t : other.terms_) add(t.op, scale * t.coeff);
}

void PauliSum::rebuild() const {
  const std::size_t dim = dimension();
  diagonal_.assign(dim, 0.0);
  groups_.clear();
  std::map<std::uint64_t, std::size_t> by_mask;
  std::vector<std::pair<std::uint64_t, double>> diag_terms;
  for (const auto& t : terms_) {
    const std::uint64_t x = low_word(t.op.x_words());
    const std::uint64_t z = low_word(t.op.z_words());
    const unsigned k = t.op.phase() + static_cast<unsigned>(std::popcount(x & z));
    const cplx c = t.coeff * phase_factor(k);
    if (x == 0) {
      // Hermitian with no X part: the phase is ±1.
      diag_terms.emplace_back(z, c.real());
      continue;
    }
    auto [it, inserted] = by_mask.try_emplace(x, groups_.size());
    if (inserted) groups_.push_back(Group{x, {}, {}});
    groups_[it->second].z.push_back(z);
    groups_[it->second].coeff.push_back(c);
  }
  for (std::size_t b = 0; b < dim; ++b) {
    double s = 0.0;
    for (const auto& [z, c] : diag_terms) s += (std::popcount(b & z) & 1) ? -c : c;
    diagonal_[b] = s;
  }
  dirty_ = false;
}

void PauliSum::apply(const cplx* in, cplx* out) const {
  if (dirty_) rebuild();
  const std::size_t dim = dimension();
  for (std::size_t b = 0; b < dim; ++b) out[b] = diagonal_[b] * in[b];
  for (const auto& g : groups_) {
    const std::size_t terms = g.z.size();
    for (std::size_t b = 0; b < dim; ++b) {
      cplx s = 0.0;
      for (std::size_t t = 0; t < terms; ++t) s += (std::popcount(b & g.z[t]) & 1) ? -g.coeff[t] : g.coeff[t];
      out[b ^ g.x] += s * in[b];
    }
  }
}

MatrixXcd PauliSum::apply(const MatrixXcd& block) const {
  if (static_cast<std::size_t>(block.rows()) != dimension()) {
    throw InvalidArgument("PauliSum::apply: vector length does not match 2^n");
  }
  MatrixXcd out(block.rows(), block.cols());
  for (Index j = 0; j < block.cols(); ++j) apply(block.col(j).data(), out.col(j).data());
  return out;
}

double PauliSum::norm_bound() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

MatrixXcd PauliSum::to_dense(std::size_t max_qubits) const {
  if (n_ > max_qubits) {
    throw ResourceLimit("PauliSum::to_dense: " + std::to_string(n_) + " qubits exceeds the dense cap of " +
                        std::to_string(max_qubits));
  }
  return apply(MatrixXcd::Identity(static_cast<Index>(dimension()), static_cast<Index>(dimension())));
}

namespace {

EigenResult dense_lowest(const PauliSum& h, std::size_t nev) {
  const MatrixXcd m = h.apply(MatrixXcd::Identity(static_cast<Index>(h.dimension()), static_cast<Index>(h.dimension())));
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
  EigenResult r;
  r.values = es.eigenvalues().head(static_cast<Index>(nev));
  r.vectors = es.eigenvectors().leftCols(static_cast<Index>(nev));
  r.applications = h.dimension();
  const MatrixXcd res = m * r.vectors - r.vectors * r.values.asDiagonal();
  r.max_residual = res.colwise().norm().maxCoeff();
  return r;
}

MatrixXcd random_block(Index rows, Index cols, const CounterRng& rng) {
  MatrixXcd x(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const auto c = static_cast<std::uint64_t>(2 * (j * rows + i));
      x(i, j) = cplx(rng.symmetric(c), rng.symmetric(c + 1));
    }
  }
  return x;
}

// Orthonormalizes the columns of w against basis (twice) and among
// themselves. Returns the upper-triangular factor; columns that collapse
// are replaced by fresh random directions with a zero diagonal entry.
MatrixXcd orthonormalize_block(Eigen::Ref<MatrixXcd> w, const Eigen::Ref<const MatrixXcd>& basis, double scale,
                               const CounterRng& rng, std::uint64_t& draw) {
  const Index b = w.cols();
  MatrixXcd r = MatrixXcd::Zero(b, b);
  for (Index j = 0; j < b; ++j) {
    auto col = w.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < j; ++i) {
        const cplx c = w.col(i).dot(col);
        r(i, j) += c;
        col -= c * w.col(i);
      }
    }
    double norm = col.norm();
    if (norm > 1e-10 * scale) {
      r(j, j) = norm;
      col /= norm;
      continue;
    }
    for (Index i = 0; i < j; ++i) r(i, j) = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
      col = random_block(w.rows(), 1, rng.split(draw++));
      for (int pass = 0; pass < 2; ++pass) {
        if (basis.cols() > 0) col -= basis * (basis.adjoint() * col);
        for (Index i = 0; i < j; ++i) col -= w.col(i) * w.col(i).dot(col);
      }
      norm = col.norm();
      if (norm > 1e-3) break;
    }
    if (norm <= 1e-3) throw ConvergenceError("lanczos: Krylov space exhausted", 0.0);
    col /= norm;
    r(j, j) = 0.0;
  }
  return r;
}

}  // namespace

EigenResult lowest_eigenpairs(const PauliSum& h, const LanczosOptions& options) {
  const std::size_t dim = h.dimension();
  const std::size_t nev = std::min(options.num_eigenpairs, dim);
  if (nev == 0) throw InvalidArgument("lowest_eigenpairs: no eigenpairs requested");
  std::size_t b = std::clamp<std::size_t>(options.block_size, 1, dim);
  if (dim <= 128) return dense_lowest(h, nev);

  const double vec_bytes = static_cast<double>(dim) * sizeof(cplx);
  const auto by_memory = static_cast<std::size_t>(static_cast<double>(options.memory_bytes) / vec_bytes);
  const std::size_t wanted = std::max(nev + 2 * b, options.basis_size > 0 ? options.basis_size : 12 * b);
  const std::size_t m_max = std::min({by_memory, dim, wanted});
  if (m_max < nev + 2 * b) {
    throw ResourceLimit("lowest_eigenpairs: a Krylov basis of " + std::to_string(nev + 2 * b) + " vectors of length " +
                        std::to_string(dim) + " exceeds the memory budget of " +
                        std::to_string(options.memory_bytes) + " bytes");
  }
  const std::size_t keep = std::min(nev + b, m_max - 2 * b);
  const double scale = std::max(h.norm_bound(), 1e-300);
  const CounterRng rng = CounterRng(options.seed, options.stream);
  std::uint64_t draw = 1;

  const Index m = static_cast<Index>(m_max);
  const Index bi = static_cast<Index>(b);
  MatrixXcd v(static_cast<Index>(dim), m);
  MatrixXcd t = MatrixXcd::Zero(m, m);
  v.leftCols(bi) = random_block(static_cast<Index>(dim), bi, rng.split(0));
  orthonormalize_block(v.leftCols(bi), v.leftCols(0), 1.0, rng, draw);
  Index block_start = 0;
  Index cur = bi;

  EigenResult result;
  double worst = 0.0;
  for (std::size_t restart = 0; restart <= options.max_restarts; ++restart) {
    while (cur + bi <= m) {
      MatrixXcd w = h.apply(MatrixXcd(v.middleCols(block_start, bi)));
      result.applications += b;
      auto basis = v.leftCols(cur);
      const Eigen::RowVectorXd before = w.colwise().norm();
      MatrixXcd c = basis.adjoint() * w;
      w.noalias() -= basis * c;
      // Second pass only when cancellation was severe (DGKS criterion).
      if ((w.colwise().norm().array() < 0.7 * before.array()).any()) {
        const MatrixXcd c2 = basis.adjoint() * w;
        w.noalias() -= basis * c2;
        c += c2;
      }
      t.block(0, block_start, cur, bi) = c;
      t.block(block_start, 0, bi, cur) = c.adjoint();
      const MatrixXcd r = orthonormalize_block(w, basis, scale, rng, draw);
      v.middleCols(cur, bi) = w;
      t.block(cur, block_start, bi, bi) = r;
      t.block(block_start, cur, bi, bi) = r.adjoint();
      block_start = cur;
      cur += bi;
    }
    // H V_k = V_k T_k + V_next · B with V_k the first block_start columns.
    const Index k = block_start;
    const MatrixXcd tk = t.topLeftCorner(k, k);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(tk);
    const MatrixXcd coupling = t.block(k, 0, bi, k);
    const MatrixXcd resid = coupling * es.eigenvectors().leftCols(static_cast<Index>(nev));
    worst = resid.colwise().norm().maxCoeff();
    if (worst < options.tol) {
      result.values = es.eigenvalues().head(static_cast<Index>(nev));
      result.vectors = v.leftCols(k) * es.eigenvectors().leftCols(static_cast<Index>(nev));
      const MatrixXcd hv = h.apply(result.vectors);
      result.applications += nev;
      result.max_residual = (hv - result.vectors * result.values.asDiagonal()).colwise().norm().maxCoeff();
      result.restarts = restart;
      if (result.max_residual < options.tol) return result;
      worst = result.max_residual;
    }
    if (restart == options.max_restarts) break;
    // Thick restart: keep the lowest Ritz vectors and the unexpanded block.
    const Index kk = static_cast<Index>(keep);
    const MatrixXcd y = es.eigenvectors().leftCols(kk);
    MatrixXcd kept = v.leftCols(k) * y;
    const MatrixXcd next = v.middleCols(k, bi);
    v.leftCols(kk) = kept;
    v.middleCols(kk, bi) = next;
    t.setZero();
    for (Index i = 0; i < kk; ++i) t(i, i) = es.eigenvalues()[i];
    const MatrixXcd arrow = coupling * y;
    t.block(kk, 0, bi, kk) = arrow;
    t.block(0, kk, kk, bi) = arrow.adjoint();
    block_start = kk;
    cur = kk + bi;
  }
  throw ConvergenceError("lowest_eigenpairs: Ritz residual " + std::to_string(worst) + " after " +
                             std::to_string(options.max_restarts) + " restarts",
                         worst);
}

}  // namespace nss
