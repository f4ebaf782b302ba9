#include "nss/statevec.hpp"

#include <cmath>

#include "nss/errors.hpp"
#include "nss/rng.hpp"

namespace nss {
namespace {

void require_dense(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw ResourceLimit("dense state vector on " + std::to_string(n) + " qubits exceeds the cap of " +
                        std::to_string(cap));
  }
}

Eigen::VectorXcd seeded_vector(std::size_t dim, std::uint64_t stream) {
  const CounterRng rng(0x7ab1e5ULL, stream);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    v[static_cast<Eigen::Index>(i)] = cplx(rng.symmetric(2 * i), rng.symmetric(2 * i + 1));
  }
  return v;
}

}  // namespace

void project_onto_stabilized(const StabilizerTableau& tableau, Eigen::VectorXcd& v) {
  Eigen::VectorXcd tmp(v.size());
  for (const auto& g : tableau.generators()) {
    apply(g, std::span<const cplx>(v.data(), static_cast<std::size_t>(v.size())),
          std::span<cplx>(tmp.data(), static_cast<std::size_t>(tmp.size())));
    v = 0.5 * (v + tmp);
  }
}

Eigen::VectorXcd apply(const PauliOp& p, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out(v.size());
  apply(p, std::span<const cplx>(v.data(), static_cast<std::size_t>(v.size())),
        std::span<cplx>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

void canonicalize_phase(Eigen::VectorXcd& v) {
  if (v.size() == 0) return;
  const double peak = v.cwiseAbs().maxCoeff();
  if (peak == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= peak - 1e-9) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      return;
    }
  }
}

Eigen::VectorXcd stabilizer_state(const StabilizerTableau& tableau, std::size_t max_qubits) {
  require_dense(tableau.num_qubits(), max_qubits);
  if (!tableau.is_complete()) throw InvalidArgument("stabilizer_state: tableau does not fix a unique state");
  const std::size_t dim = std::size_t{1} << tableau.num_qubits();
  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    Eigen::VectorXcd v = seeded_vector(dim, attempt);
    project_onto_stabilized(tableau, v);
    const double norm = v.norm();
    if (norm > 1e-6) {
      v /= norm;
      canonicalize_phase(v);
      return v;
    }
  }
  throw ConvergenceError("stabilizer_state: projection vanished for every seed vector", 0.0);
}

Eigen::MatrixXcd stabilized_subspace(const StabilizerTableau& tableau, std::size_t max_qubits) {
  require_dense(tableau.num_qubits(), max_qubits);
  const std::size_t n = tableau.num_qubits();
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t k = std::size_t{1} << (n - tableau.generators().size());
  // Project a few more random vectors than needed, then keep an orthonormal basis.
  const std::size_t probes = k + 4;
  Eigen::MatrixXcd block(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(probes));
  for (std::size_t j = 0; j < probes; ++j) {
    Eigen::VectorXcd v = seeded_vector(dim, 100 + j);
    project_onto_stabilized(tableau, v);
    block.col(static_cast<Eigen::Index>(j)) = v;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(block);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(block.rows(), static_cast<Eigen::Index>(k));
  return q;
}

Eigen::MatrixXcd stabilized_projector(const StabilizerTableau& tableau, std::size_t max_qubits) {
  const Eigen::MatrixXcd basis = stabilized_subspace(tableau, max_qubits);
  return basis * basis.adjoint();
}

}  // namespace nss
