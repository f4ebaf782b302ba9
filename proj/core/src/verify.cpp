#include "nss/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <set>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "nss/errors.hpp"
#include "nss/statevec.hpp"

namespace nss {

using Eigen::Index;

namespace {

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

void finish(KLReport& report) {
  report.max_deviation = 0.0;
  for (const auto& e : report.entries) report.max_deviation = std::max(report.max_deviation, e.deviation);
}

std::string label_for(const std::vector<std::string>& labels, std::size_t i, const std::string& fallback) {
  return i < labels.size() ? labels[i] : fallback;
}

Matrix apply_columns(const PauliOp& p, const Matrix& w) {
  Matrix out(w.rows(), w.cols());
  for (Index j = 0; j < w.cols(); ++j) {
    nss::apply(p, std::span<const cplx>(w.col(j).data(), static_cast<std::size_t>(w.rows())),
          std::span<cplx>(out.col(j).data(), static_cast<std::size_t>(w.rows())));
  }
  return out;
}

}  // namespace

std::string to_string(KLVerdict v) {
  switch (v) {
    case KLVerdict::InStabilizer: return "stabilizer";
    case KLVerdict::Detectable: return "detectable";
    case KLVerdict::Logical: return "logical";
    case KLVerdict::Numerical: return "numerical";
  }
  return "?";
}

std::optional<std::size_t> KLReport::worst() const {
  if (entries.empty()) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].deviation > entries[best].deviation) best = i;
  }
  return best;
}

KLReport kl_check_stabilizer(const TorusLattice& lat, const std::vector<PauliOp>& errors,
                             const std::vector<std::string>& labels) {
  const std::size_t n = lat.num_qubits();
  const StabilizerTableau code = code_space_tableau(lat);
  const std::vector<PauliOp> checks = lat.checks();
  KLReport report;
  report.entries.reserve(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const PauliOp& x = errors[i];
    if (x.num_qubits() != n) {
      throw InvalidArgument("kl_check_stabilizer: error " + std::to_string(i) + " acts on " +
                            std::to_string(x.num_qubits()) + " qubits, lattice has " + std::to_string(n));
    }
    KLEntry e;
    e.label = label_for(labels, i, x.str());
    const bool detectable =
        std::any_of(checks.begin(), checks.end(), [&](const PauliOp& c) { return !commutes(c, x); });
    if (detectable) {
      e.verdict = KLVerdict::Detectable;
    } else if (auto k = code.group_phase(x)) {
      e.verdict = KLVerdict::InStabilizer;
      e.c = phase_factor(*k);
    } else {
      e.verdict = KLVerdict::Logical;
      e.deviation = 1.0;
    }
    report.entries.push_back(std::move(e));
  }
  finish(report);
  return report;
}

KLReport kl_check_dense(const Matrix& projector, const ErrorSet& errors, const Tolerances& tol) {
  errors.validate();
  const Index d = projector.rows();
  if (projector.cols() != d || static_cast<std::size_t>(d) != errors.dim) {
    throw InvalidArgument("kl_check_dense: projector is " + std::to_string(projector.rows()) + "x" +
                          std::to_string(projector.cols()) + ", errors act on dimension " +
                          std::to_string(errors.dim));
  }
  const double herm = (projector - projector.adjoint()).norm();
  const double idem = (projector * projector - projector).norm();
  if (herm > tol.projector || idem > tol.projector * std::max(1.0, projector.norm())) {
    throw InvalidArgument("kl_check_dense: not an orthogonal projector (hermiticity defect " + std::to_string(herm) +
                          ", idempotency defect " + std::to_string(idem) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(projector);
  std::vector<Index> cols;
  for (Index i = 0; i < d; ++i) {
    if (es.eigenvalues()[i] > 0.5) cols.push_back(i);
  }
  if (cols.empty()) throw InvalidArgument("kl_check_dense: projector is zero");
  Matrix w(d, static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) w.col(static_cast<Index>(j)) = es.eigenvectors().col(cols[j]);
  const auto r = static_cast<double>(cols.size());

  KLReport report;
  for (std::size_t i = 0; i < errors.generators.size(); ++i) {
    const Matrix m = w.adjoint() * errors.generators[i] * w;
    KLEntry e;
    e.label = label_for(errors.labels, i, "E" + std::to_string(i));
    e.c = m.trace() / r;
    e.deviation = operator_norm(m - e.c * Matrix::Identity(m.rows(), m.cols()));
    report.entries.push_back(std::move(e));
  }
  finish(report);
  return report;
}

KLReport kl_check_isometry(const Matrix& code_basis, const std::vector<PauliOp>& errors,
                           const std::vector<std::string>& labels) {
  const Index r = code_basis.cols();
  if (r == 0) throw InvalidArgument("kl_check_isometry: empty code basis");
  KLReport report;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const PauliOp& x = errors[i];
    if ((Index{1} << x.num_qubits()) != code_basis.rows()) {
      throw InvalidArgument("kl_check_isometry: error " + std::to_string(i) + " does not match the state dimension");
    }
    const Matrix m = code_basis.adjoint() * apply_columns(x, code_basis);
    KLEntry e;
    e.label = label_for(labels, i, x.str());
    e.c = m.trace() / static_cast<double>(r);
    e.deviation = operator_norm(m - e.c * Matrix::Identity(r, r));
    report.entries.push_back(std::move(e));
  }
  finish(report);
  return report;
}

std::vector<PauliOp> local_sector_generators(const TorusLattice& lat) {
  const std::vector<PauliOp> loops = sector_loops(lat, LoopBasis::Z);
  std::vector<PauliOp> out;
  for (auto& p : paulis_up_to_weight(lat.num_qubits(), 2)) {
    if (std::all_of(loops.begin(), loops.end(), [&](const PauliOp& l) { return commutes(l, p); })) {
      out.push_back(std::move(p));
    }
  }
  return out;
}

SectorOrbitReport sector_orbits(const TorusLattice& lat, const std::optional<std::vector<PauliOp>>& generators,
                                const Limits& limits) {
  const std::size_t n = lat.num_qubits();
  if (n > limits.dense_qubits) {
    throw ResourceLimit("sector_orbits: " + std::to_string(n) + " qubits exceeds the dense cap of " +
                        std::to_string(limits.dense_qubits));
  }
  const std::vector<PauliOp> gens = generators ? *generators : local_sector_generators(lat);
  for (const auto& g : gens) {
    if (g.num_qubits() != n) throw InvalidArgument("sector_orbits: generator size does not match the lattice");
  }
  const Index dim = Index{1} << n;
  SectorOrbitReport report;
  report.num_generators = gens.size();
  for (int j1 : {1, -1}) {
    for (int j2 : {1, -1}) {
      SectorLabel label{{j1, j2}};
      const Eigen::VectorXcd psi = stabilizer_state(code_state_tableau(lat, label, LoopBasis::Z), limits.dense_qubits);
      Matrix basis(dim, dim);
      basis.col(0) = psi;
      Index size = 1;
      std::vector<Index> frontier{0};
      while (!frontier.empty()) {
        std::vector<Index> next;
        for (Index f : frontier) {
          for (const auto& g : gens) {
            Eigen::VectorXcd v = nss::apply(g, Eigen::VectorXcd(basis.col(f)));
            for (int pass = 0; pass < 2; ++pass) v -= basis.leftCols(size) * (basis.leftCols(size).adjoint() * v);
            const double norm = v.norm();
            if (norm > 1e-8 && size < dim) {
              basis.col(size) = v / norm;
              next.push_back(size++);
            }
          }
        }
        frontier = std::move(next);
      }
      report.orbits.push_back({label, basis.leftCols(size)});
      report.total_dim += static_cast<std::size_t>(size);
    }
  }
  for (std::size_t a = 0; a < report.orbits.size(); ++a) {
    for (std::size_t b = a + 1; b < report.orbits.size(); ++b) {
      report.max_overlap = std::max(
          report.max_overlap, operator_norm(report.orbits[a].basis.adjoint() * report.orbits[b].basis));
    }
  }
  report.spans = report.total_dim == static_cast<std::size_t>(dim);
  return report;
}

PauliSum toric_hamiltonian(const TorusLattice& lat) {
  PauliSum h(lat.num_qubits());
  for (const auto& s : lat.stars()) h.add(s, -1.0);
  for (const auto& p : lat.plaquettes()) h.add(p, -1.0);
  return h;
}

std::string to_string(FieldKind k) { return k == FieldKind::Z ? "z" : "x"; }

FieldKind field_kind_from_string(const std::string& s) {
  if (s == "z" || s == "Z") return FieldKind::Z;
  if (s == "x" || s == "X") return FieldKind::X;
  throw InvalidArgument("unknown field kind '" + s + "' (expected z or x)");
}

std::vector<PauliTerm> uniform_field(const TorusLattice& lat, FieldKind kind) {
  std::vector<PauliTerm> out;
  const char letter = kind == FieldKind::Z ? 'Z' : 'X';
  for (std::size_t q = 0; q < lat.num_qubits(); ++q) out.push_back({PauliOp::single(lat.num_qubits(), q, letter), 1.0});
  return out;
}

SpectralReport spectrum(const PauliSum& h0, const std::vector<PauliTerm>& perturbation, double h,
                        std::size_t multiplet, const SpectrumOptions& options) {
  const std::size_t n = h0.num_qubits();
  if (n > options.limits.sparse_qubits) {
    throw ResourceLimit("spectrum: " + std::to_string(n) + " qubits exceeds the sparse cap of " +
                        std::to_string(options.limits.sparse_qubits));
  }
  if (multiplet == 0) throw InvalidArgument("spectrum: multiplet size must be positive");
  if (!std::isfinite(h)) throw InvalidArgument("spectrum: field strength must be finite");
  PauliSum v(n);
  for (const auto& t : perturbation) v.add(t.op, t.coeff);
  PauliSum ham(n);
  ham.add(h0);
  if (h != 0.0) ham.add(v, h);

  LanczosOptions lo;
  lo.num_eigenpairs = std::max(options.num_levels, multiplet + 1);
  lo.tol = options.tol.ritz;
  lo.max_restarts = options.limits.lanczos_restarts;
  lo.memory_bytes = options.limits.krylov_bytes;
  lo.seed = options.seed;
  lo.stream = options.stream;
  if (lo.num_eigenpairs > ham.dimension()) {
    throw InvalidArgument("spectrum: multiplet does not fit in the Hilbert space");
  }
  const EigenResult eig = lowest_eigenpairs(ham, lo);

  SpectralReport rep;
  const Index m = static_cast<Index>(multiplet);
  rep.levels = eig.values;
  rep.multiplet = multiplet;
  rep.max_residual = eig.max_residual;
  rep.ground_energy = eig.values[0];
  rep.gap_delta = eig.values[m] - eig.values[m - 1];
  rep.splitting = eig.values[m - 1] - eig.values[0];
  const double scale = std::max(rep.gap_delta, 1e-12 * std::max(1.0, std::abs(rep.ground_energy)));
  rep.ground_degeneracy = 0;
  for (Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] - rep.ground_energy <= options.tol.cluster_relative * scale) ++rep.ground_degeneracy;
  }
  rep.ground_vectors = eig.vectors.leftCols(m);
  for (const auto& t : perturbation) {
    Matrix y = apply_columns(t.op, rep.ground_vectors);
    y -= rep.ground_vectors * (rep.ground_vectors.adjoint() * y);
    rep.coupling_k = std::max(rep.coupling_k, std::abs(h * t.coeff) * operator_norm(y));
  }
  return rep;
}

SpectralReport spectrum(const TorusLattice& lat, const std::vector<PauliTerm>& perturbation, double h,
                        const SpectrumOptions& options) {
  if (lat.num_qubits() > options.limits.sparse_qubits) {
    throw ResourceLimit("spectrum: " + std::to_string(lat.num_qubits()) + " qubits exceed the sparse cap of " +
                        std::to_string(options.limits.sparse_qubits));
  }
  return spectrum(toric_hamiltonian(lat), perturbation, h, 4, options);
}

std::size_t configured_threads() {
  if (const char* env = std::getenv("NSSLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

ExponentialFit fit_exponential(const std::vector<ScalingPoint>& pts, int n) {
  const double k = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> xs, ys;
  for (const auto& p : pts) {
    const double x = std::pow(static_cast<double>(p.lattice_size), 1.0 / n);
    const double y = std::log(p.splitting);
    xs.push_back(x);
    ys.push_back(y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  ExponentialFit fit;
  fit.n = n;
  const double den = k * sxx - sx * sx;
  const double slope = den != 0.0 ? (k * sxy - sx * sy) / den : 0.0;
  fit.intercept = (sy - slope * sx) / k;
  fit.alpha = -slope;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + slope * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / k);
  return fit;
}

std::uint64_t size_stream(int l1, int l2) {
  return (static_cast<std::uint64_t>(l1) << 32) ^ static_cast<std::uint64_t>(l2);
}

}  // namespace

ScalingResult scaling_study(const std::vector<std::pair<int, int>>& sizes, double h, FieldKind kind,
                            const ScalingOptions& options) {
  ScalingResult result;
  std::vector<std::pair<int, int>> unique;
  std::set<std::pair<int, int>> seen;
  for (const auto& s : sizes) {
    if (seen.insert(s).second) {
      unique.push_back(s);
    } else {
      result.warnings.push_back("duplicate size " + std::to_string(s.first) + "x" + std::to_string(s.second) +
                                " ignored");
    }
  }
  if (unique.size() < 3) {
    throw InsufficientData("scaling_study: need at least 3 distinct sizes, got " + std::to_string(unique.size()));
  }
  const auto& lim = options.spectrum.limits;
  for (const auto& [l1, l2] : unique) {
    if (l1 < 2 || l2 < 2) {
      throw InvalidArgument("scaling_study: lattice " + std::to_string(l1) + "x" + std::to_string(l2) +
                            " is smaller than 2x2");
    }
    const auto q = static_cast<std::size_t>(2 * l1 * l2);
    if (q > lim.sparse_qubits) {
      throw ResourceLimit("scaling_study: lattice " + std::to_string(l1) + "x" + std::to_string(l2) + " has " +
                          std::to_string(q) + " qubits, above the sparse cap of " + std::to_string(lim.sparse_qubits));
    }
  }

  std::vector<ScalingPoint> points(unique.size());
  std::vector<std::exception_ptr> failures(unique.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < unique.size(); i = next++) {
      try {
        const auto [l1, l2] = unique[i];
        const TorusLattice lat(l1, l2);
        SpectrumOptions so = options.spectrum;
        so.stream = size_stream(l1, l2);
        const SpectralReport rep = spectrum(lat, uniform_field(lat, kind), h, so);
        ScalingPoint& p = points[i];
        p.l1 = l1;
        p.l2 = l2;
        p.lattice_size = lat.num_qubits();
        p.h = h;
        p.splitting = rep.splitting;
        p.gap = rep.gap_delta;
        p.coupling_k = rep.coupling_k;
        p.deviation_max = kl_check_isometry(rep.ground_vectors, paulis_up_to_weight(lat.num_qubits(), 1)).max_deviation;
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min(unique.size(), options.threads > 0 ? options.threads : configured_threads());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::stable_sort(points.begin(), points.end(),
                   [](const ScalingPoint& a, const ScalingPoint& b) { return a.lattice_size < b.lattice_size; });
  result.points = points;

  const double floor = options.spectrum.tol.degenerate_splitting;
  std::vector<ScalingPoint> usable;
  for (const auto& p : points) {
    if (p.splitting > floor) usable.push_back(p);
  }
  if (usable.empty()) {
    result.degenerate = true;
    return result;
  }
  if (usable.size() < 3) {
    throw InsufficientData("scaling_study: only " + std::to_string(usable.size()) +
                           " sizes have a resolvable splitting; need 3");
  }
  for (int n : {1, 2}) result.fits.push_back(fit_exponential(usable, n));
  result.best = *std::min_element(result.fits.begin(), result.fits.end(),
                                  [](const ExponentialFit& a, const ExponentialFit& b) { return a.residual < b.residual; });
  return result;
}

void write_csv(std::ostream& os, const ScalingResult& result) {
  os << "L1,L2,h,splitting,gap,coupling_k,deviation_max\n";
  char buf[512];
  for (const auto& p : result.points) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", p.l1, p.l2, p.h, p.splitting, p.gap,
                  p.coupling_k, p.deviation_max);
    os << buf;
  }
}

}  // namespace nss
