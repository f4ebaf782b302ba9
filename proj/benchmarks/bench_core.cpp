#include <fstream>
#include <random>

#include <benchmark/benchmark.h>

#include "nss/algebra.hpp"
#include "nss/anyon.hpp"
#include "nss/verify.hpp"

using namespace nss;

static PauliOp random_pauli(std::mt19937_64& rng, std::size_t n) {
  PauliOp p(n);
  for (std::size_t k = 0; k < n; ++k) p.set_letter(k, "IXYZ"[rng() % 4]);
  return p;
}

static void BM_PauliMultiply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  const PauliOp a = random_pauli(rng, n), b = random_pauli(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_PauliMultiply)->Arg(18)->Arg(128)->Arg(1024);

static void BM_KLStabilizer(benchmark::State& state) {
  const TorusLattice lat(3, 3);
  const auto errors = paulis_up_to_weight(lat.num_qubits(), 2);
  for (auto _ : state) benchmark::DoNotOptimize(kl_check_stabilizer(lat, errors).max_deviation);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(errors.size()));
}
BENCHMARK(BM_KLStabilizer)->Unit(benchmark::kMillisecond);

// One H·v on the toric Hamiltonian with a uniform field.
static void BM_PauliSumApply(benchmark::State& state) {
  const TorusLattice lat(2, static_cast<int>(state.range(0)));
  PauliSum h = toric_hamiltonian(lat);
  for (const auto& t : uniform_field(lat, FieldKind::Z)) h.add(t.op, 0.1 * t.coeff);
  Eigen::VectorXcd in = Eigen::VectorXcd::Random(static_cast<Eigen::Index>(h.dimension()));
  Eigen::VectorXcd out(in.size());
  for (auto _ : state) {
    h.apply(in.data(), out.data());
    benchmark::ClobberMemory();
  }
  state.SetBytesProcessed(state.iterations() * in.size() * static_cast<int64_t>(sizeof(cplx)));
}
BENCHMARK(BM_PauliSumApply)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMicrosecond);

static void BM_CollectiveDecompose(benchmark::State& state) {
  std::ifstream in(NSSLAB_DATA_DIR "/collective3.json");
  const ErrorSet es = error_set_from_json(nlohmann::json::parse(in));
  for (auto _ : state) benchmark::DoNotOptimize(decompose(close_algebra(es)).sum_nd());
}
BENCHMARK(BM_CollectiveDecompose)->Unit(benchmark::kMillisecond);

static void BM_ToricClosure(benchmark::State& state) {
  const TorusLattice lat(2, 2);
  ErrorSet es;
  es.dim = 256;
  for (const auto& c : lat.checks()) es.generators.push_back(to_dense(c));
  for (auto _ : state) benchmark::DoNotOptimize(close_algebra(es).size());
}
BENCHMARK(BM_ToricClosure)->Unit(benchmark::kSecond)->Iterations(1);

static void BM_Braid(benchmark::State& state) {
  const TorusLattice lat(6, 6);
  auto s = create_pair(ground_state(lat, SectorLabel{{1, 1}}), AnyonType::M, lat.edge(2, 2, Direction::Right));
  s = create_pair(s, AnyonType::E, lat.edge(0, 0, Direction::Right));
  for (auto _ : state) benchmark::DoNotOptimize(braid(s, 2, 0).accumulated_phase());
}
BENCHMARK(BM_Braid)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
