#include "nss/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "nss/algebra.hpp"
#include "nss/anyon.hpp"
#include "nss/errors.hpp"
#include "nss/lattice.hpp"
#include "nss/statevec.hpp"
#include "nss/verify.hpp"

namespace nss::cli {

using nlohmann::json;

namespace {

const std::map<std::string, double Tolerances::*>& tolerance_fields() {
  static const std::map<std::string, double Tolerances::*> fields{
      {"orthonormality", &Tolerances::orthonormality},
      {"closure_growth", &Tolerances::closure_growth},
      {"closure_check", &Tolerances::closure_check},
      {"null_space", &Tolerances::null_space},
      {"merge", &Tolerances::merge},
      {"gap_ratio", &Tolerances::gap_ratio},
      {"block_structure", &Tolerances::block_structure},
      {"projector", &Tolerances::projector},
      {"eigenstate", &Tolerances::eigenstate},
      {"ritz", &Tolerances::ritz},
      {"cluster_relative", &Tolerances::cluster_relative},
      {"degenerate_splitting", &Tolerances::degenerate_splitting},
  };
  return fields;
}

const std::map<std::string, std::size_t Limits::*>& limit_fields() {
  static const std::map<std::string, std::size_t Limits::*> fields{
      {"dense_qubits", &Limits::dense_qubits},
      {"algebra_dim", &Limits::algebra_dim},
      {"commutant_dim", &Limits::commutant_dim},
      {"algebra_bytes", &Limits::algebra_bytes},
      {"sparse_qubits", &Limits::sparse_qubits},
      {"closure_iterations", &Limits::closure_iterations},
      {"lanczos_restarts", &Limits::lanczos_restarts},
      {"krylov_bytes", &Limits::krylov_bytes},
  };
  return fields;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("invalid JSON in " + path + ": " + e.what());
  }
}

template <class T>
T get_as(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config key '") + key + "': " + e.what());
  }
}

// ---------------------------------------------------------------- commands

json cmd_decompose(const RunConfig& cfg) {
  if (cfg.input.empty()) throw InvalidArgument("decompose: --input is required");
  const ErrorSet errors = error_set_from_json(read_json_file(cfg.input));
  const AlgebraOptions opts{cfg.tol, cfg.limits, cfg.seed};
  const MatrixAlgebra alg = close_algebra(errors, opts);
  const SectorDecomposition dec = decompose(alg, opts);
  json doc = to_json(dec, cfg.include_matrices);
  doc["seed"] = cfg.seed;
  doc["closed"] = alg.closed();
  doc["sum_n2"] = dec.sum_n2();
  if (errors.dim <= cfg.limits.commutant_dim) doc["commutant_dim"] = commutant(alg, opts).size();
  return doc;
}

json cmd_toric(const RunConfig& cfg) {
  const TorusLattice lat(cfg.l1, cfg.l2);
  json doc{{"L1", lat.rows()},
           {"L2", lat.cols()},
           {"n_qubits", lat.num_qubits()},
           {"check_rank", lat.check_rank()},
           {"code_dimension", lat.code_dimension()}};
  json loops = json::array();
  for (const auto& l : homology_basis(lat)) loops.push_back({{"class", to_string(l.homology_class)}, {"op", l.op.str()}});
  doc["loops"] = std::move(loops);
  if (cfg.include_lattice) doc["lattice"] = to_json(lat);
  if (cfg.report) {
    SpectrumOptions so;
    so.tol = cfg.tol;
    so.limits = cfg.limits;
    so.seed = cfg.seed;
    const FieldKind kind = field_kind_from_string(cfg.field);
    const SpectralReport rep = spectrum(lat, uniform_field(lat, kind), cfg.h, so);
    json levels = json::array();
    for (Eigen::Index i = 0; i < rep.levels.size(); ++i) levels.push_back(rep.levels[i]);
    doc["spectrum"] = {{"h", cfg.h},
                       {"field", to_string(kind)},
                       {"ground_energy", rep.ground_energy},
                       {"gap", rep.gap_delta},
                       {"ground_degeneracy", rep.ground_degeneracy},
                       {"splitting", rep.splitting},
                       {"coupling_k", rep.coupling_k},
                       {"max_residual", rep.max_residual},
                       {"levels", std::move(levels)}};
  }
  return doc;
}

json cmd_kl_check(const RunConfig& cfg) {
  const TorusLattice lat(cfg.l1, cfg.l2);
  const std::size_t n = lat.num_qubits();
  std::vector<PauliOp> errors;
  if (cfg.errors.empty()) {
    errors = paulis_up_to_weight(n, cfg.max_weight);
  } else {
    for (const auto& s : cfg.errors) {
      PauliOp p = PauliOp::parse(s);
      if (p.num_qubits() != n) {
        throw InvalidArgument("kl-check: error '" + s + "' has " + std::to_string(p.num_qubits()) +
                              " sites, lattice has " + std::to_string(n));
      }
      errors.push_back(std::move(p));
    }
  }
  if (cfg.dense && n > cfg.limits.dense_qubits) {
    throw ResourceLimit("kl-check: dense cross-check needs " + std::to_string(n) + " qubits, cap is " +
                        std::to_string(cfg.limits.dense_qubits));
  }
  const KLReport rep = kl_check_stabilizer(lat, errors);
  std::map<std::string, std::size_t> counts;
  json failures = json::array();
  for (const auto& e : rep.entries) {
    ++counts[to_string(e.verdict)];
    if (e.verdict == KLVerdict::Logical) failures.push_back(e.label);
  }
  json doc{{"L1", lat.rows()},
           {"L2", lat.cols()},
           {"n_errors", errors.size()},
           {"max_deviation", rep.max_deviation},
           {"counts", counts},
           {"logical", std::move(failures)}};
  if (cfg.dense) {
    const Eigen::MatrixXcd code = stabilized_subspace(code_space_tableau(lat), cfg.limits.dense_qubits);
    const KLReport dense = kl_check_isometry(code, errors);
    std::size_t disagreements = 0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
      const bool pass = rep.entries[i].deviation == 0.0;
      const double d = dense.entries[i].deviation;
      if (pass ? d >= 1e-10 : d <= 0.9) ++disagreements;
    }
    doc["dense"] = {{"max_deviation", dense.max_deviation}, {"disagreements", disagreements}};
  }
  return doc;
}

std::string cmd_scaling(const RunConfig& cfg, std::ostream& err) {
  if (cfg.sizes.empty()) throw InvalidArgument("scaling: --sizes is required");
  ScalingOptions opts;
  opts.spectrum.tol = cfg.tol;
  opts.spectrum.limits = cfg.limits;
  opts.spectrum.seed = cfg.seed;
  opts.threads = cfg.threads;
  const ScalingResult res = scaling_study(cfg.sizes, cfg.h, field_kind_from_string(cfg.field), opts);
  for (const auto& w : res.warnings) err << "warning: " << w << "\n";
  if (res.degenerate) {
    err << "all splittings below " << cfg.tol.degenerate_splitting << ": exact degeneracy, no fit\n";
  } else {
    for (const auto& f : res.fits) {
      err << "fit n=" << f.n << ": log(splitting) = " << f.intercept << " - " << f.alpha << " * |L|^(1/" << f.n
          << "), rms residual " << f.residual << (res.best && res.best->n == f.n ? " (selected)" : "") << "\n";
    }
  }
  std::ostringstream csv;
  write_csv(csv, res);
  return csv.str();
}

std::size_t require_index(const json& args, const char* key) {
  if (!args.contains(key) || !args[key].is_number_unsigned()) {
    throw InvalidArgument(std::string("braid script: argument '") + key + "' must be a non-negative integer");
  }
  return args[key].get<std::size_t>();
}

json cmd_braid(const RunConfig& cfg) {
  if (cfg.input.empty()) throw InvalidArgument("braid: --script is required");
  const json script = read_json_file(cfg.input);
  int l1 = cfg.l1;
  int l2 = cfg.l2;
  SectorLabel sector{{1, 1}};
  LoopBasis basis = LoopBasis::Z;
  json ops = script;
  if (script.is_object()) {
    if (script.contains("lattice")) {
      l1 = get_as<int>(script["lattice"], "L1");
      l2 = get_as<int>(script["lattice"], "L2");
    }
    if (script.contains("sector")) sector.j = script["sector"].get<std::vector<int>>();
    if (script.contains("basis")) {
      const auto b = script["basis"].get<std::string>();
      if (b != "Z" && b != "X") throw InvalidArgument("braid script: basis must be \"Z\" or \"X\"");
      basis = b == "Z" ? LoopBasis::Z : LoopBasis::X;
    }
    ops = script.value("ops", json::array());
  }
  if (!ops.is_array()) throw InvalidArgument("braid script: expected a list of operations");
  for (int j : sector.j) {
    if (j != 1 && j != -1) throw InvalidArgument("braid script: sector entries must be +1 or -1");
  }
  const TorusLattice lat(l1, l2);
  AnyonState state = ground_state(lat, sector, basis);
  const AnyonState initial = state;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const json& step = ops[i];
    if (!step.is_object() || !step.contains("op") || !step["op"].is_string()) {
      throw InvalidArgument("braid script: step " + std::to_string(i) + " needs an \"op\" string");
    }
    const std::string op = step["op"];
    const json args = step.value("args", json::object());
    if (op == "create") {
      state = create_pair(state, anyon_type_from_string(args.value("type", "e")), require_index(args, "edge"));
    } else if (op == "move") {
      const std::size_t id = require_index(args, "anyon");
      const AnyonType kind = state.anyon(id).type;
      LatticePath path{kind, {}};
      if (args.contains("path")) {
        path.steps = args["path"].get<std::vector<std::size_t>>();
      } else if (args.contains("to")) {
        path = straight_path(lat, kind, state.anyon(id).position, require_index(args, "to"));
      } else if (args.contains("wind")) {
        path = winding_path(lat, kind, state.anyon(id).position, args["wind"].get<int>());
      } else {
        throw InvalidArgument("braid script: move needs \"path\", \"to\" or \"wind\"");
      }
      state = move_anyon(state, id, path);
    } else if (op == "braid") {
      state = braid(state, require_index(args, "mover"), require_index(args, "around"));
    } else if (op == "fuse") {
      std::optional<std::size_t> edge;
      if (args.contains("edge")) edge = require_index(args, "edge");
      state = fuse(state, require_index(args, "a"), require_index(args, "b"), edge);
    } else {
      throw InvalidArgument("braid script: unknown op '" + op + "'");
    }
  }
  json doc = report_json(state);
  doc["L1"] = l1;
  doc["L2"] = l2;
  const cplx overlap = relative_phase(initial, state);
  doc["overlap_with_initial"] = {overlap.real(), overlap.imag()};
  return doc;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + cfg.output);
  f << text;
}

}  // namespace

void set_tolerance(Tolerances& tol, const std::string& name, double value) {
  const auto& fields = tolerance_fields();
  const auto it = fields.find(name);
  if (it == fields.end()) throw InvalidArgument("unknown tolerance '" + name + "'");
  if (!(value > 0.0) || !std::isfinite(value)) throw InvalidArgument("tolerance '" + name + "' must be positive");
  tol.*(it->second) = value;
}

std::vector<std::pair<int, int>> parse_sizes(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    try {
      std::size_t used1 = 0, used2 = 0;
      if (x == std::string::npos) throw std::invalid_argument("no x");
      const std::string a = item.substr(0, x), b = item.substr(x + 1);
      const int l1 = std::stoi(a, &used1);
      const int l2 = std::stoi(b, &used2);
      if (used1 != a.size() || used2 != b.size()) throw std::invalid_argument("trailing");
      out.emplace_back(l1, l2);
    } catch (const std::logic_error&) {
      throw InvalidArgument("size '" + item + "' is not of the form L1xL2");
    }
  }
  if (out.empty()) throw InvalidArgument("empty size list");
  return out;
}

void RunConfig::validate() const {
  static const std::vector<std::string> commands{"decompose", "toric", "kl-check", "scaling", "braid"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
    throw InvalidArgument("unknown command '" + command + "'");
  }
  for (const auto& [name, field] : tolerance_fields()) {
    if (!(tol.*field > 0.0)) throw InvalidArgument("tolerance '" + name + "' must be positive");
  }
  if (!std::isfinite(h)) throw InvalidArgument("--h must be finite");
}

void apply_config(RunConfig& cfg, const json& doc) {
  if (!doc.is_object()) throw InvalidArgument("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") cfg.command = get_as<std::string>(doc, "command");
    else if (key == "seed") cfg.seed = get_as<std::uint64_t>(doc, "seed");
    else if (key == "input" || key == "script") cfg.input = value.get<std::string>();
    else if (key == "output") cfg.output = get_as<std::string>(doc, "output");
    else if (key == "l1") cfg.l1 = get_as<int>(doc, "l1");
    else if (key == "l2") cfg.l2 = get_as<int>(doc, "l2");
    else if (key == "h") cfg.h = get_as<double>(doc, "h");
    else if (key == "field") cfg.field = get_as<std::string>(doc, "field");
    else if (key == "sizes") {
      cfg.sizes = value.is_string() ? parse_sizes(value.get<std::string>())
                                    : value.get<std::vector<std::pair<int, int>>>();
    } else if (key == "threads") cfg.threads = get_as<std::size_t>(doc, "threads");
    else if (key == "max_weight") cfg.max_weight = get_as<std::size_t>(doc, "max_weight");
    else if (key == "errors") cfg.errors = get_as<std::vector<std::string>>(doc, "errors");
    else if (key == "dense") cfg.dense = get_as<bool>(doc, "dense");
    else if (key == "report") cfg.report = get_as<bool>(doc, "report");
    else if (key == "lattice") cfg.include_lattice = get_as<bool>(doc, "lattice");
    else if (key == "matrices") cfg.include_matrices = get_as<bool>(doc, "matrices");
    else if (key == "tolerances") {
      for (const auto& [name, v] : value.items()) set_tolerance(cfg.tol, name, v.get<double>());
    } else if (key == "limits") {
      for (const auto& [name, v] : value.items()) {
        const auto it = limit_fields().find(name);
        if (it == limit_fields().end()) throw InvalidArgument("unknown limit '" + name + "'");
        cfg.limits.*(it->second) = v.get<std::size_t>();
      }
    } else {
      throw InvalidArgument("unknown config key '" + key + "'");
    }
  }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    std::string text;
    if (cfg.command == "decompose") text = cmd_decompose(cfg).dump(2) + "\n";
    else if (cfg.command == "toric") text = cmd_toric(cfg).dump(2) + "\n";
    else if (cfg.command == "kl-check") text = cmd_kl_check(cfg).dump(2) + "\n";
    else if (cfg.command == "scaling") text = cmd_scaling(cfg, err);
    else text = cmd_braid(cfg).dump(2) + "\n";
    emit(cfg, text, out);
    return kOk;
  } catch (const ResourceLimit& e) {
    err << "error: " << e.what() << "\n";
    return kResource;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << " (residual " << e.residual() << ")\n";
    return kConvergence;
  } catch (const DegenerateSpectrum& e) {
    err << "error: " << e.what() << "\n";
    return kConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"nsslab: noiseless subsystems, toric codes and anyons"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_flag("--help", "print this help and exit");
  app.set_help_all_flag("--help-all", "print help for every subcommand");

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tol_overrides;
  app.add_option("--config", config_path, "JSON file with default settings (flags win)");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--tol", tol_overrides, "tolerance override name=value (repeatable)");

  std::optional<std::string> input, output, field, sizes;
  std::optional<int> l1, l2;
  std::optional<double> h;
  std::optional<std::size_t> threads, max_weight;
  std::vector<std::string> errors;
  bool dense = false, report = false, lattice = false, matrices = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--output,-o", output, "output file (default stdout)");
  };
  auto add_lattice = [&](CLI::App* sub) {
    sub->add_option("--l1", l1, "rows");
    sub->add_option("--l2", l2, "columns");
  };
  auto* dec = app.add_subcommand("decompose", "decompose the algebra generated by an error set");
  dec->add_option("--input,-i", input, "error-set JSON");
  dec->add_flag("--matrices", matrices, "include isometries and projectors");
  add_common(dec);

  auto* tor = app.add_subcommand("toric", "toric code structure and spectrum");
  add_lattice(tor);
  tor->add_flag("--report", report, "compute the low-lying spectrum");
  tor->add_flag("--lattice", lattice, "include the lattice description");
  tor->add_option("--h", h, "uniform field strength");
  tor->add_option("--field", field, "field direction: z or x");
  add_common(tor);

  auto* kl = app.add_subcommand("kl-check", "error-correction condition for Pauli errors");
  add_lattice(kl);
  kl->add_option("--max-weight", max_weight, "check every Pauli up to this weight");
  kl->add_option("--errors", errors, "explicit Pauli strings")->delimiter(',');
  kl->add_flag("--dense", dense, "cross-check on dense vectors");
  add_common(kl);

  auto* sc = app.add_subcommand("scaling", "ground splitting versus lattice size");
  sc->add_option("--sizes", sizes, "comma-separated L1xL2 list");
  sc->add_option("--h", h, "uniform field strength");
  sc->add_option("--field", field, "field direction: z or x");
  sc->add_option("--threads", threads, "worker threads");
  add_common(sc);

  auto* br = app.add_subcommand("braid", "replay an anyon trajectory script");
  br->add_option("--script,-s", input, "trajectory JSON");
  add_lattice(br);
  add_common(br);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) apply_config(cfg, read_json_file(config_path));
    cfg.command = app.get_subcommands().front()->get_name();
    if (seed) cfg.seed = *seed;
    for (const auto& t : tol_overrides) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw InvalidArgument("--tol expects name=value, got '" + t + "'");
      double v = 0.0;
      try {
        v = std::stod(t.substr(eq + 1));
      } catch (const std::logic_error&) {
        throw InvalidArgument("--tol value in '" + t + "' is not a number");
      }
      set_tolerance(cfg.tol, t.substr(0, eq), v);
    }
    if (input) cfg.input = *input;
    if (output) cfg.output = *output;
    if (field) cfg.field = *field;
    if (sizes) cfg.sizes = parse_sizes(*sizes);
    if (l1) cfg.l1 = *l1;
    if (l2) cfg.l2 = *l2;
    if (h) cfg.h = *h;
    if (threads) cfg.threads = *threads;
    if (max_weight) cfg.max_weight = *max_weight;
    if (!errors.empty()) cfg.errors = errors;
    cfg.dense = cfg.dense || dense;
    cfg.report = cfg.report || report;
    cfg.include_lattice = cfg.include_lattice || lattice;
    cfg.include_matrices = cfg.include_matrices || matrices;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  return run(cfg, out, err);
}

}  // namespace nss::cli
