#include <cmath>

#include "nss/algebra.hpp"
#include "nss/errors.hpp"

namespace nss {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

cplx entry_from_json(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw InvalidArgument("matrix entry must be a number or an [re, im] pair, got " + e.dump());
}

}  // namespace

Matrix matrix_from_json(const json& doc) {
  if (!doc.is_array() || doc.empty() || !doc[0].is_array()) {
    throw InvalidArgument("matrix must be a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(doc.size());
  const auto cols = static_cast<Eigen::Index>(doc[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = doc[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InvalidArgument("matrix row " + std::to_string(r) + " has the wrong length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = entry_from_json(row[static_cast<std::size_t>(c)]);
  }
  if (!m.allFinite()) throw InvalidArgument("matrix has non-finite entries");
  return m;
}

json to_json(const ErrorSet& errors) {
  json gens = json::array();
  for (std::size_t i = 0; i < errors.generators.size(); ++i) {
    json g{{"matrix", matrix_to_json(errors.generators[i])}};
    if (i < errors.labels.size()) g["label"] = errors.labels[i];
    gens.push_back(std::move(g));
  }
  return {{"dim", errors.dim}, {"generators", std::move(gens)}};
}

ErrorSet error_set_from_json(const json& doc) {
  if (!doc.is_object()) throw InvalidArgument("error set must be a JSON object");
  if (!doc.contains("dim") || !doc["dim"].is_number_unsigned()) {
    throw InvalidArgument("error set needs a positive integer \"dim\"");
  }
  if (!doc.contains("generators") || !doc["generators"].is_array()) {
    throw InvalidArgument("error set needs a \"generators\" array");
  }
  ErrorSet out;
  out.dim = doc["dim"].get<std::size_t>();
  bool any_label = false;
  for (const auto& g : doc["generators"]) {
    if (g.is_object()) {
      if (!g.contains("matrix")) throw InvalidArgument("generator object needs a \"matrix\"");
      out.generators.push_back(matrix_from_json(g["matrix"]));
      out.labels.push_back(g.value("label", "E" + std::to_string(out.generators.size() - 1)));
      any_label = any_label || g.contains("label");
    } else {
      out.generators.push_back(matrix_from_json(g));
      out.labels.push_back("E" + std::to_string(out.generators.size() - 1));
    }
  }
  if (!any_label) out.labels.clear();
  out.validate();
  return out;
}

json to_json(const SectorDecomposition& dec, bool include_matrices) {
  json sectors = json::array();
  for (const auto& s : dec.sectors) {
    json j{{"label", s.label},
           {"n", s.n},
           {"d", s.d},
           {"rank", static_cast<std::size_t>(std::llround(s.central_projector.trace().real()))}};
    if (include_matrices) {
      j["central_projector"] = matrix_to_json(s.central_projector);
      j["isometry"] = matrix_to_json(s.isometry);
    }
    sectors.push_back(std::move(j));
  }
  json noiseless = json::array();
  for (const auto& f : noiseless_subsystems(dec)) noiseless.push_back({{"sector", f.sector}, {"n", f.n}, {"d", f.d}});
  return {{"dim", dec.dim},
          {"algebra_dim", dec.algebra_dim},
          {"sum_nd", dec.sum_nd()},
          {"sum_d2", dec.sum_d2()},
          {"rounding_residual", dec.rounding_residual},
          {"block_residual", dec.block_residual},
          {"sectors", std::move(sectors)},
          {"noiseless", std::move(noiseless)}};
}

}  // namespace nss
