#include "qfcs/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qfcs {

namespace {

using nlohmann::json;

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ModelError("missing key '" + std::string(key) + "' in " + where);
  }
  return obj.at(key);
}

double real_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ModelError(where + " must be a real number");
  return v.get<double>();
}

std::vector<double> real_array(const json& v, const std::string& where) {
  if (!v.is_array()) throw ModelError(where + " must be an array");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(real_number(x, where + " entry"));
  return out;
}

Eigen::MatrixXd real_matrix(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ModelError(where + " must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols = static_cast<Eigen::Index>(v.front().is_array() ? v.front().size() : 0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = v[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ModelError(where + " rows must be arrays of equal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& x = row[static_cast<std::size_t>(c)];
      if (!x.is_number()) {
        throw ModelError(where + " entries must be real numbers (complex couplings are not supported)");
      }
      m(r, c) = x.get<double>();
    }
  }
  return m;
}

}  // namespace

ModelConfig parse_model_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("invalid JSON: ") + e.what());
  }
  ModelConfig cfg;
  cfg.system.energies =
      real_array(member(member(doc, "levels", "document"), "energies", "levels"), "energies");

  const auto& couplings = member(doc, "couplings", "document");
  if (!couplings.is_array()) throw ModelError("couplings must be an array");
  for (const auto& c : couplings) {
    const auto& bath = member(c, "bath", "coupling");
    if (!bath.is_string()) throw ModelError("coupling bath must be a string");
    cfg.system.couplings.push_back(
        {bath.get<std::string>(), real_matrix(member(c, "matrix", "coupling"), "coupling matrix")});
  }

  const auto& baths = member(doc, "baths", "document");
  if (!baths.is_array()) throw ModelError("baths must be an array");
  for (const auto& b : baths) {
    const auto& id = member(b, "id", "bath");
    if (!id.is_string()) throw ModelError("bath id must be a string");
    cfg.baths.push_back({id.get<std::string>(),
                         real_number(member(b, "temperature", "bath"), "temperature"),
                         real_number(member(b, "ohmic_a", "bath"), "ohmic_a")});
  }

  if (doc.contains("clustering")) {
    const auto& cl = doc.at("clustering");
    if (!cl.is_object()) throw ModelError("clustering must be an object");
    if (cl.contains("epsilon")) {
      cfg.epsilon = real_number(cl.at("epsilon"), "clustering.epsilon");
      if (*cfg.epsilon < 0.0) throw ModelError("clustering.epsilon must be >= 0");
    }
    if (cl.contains("centers")) cfg.centers = real_array(cl.at("centers"), "clustering.centers");
  }
  return cfg;
}

ModelConfig read_model_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_model_config(text.str());
}

OpenSystem build_open_system(const ModelConfig& config) {
  auto model = validate_model(config.system, config.baths);
  if (config.centers) {
    auto partition = partition_with_centers(model.system(), *config.centers);
    return OpenSystem(std::move(model), std::move(partition));
  }
  const double eps = config.epsilon.value_or(default_epsilon(model.baths()));
  auto partition = cluster_frequencies(model.system(), eps);
  return OpenSystem(std::move(model), std::move(partition));
}

}  // namespace qfcs
