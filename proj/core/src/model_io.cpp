#include "mcauc/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mcauc {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty())
    throw std::runtime_error("model document: expected a non-empty matrix");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto& row = rows.at(r);
    if (row.size() != m.cols()) throw std::runtime_error("model document: ragged matrix");
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = row.at(c).get<double>();
  }
  return m;
}

}  // namespace

void save_model(const ModelDocument& document, const std::string& path) {
  json doc;
  doc["format"] = "mcauc-model";
  doc["version"] = 1;
  doc["layer_sizes"] = document.mlp.layer_sizes;
  doc["seed"] = document.mlp.init_seed;
  doc["activation"] = "tanh";
  json layers = json::array();
  for (std::size_t l = 0; l < document.mlp.num_layers(); ++l) {
    json layer;
    layer["weights"] = matrix_to_json(document.mlp.weights[l]);
    layer["bias"] = document.mlp.biases[l];
    layers.push_back(std::move(layer));
  }
  doc["layers"] = std::move(layers);
  if (document.calibrator) {
    doc["calibrator"]["weight"] = matrix_to_json(document.calibrator->weight);
    doc["calibrator"]["bias"] = document.calibrator->bias;
  }
  if (document.normalization) {
    doc["normalization"]["min"] = document.normalization->min;
    doc["normalization"]["max"] = document.normalization->max;
  }

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing model file: " + path);
}

ModelDocument load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("model file " + path + ": " + e.what());
  }
  if (doc.value("format", "") != "mcauc-model")
    throw std::runtime_error("model file " + path + ": unrecognised format field");

  ModelDocument document;
  document.mlp.layer_sizes = doc.at("layer_sizes").get<std::vector<std::size_t>>();
  document.mlp.init_seed = doc.at("seed").get<std::uint64_t>();
  for (const auto& layer : doc.at("layers")) {
    document.mlp.weights.push_back(matrix_from_json(layer.at("weights")));
    document.mlp.biases.push_back(layer.at("bias").get<std::vector<double>>());
  }
  if (document.mlp.weights.size() + 1 != document.mlp.layer_sizes.size())
    throw std::runtime_error("model file " + path + ": layer count mismatch");
  for (std::size_t l = 0; l < document.mlp.num_layers(); ++l)
    if (document.mlp.weights[l].rows() != document.mlp.layer_sizes[l] ||
        document.mlp.weights[l].cols() != document.mlp.layer_sizes[l + 1] ||
        document.mlp.biases[l].size() != document.mlp.layer_sizes[l + 1])
      throw std::runtime_error("model file " + path + ": layer shape mismatch");

  if (doc.contains("calibrator")) {
    CalibratorParams cal;
    cal.weight = matrix_from_json(doc.at("calibrator").at("weight"));
    cal.bias = doc.at("calibrator").at("bias").get<std::vector<double>>();
    document.calibrator = std::move(cal);
  }
  if (doc.contains("normalization")) {
    NormalizationParams norm;
    norm.min = doc.at("normalization").at("min").get<std::vector<double>>();
    norm.max = doc.at("normalization").at("max").get<std::vector<double>>();
    document.normalization = std::move(norm);
  }
  return document;
}

}  // namespace mcauc
