#pragma once

#include <optional>
#include <string>

#include "mcauc/calibration.hpp"
#include "mcauc/data.hpp"
#include "mcauc/model.hpp"

namespace mcauc {

// Self-describing JSON model document: layer sizes, seed provenance and all
// parameters, plus the optional calibrator and feature-normalisation blocks
// used to reproduce the full prediction pipeline. Values round-trip exactly.
struct ModelDocument {
  MlpParams mlp;
  std::optional<CalibratorParams> calibrator;
  std::optional<NormalizationParams> normalization;
};

void save_model(const ModelDocument& document, const std::string& path);
ModelDocument load_model(const std::string& path);

}  // namespace mcauc
