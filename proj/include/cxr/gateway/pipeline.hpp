#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "cxr/dicom/pixels.hpp"
#include "cxr/nn/engine.hpp"
#include "cxr/nn/model.hpp"
#include "cxr/ood/gate.hpp"

namespace cxr::gateway {

/// Classifier and gate, loaded once and shared read-only between requests.
struct Models {
  nn::ModelFile classifier;
  nn::ModelFile ood;
  double threshold = ood::kDefaultThreshold;

  /// Loads and validates both files. The classifier must emit the three
  /// report classes in order and the gate must be binary.
  static Models load(const std::filesystem::path& classifier_path,
                     const std::filesystem::path& ood_path, double threshold);

  /// Validation alone, for models built in memory.
  void check() const;
};

struct PipelineResult {
  ood::GateDecision gate;
  std::optional<nn::Prediction> prediction;  // present iff gate.accepted
};

/// preprocess -> gate -> classify (only when the gate accepts). The CLI and
/// the service both go through here, which is what keeps them bit-identical.
PipelineResult run_pipeline(const dicom::ImageGrid& grid, const Models& models);

nlohmann::json prediction_to_json(const nn::Prediction& p);
nn::Prediction prediction_from_json(const nlohmann::json& j);
nlohmann::json gate_to_json(const ood::GateDecision& g);
ood::GateDecision gate_from_json(const nlohmann::json& j);

/// {"status", "gate", "prediction"}; prediction is null when rejected.
nlohmann::json result_to_json(const PipelineResult& r);

}  // namespace cxr::gateway
