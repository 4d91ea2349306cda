#include "cxr/gateway/pipeline.hpp"

#include <stdexcept>

#include "cxr/common/io.hpp"
#include "cxr/dicom/sr.hpp"
#include "cxr/nn/preprocess.hpp"

namespace cxr::gateway {

namespace {

nn::Tensor prepare(const dicom::ImageGrid& grid, const nn::ModelFile& model) {
  return nn::preprocess(grid, model.input_shape[0], model.input_shape[1]);
}

}  // namespace

Models Models::load(const std::filesystem::path& classifier_path,
                    const std::filesystem::path& ood_path, double threshold) {
  Models m;
  m.classifier = nn::load_model(read_file(classifier_path));
  m.ood = nn::load_model(read_file(ood_path));
  m.threshold = threshold;
  m.check();
  return m;
}

void Models::check() const {
  nn::validate_model(classifier);
  nn::validate_model(ood);
  ood::check_gate_model(ood);
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw std::invalid_argument("ood threshold must lie in [0,1]");
  }
  if (classifier.class_labels.size() != dicom::kClassLabels.size()) {
    throw std::invalid_argument("classifier must have 3 labels");
  }
  for (std::size_t i = 0; i < dicom::kClassLabels.size(); ++i) {
    if (classifier.class_labels[i] != dicom::kClassLabels[i]) {
      throw std::invalid_argument("classifier label " + std::to_string(i) + " is '" +
                                  classifier.class_labels[i] + "', expected '" +
                                  std::string(dicom::kClassLabels[i]) + "'");
    }
  }
  for (const auto* m : {&classifier, &ood}) {
    if (m->input_shape[2] != 3) {
      throw std::invalid_argument("model " + m->name + " must take 3 input channels");
    }
  }
}

PipelineResult run_pipeline(const dicom::ImageGrid& grid, const Models& models) {
  grid.validate();
  PipelineResult r;
  r.gate = ood::gate(prepare(grid, models.ood), models.ood, models.threshold);
  if (r.gate.accepted) r.prediction = nn::forward(models.classifier, prepare(grid, models.classifier));
  return r;
}

nlohmann::json prediction_to_json(const nn::Prediction& p) {
  return {{"labels", p.labels},
          {"probabilities", p.probabilities},
          {"argmax_index", p.argmax_index},
          {"argmax_label", p.argmax_label},
          {"model_version", p.model_version}};
}

nn::Prediction prediction_from_json(const nlohmann::json& j) {
  nn::Prediction p;
  p.labels = j.at("labels").get<std::vector<std::string>>();
  p.probabilities = j.at("probabilities").get<std::vector<double>>();
  p.argmax_index = j.at("argmax_index").get<std::size_t>();
  p.argmax_label = j.at("argmax_label").get<std::string>();
  p.model_version = j.at("model_version").get<std::string>();
  return p;
}

nlohmann::json gate_to_json(const ood::GateDecision& g) {
  return {{"in_dist_prob", g.in_dist_prob},
          {"threshold", g.threshold},
          {"accepted", g.accepted},
          {"ood_model_version", g.ood_model_version}};
}

ood::GateDecision gate_from_json(const nlohmann::json& j) {
  ood::GateDecision g;
  g.in_dist_prob = j.at("in_dist_prob").get<double>();
  g.threshold = j.at("threshold").get<double>();
  g.accepted = j.at("accepted").get<bool>();
  g.ood_model_version = j.at("ood_model_version").get<std::string>();
  return g;
}

nlohmann::json result_to_json(const PipelineResult& r) {
  return {{"status", r.gate.accepted ? "accepted" : "rejected_ood"},
          {"gate", gate_to_json(r.gate)},
          {"prediction", r.prediction ? prediction_to_json(*r.prediction) : nlohmann::json()}};
}

}  // namespace cxr::gateway
