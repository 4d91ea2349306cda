#include "cxr/ood/gate.hpp"

#include <cmath>

#include "cxr/nn/engine.hpp"

namespace cxr::ood {

void check_gate_model(const nn::ModelFile& ood_model) {
  if (ood_model.class_labels.size() != 2) {
    throw ModelArityError("OOD model '" + ood_model.name + "' has " +
                          std::to_string(ood_model.class_labels.size()) +
                          " labels; expected [in-distribution, out-of-distribution]");
  }
}

GateDecision gate(const nn::Tensor& image, const nn::ModelFile& ood_model, double threshold) {
  check_gate_model(ood_model);
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw std::invalid_argument("gate threshold must lie in [0,1]");
  }
  const auto p = nn::forward(ood_model, image);
  GateDecision d;
  d.in_dist_prob = p.probabilities[0];
  d.threshold = threshold;
  d.accepted = accepts(d.in_dist_prob, threshold);
  d.ood_model_version = p.model_version;
  return d;
}

}  // namespace cxr::ood
