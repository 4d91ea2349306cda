#pragma once

#include <stdexcept>
#include <string>

#include "cxr/nn/model.hpp"
#include "cxr/nn/tensor.hpp"

namespace cxr::ood {

inline constexpr double kDefaultThreshold = 0.5;

struct GateDecision {
  double in_dist_prob = 0.0;
  double threshold = kDefaultThreshold;
  bool accepted = false;
  std::string ood_model_version;

  bool operator==(const GateDecision&) const = default;
};

/// The gate model's label count is not 2.
class ModelArityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws ModelArityError unless the model has exactly two labels.
void check_gate_model(const nn::ModelFile& ood_model);

/// Scores an already-preprocessed image. Label 0 of the gate model is the
/// in-distribution class; accepted iff its probability >= threshold.
GateDecision gate(const nn::Tensor& image, const nn::ModelFile& ood_model, double threshold);

/// Acceptance rule alone, for callers that already hold a score.
inline bool accepts(double in_dist_prob, double threshold) { return in_dist_prob >= threshold; }

}  // namespace cxr::ood
