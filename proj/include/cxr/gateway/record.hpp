#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cxr/nn/engine.hpp"
#include "cxr/ood/gate.hpp"

namespace cxr::gateway {

enum class Status { Accepted, RejectedOod, Failed };

std::string_view status_name(Status s);
/// Throws std::invalid_argument on anything but the three names.
Status parse_status(std::string_view s);

enum class ReviewAction { None, Confirmed, Overridden };

std::string_view review_action_name(ReviewAction a);
ReviewAction parse_review_action(std::string_view s);

struct Review {
  ReviewAction action = ReviewAction::None;
  std::string note;
  std::string updated_at;  // ISO-8601, empty until the first review

  bool operator==(const Review&) const = default;
};

class RecordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StudyRecord {
  std::uint64_t seq = 0;  // assigned by the store, orders the queue
  std::string study_uid;
  std::string sop_instance_uid;
  std::string received_at;
  Status status = Status::Failed;
  std::optional<nn::Prediction> prediction;
  /// Absent only for failed records whose image never reached the gate.
  std::optional<ood::GateDecision> gate;
  std::optional<std::string> sr_sop_uid;
  std::string source_bytes_path;  // relative to the storage root
  std::optional<std::string> error;
  Review review;

  bool operator==(const StudyRecord&) const = default;
};

/// Throws RecordError when the status, gate, prediction and SR fields
/// disagree.
void validate(const StudyRecord& r);

nlohmann::json to_json(const StudyRecord& r);
StudyRecord record_from_json(const nlohmann::json& j);

/// UIDs become path components, so only digits and dots are allowed.
bool is_valid_uid(std::string_view uid);

}  // namespace cxr::gateway
