#include "cxr/gateway/record.hpp"

#include "cxr/gateway/pipeline.hpp"

namespace cxr::gateway {

std::string_view status_name(Status s) {
  switch (s) {
    case Status::Accepted: return "accepted";
    case Status::RejectedOod: return "rejected_ood";
    case Status::Failed: return "failed";
  }
  return "?";
}

Status parse_status(std::string_view s) {
  if (s == "accepted") return Status::Accepted;
  if (s == "rejected_ood") return Status::RejectedOod;
  if (s == "failed") return Status::Failed;
  throw std::invalid_argument("unknown status '" + std::string(s) + "'");
}

std::string_view review_action_name(ReviewAction a) {
  switch (a) {
    case ReviewAction::None: return "none";
    case ReviewAction::Confirmed: return "confirmed";
    case ReviewAction::Overridden: return "overridden";
  }
  return "?";
}

ReviewAction parse_review_action(std::string_view s) {
  if (s == "none") return ReviewAction::None;
  if (s == "confirmed") return ReviewAction::Confirmed;
  if (s == "overridden") return ReviewAction::Overridden;
  throw std::invalid_argument("unknown review action '" + std::string(s) + "'");
}

void validate(const StudyRecord& r) {
  const std::string who = "record " + r.sop_instance_uid + ": ";
  if (!is_valid_uid(r.sop_instance_uid) || !is_valid_uid(r.study_uid)) {
    throw RecordError(who + "bad study or instance UID");
  }
  switch (r.status) {
    case Status::Accepted:
      if (!r.gate || !r.gate->accepted) throw RecordError(who + "accepted without a passing gate");
      if (!r.prediction) throw RecordError(who + "accepted without a prediction");
      if (!r.sr_sop_uid) throw RecordError(who + "accepted without an SR");
      break;
    case Status::RejectedOod:
      if (!r.gate || r.gate->accepted) throw RecordError(who + "rejected with a passing gate");
      if (r.prediction) throw RecordError(who + "rejected but carries a prediction");
      if (r.sr_sop_uid) throw RecordError(who + "rejected but has an SR");
      break;
    case Status::Failed:
      if (r.gate && !r.gate->accepted) throw RecordError(who + "failed with a rejecting gate");
      if (r.prediction || r.sr_sop_uid) throw RecordError(who + "failed but has results");
      if (!r.error) throw RecordError(who + "failed without an error");
      break;
  }
}

nlohmann::json to_json(const StudyRecord& r) {
  auto opt_str = [](const std::optional<std::string>& s) {
    return s ? nlohmann::json(*s) : nlohmann::json();
  };
  return {{"seq", r.seq},
          {"study_uid", r.study_uid},
          {"sop_instance_uid", r.sop_instance_uid},
          {"received_at", r.received_at},
          {"status", status_name(r.status)},
          {"prediction", r.prediction ? prediction_to_json(*r.prediction) : nlohmann::json()},
          {"gate", r.gate ? gate_to_json(*r.gate) : nlohmann::json()},
          {"sr_sop_uid", opt_str(r.sr_sop_uid)},
          {"source_bytes_path", r.source_bytes_path},
          {"error", opt_str(r.error)},
          {"review",
           {{"action", review_action_name(r.review.action)},
            {"note", r.review.note},
            {"updated_at", r.review.updated_at}}}};
}

StudyRecord record_from_json(const nlohmann::json& j) {
  try {
    StudyRecord r;
    r.seq = j.at("seq").get<std::uint64_t>();
    r.study_uid = j.at("study_uid").get<std::string>();
    r.sop_instance_uid = j.at("sop_instance_uid").get<std::string>();
    r.received_at = j.at("received_at").get<std::string>();
    r.status = parse_status(j.at("status").get<std::string>());
    if (!j.at("prediction").is_null()) r.prediction = prediction_from_json(j["prediction"]);
    if (!j.at("gate").is_null()) r.gate = gate_from_json(j["gate"]);
    if (!j.at("sr_sop_uid").is_null()) r.sr_sop_uid = j["sr_sop_uid"].get<std::string>();
    r.source_bytes_path = j.at("source_bytes_path").get<std::string>();
    if (!j.at("error").is_null()) r.error = j["error"].get<std::string>();
    const auto& rv = j.at("review");
    r.review.action = parse_review_action(rv.at("action").get<std::string>());
    r.review.note = rv.at("note").get<std::string>();
    r.review.updated_at = rv.at("updated_at").get<std::string>();
    validate(r);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw RecordError(std::string("malformed record: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw RecordError(std::string("malformed record: ") + e.what());
  }
}

bool is_valid_uid(std::string_view uid) {
  if (uid.empty() || uid.size() > 64) return false;
  if (uid.front() == '.' || uid.back() == '.') return false;
  for (std::size_t i = 0; i < uid.size(); ++i) {
    const char c = uid[i];
    if (c == '.') {
      if (uid[i + 1] == '.') return false;
    } else if (c < '0' || c > '9') {
      return false;
    }
  }
  return true;
}

}  // namespace cxr::gateway
