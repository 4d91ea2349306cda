#include "cxr/gateway/gateway.hpp"

#include <charconv>

#include "cxr/common/io.hpp"
#include "cxr/dicom/errors.hpp"
#include "cxr/dicom/part10.hpp"
#include "cxr/dicom/pixels.hpp"
#include "cxr/dicom/sr.hpp"
#include "cxr/gateway/multipart.hpp"
#include "cxr/nn/errors.hpp"

namespace cxr::gateway {

namespace {

using nlohmann::json;

Response json_response(int status, const json& body) {
  return Response{status, "application/json", body.dump()};
}

Response error_response(int status, const std::string& message) {
  return json_response(status, json{{"error", message}});
}

std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::optional<std::size_t> parse_size(const std::string& s) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string rejection_reason(const ood::GateDecision& g) {
  return "OutOfDistribution: in-distribution probability " + format_double(g.in_dist_prob) +
         " below threshold " + format_double(g.threshold);
}

class ClaimGuard {
 public:
  ClaimGuard(std::function<void()> release) : release_(std::move(release)) {}
  ~ClaimGuard() { release_(); }
  ClaimGuard(const ClaimGuard&) = delete;
  ClaimGuard& operator=(const ClaimGuard&) = delete;

 private:
  std::function<void()> release_;
};

}  // namespace

Gateway::Gateway(GatewayConfig config, Models models, dicom::UidSource uids, dicom::Clock clock)
    : config_(std::move(config)),
      models_(std::move(models)),
      uids_(std::move(uids)),
      clock_(std::move(clock)),
      store_(config_.storage_dir),
      inflight_(static_cast<std::ptrdiff_t>(config_.max_inflight)) {
  models_.check();
}

std::unique_ptr<Gateway> Gateway::from_config(const GatewayConfig& config) {
  validate(config);
  auto models = Models::load(config.classifier_model, config.ood_model, config.ood_threshold);
  return std::make_unique<Gateway>(config, std::move(models));
}

void Gateway::claim(const std::string& sop) {
  std::unique_lock lock(claims_mu_);
  claims_cv_.wait(lock, [&] { return !claims_.count(sop); });
  claims_.insert(sop);
}

void Gateway::release(const std::string& sop) {
  {
    std::lock_guard lock(claims_mu_);
    claims_.erase(sop);
  }
  claims_cv_.notify_all();
}

Gateway::PartResult Gateway::outcome_of(std::size_t index, const StudyRecord& rec) const {
  switch (rec.status) {
    case Status::Accepted:
      return {Outcome::Accepted, json{{"sop", rec.sop_instance_uid},
                                      {"prediction", prediction_to_json(*rec.prediction)},
                                      {"sr_sop", *rec.sr_sop_uid}}};
    case Status::RejectedOod:
      return {Outcome::Rejected,
              json{{"sop", rec.sop_instance_uid}, {"reason", rejection_reason(*rec.gate)}}};
    case Status::Failed:
      break;
  }
  return {Outcome::Failed,
          json{{"index", index}, {"error", *rec.error}}};
}

Gateway::PartResult Gateway::process_part(std::size_t index, std::string_view bytes) {
  auto failed = [&](const std::string& error) {
    return PartResult{Outcome::Failed, json{{"index", index}, {"error", error}}};
  };

  dicom::DicomObject obj;
  try {
    obj = dicom::parse_part10(as_bytes(bytes));
  } catch (const dicom::DicomError& e) {
    return failed(e.what());
  }
  const auto sop = obj.get_string(dicom::tags::kSopInstanceUid);
  const auto study = obj.get_string(dicom::tags::kStudyInstanceUid);
  if (!is_valid_uid(sop) || !is_valid_uid(study)) {
    return failed("InvariantViolation: missing or malformed SOP Instance / Study Instance UID");
  }

  claim(sop);
  ClaimGuard guard([&] { release(sop); });

  if (auto existing = store_.find(sop)) {
    auto r = outcome_of(index, *existing);
    if (existing->study_uid != study) {
      return failed("InvariantViolation: SOP " + sop + " already stored under study " +
                    existing->study_uid);
    }
    return r;
  }

  StudyRecord rec;
  rec.study_uid = study;
  rec.sop_instance_uid = sop;
  rec.received_at = dicom::format_iso8601(clock_());

  std::optional<std::vector<std::uint8_t>> sr_bytes;
  try {
    const auto grid = dicom::extract_pixels(obj);
    const auto result = run_pipeline(grid, models_);
    rec.gate = result.gate;
    if (result.gate.accepted) {
      dicom::SRDocument doc;
      doc.source_sop_instance_uid = sop;
      doc.study_instance_uid = study;
      for (std::size_t i = 0; i < doc.probabilities.size(); ++i) {
        doc.probabilities[i] = result.prediction->probabilities[i];
      }
      doc.gate_accepted = true;
      doc.model_version = result.prediction->model_version;
      doc.created_at = clock_();
      const auto sr = dicom::build_sr(doc, uids_);
      rec.sr_sop_uid = sr.get_string(dicom::tags::kSopInstanceUid);
      sr_bytes = dicom::serialize_part10(sr);
      rec.prediction = result.prediction;
      rec.status = Status::Accepted;
    } else {
      rec.status = Status::RejectedOod;
    }
  } catch (const dicom::DicomError& e) {
    rec.error = e.what();
  } catch (const nn::NnError& e) {
    rec.error = e.what();
  }
  if (rec.error) {
    rec.status = Status::Failed;
    rec.gate.reset();
    rec.prediction.reset();
    rec.sr_sop_uid.reset();
    sr_bytes.reset();
  }

  std::optional<std::span<const std::uint8_t>> sr_span;
  if (sr_bytes) sr_span = std::span<const std::uint8_t>(*sr_bytes);
  const auto stored = store_.put(std::move(rec), as_bytes(bytes), sr_span);
  return outcome_of(index, stored);
}

Response Gateway::stow(std::string_view content_type, std::string_view body) {
  const auto ct = parse_content_type(content_type);
  if (ct.media_type != "multipart/related") {
    return error_response(415, "expected multipart/related, got '" + ct.media_type + "'");
  }
  const auto type = ct.param("type");
  if (!type.empty() && type != "application/dicom") {
    return error_response(415, "expected type=\"application/dicom\", got '" + type + "'");
  }
  if (body.size() > config_.max_request_bytes) {
    return error_response(413, "request body exceeds " + std::to_string(config_.max_request_bytes) +
                                   " bytes");
  }
  const auto boundary = ct.param("boundary");
  std::vector<MultipartPart> parts;
  try {
    parts = parse_multipart(body, boundary);
  } catch (const MultipartError& e) {
    return error_response(400, std::string("malformed multipart body: ") + e.what());
  }

  inflight_.acquire();
  ClaimGuard slot([&] { inflight_.release(); });

  json accepted = json::array(), rejected = json::array(), failed = json::array();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    PartResult r;
    const auto part_type = parse_content_type(parts[i].header("content-type")).media_type;
    if (!part_type.empty() && part_type != "application/dicom") {
      r = {Outcome::Failed,
           json{{"index", i}, {"error", "UnsupportedMediaType: part type '" + part_type + "'"}}};
    } else {
      try {
        r = process_part(i, parts[i].body);
      } catch (const std::exception& e) {
        r = {Outcome::Failed, json{{"index", i}, {"error", std::string("Internal: ") + e.what()}}};
      }
    }
    switch (r.outcome) {
      case Outcome::Accepted: accepted.push_back(std::move(r.entry)); break;
      case Outcome::Rejected: rejected.push_back(std::move(r.entry)); break;
      case Outcome::Failed: failed.push_back(std::move(r.entry)); break;
    }
  }
  return json_response(200, json{{"accepted", accepted}, {"rejected", rejected}, {"failed", failed}});
}

Response Gateway::wado(const std::string& study, const std::string& sop) const {
  if (!is_valid_uid(study) || !is_valid_uid(sop)) return error_response(404, "unknown instance");
  auto bytes = store_.retrieve(study, sop);
  if (!bytes) return error_response(404, "unknown instance " + study + "/" + sop);
  return Response{200, "application/dicom", std::string(bytes->begin(), bytes->end())};
}

Response Gateway::list_predictions(const std::optional<std::string>& status,
                                   const std::optional<std::string>& limit,
                                   const std::optional<std::string>& offset) const {
  std::optional<Status> filter;
  if (status && !status->empty()) {
    try {
      filter = parse_status(*status);
    } catch (const std::invalid_argument& e) {
      return error_response(400, e.what());
    }
  }
  std::size_t lim = kDefaultPageLimit, off = 0;
  if (limit) {
    auto v = parse_size(*limit);
    if (!v || *v > kMaxPageLimit) {
      return error_response(400, "limit must be an integer in [0," + std::to_string(kMaxPageLimit) + "]");
    }
    lim = *v;
  }
  if (offset) {
    auto v = parse_size(*offset);
    if (!v) return error_response(400, "offset must be a non-negative integer");
    off = *v;
  }
  const auto page = store_.list(filter, lim, off);
  json records = json::array();
  for (const auto& r : page.records) records.push_back(to_json(r));
  return json_response(
      200, json{{"total", page.total}, {"limit", lim}, {"offset", off}, {"records", records}});
}

Response Gateway::get_prediction(const std::string& sop) const {
  auto rec = store_.find(sop);
  if (!rec) return error_response(404, "unknown sop " + sop);
  return json_response(200, to_json(*rec));
}

Response Gateway::review(const std::string& sop, std::string_view body) {
  Review rv;
  try {
    const auto j = json::parse(body);
    rv.action = parse_review_action(j.at("action").get<std::string>());
    if (j.contains("note")) rv.note = j["note"].get<std::string>();
  } catch (const json::exception& e) {
    return error_response(400, std::string("bad review body: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return error_response(400, e.what());
  }
  rv.updated_at = dicom::format_iso8601(clock_());
  auto rec = store_.set_review(sop, rv);
  if (!rec) return error_response(404, "unknown sop " + sop);
  return json_response(200, to_json(*rec));
}

Response Gateway::healthz() const {
  const auto version = [](const nn::ModelFile& m) { return m.name + "@" + m.version; };
  const bool writable = store_.writable();
  return json_response(
      200, json{{"status", writable ? "ok" : "degraded"},
                {"models", {{"classifier", version(models_.classifier)},
                            {"ood", version(models_.ood)}}},
                {"ood_threshold", models_.threshold},
                {"storage", {{"dir", store_.root().string()},
                             {"writable", writable},
                             {"records", store_.size()}}}});
}

}  // namespace cxr::gateway
