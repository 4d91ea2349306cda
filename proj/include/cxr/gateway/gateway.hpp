#pragma once

#include <condition_variable>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cxr/dicom/uid.hpp"
#include "cxr/gateway/config.hpp"
#include "cxr/gateway/pipeline.hpp"
#include "cxr/gateway/store.hpp"

namespace cxr::gateway {

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;

  nlohmann::json json() const { return nlohmann::json::parse(body); }
};

inline constexpr std::size_t kDefaultPageLimit = 50;
inline constexpr std::size_t kMaxPageLimit = 1000;

/// Request handling independent of the HTTP transport. Thread-safe.
class Gateway {
 public:
  Gateway(GatewayConfig config, Models models, dicom::UidSource uids = dicom::random_uid_source(),
          dicom::Clock clock = dicom::system_clock());

  /// Loads the models named in the config.
  static std::unique_ptr<Gateway> from_config(const GatewayConfig& config);

  const GatewayConfig& config() const { return config_; }
  const Models& models() const { return models_; }
  Store& store() { return store_; }

  /// POST /studies
  Response stow(std::string_view content_type, std::string_view body);
  /// GET /studies/{study}/instances/{sop}
  Response wado(const std::string& study, const std::string& sop) const;
  /// GET /predictions
  Response list_predictions(const std::optional<std::string>& status,
                            const std::optional<std::string>& limit,
                            const std::optional<std::string>& offset) const;
  /// GET /predictions/{sop}
  Response get_prediction(const std::string& sop) const;
  /// POST /predictions/{sop}/review with {"action", "note"}
  Response review(const std::string& sop, std::string_view body);
  /// GET /healthz
  Response healthz() const;

 private:
  enum class Outcome { Accepted, Rejected, Failed };

  struct PartResult {
    Outcome outcome;
    nlohmann::json entry;
  };

  PartResult process_part(std::size_t index, std::string_view bytes);
  PartResult outcome_of(std::size_t index, const StudyRecord& rec) const;

  // Per-SOP claims so concurrent uploads of one instance run inference once.
  void claim(const std::string& sop);
  void release(const std::string& sop);

  GatewayConfig config_;
  Models models_;
  dicom::UidSource uids_;
  dicom::Clock clock_;
  Store store_;

  std::counting_semaphore<> inflight_;
  std::mutex claims_mu_;
  std::condition_variable claims_cv_;
  std::set<std::string> claims_;
};

}  // namespace cxr::gateway
