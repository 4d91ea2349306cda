#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cxr::gateway {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GatewayConfig {
  std::string listen = "127.0.0.1:8042";
  std::filesystem::path classifier_model;
  std::filesystem::path ood_model;
  double ood_threshold = 0.5;
  std::filesystem::path storage_dir = "store";
  std::size_t max_request_bytes = 64u << 20;
  std::size_t max_inflight = 8;
  /// When non-empty, every endpoint except /healthz requires
  /// "Authorization: Bearer <token>".
  std::string auth_token;

  std::string host() const;
  int port() const;
};

inline constexpr std::string_view kEnvPrefix = "CXRGW_";

/// Applies one key (listen, model.classifier, model.ood, ood.threshold,
/// storage.dir, limits.max_request_bytes, limits.max_inflight, auth.token).
void apply_setting(GatewayConfig& cfg, std::string_view key, std::string_view value);

/// Flat key=value lines; '#' starts a comment.
std::map<std::string, std::string> parse_config_text(std::string_view text);

/// "model.classifier" -> "CXRGW_MODEL_CLASSIFIER".
std::string env_name(std::string_view key);

/// File, then environment, then flags; later sources win.
GatewayConfig load_config(const std::optional<std::filesystem::path>& file,
                          const std::map<std::string, std::string>& flags = {});

/// Threshold range, listen address shape, model paths present.
void validate(const GatewayConfig& cfg);

}  // namespace cxr::gateway
