#include "cxr/gateway/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>

#include "cxr/common/io.hpp"

namespace cxr::gateway {

namespace {

constexpr std::array<std::string_view, 8> kKeys = {
    "listen",      "model.classifier",         "model.ood",            "ood.threshold",
    "storage.dir", "limits.max_request_bytes", "limits.max_inflight", "auth.token"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::size_t parse_count(std::string_view key, std::string_view v) {
  std::size_t n = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (ec != std::errc{} || p != v.data() + v.size() || n == 0) {
    throw ConfigError(std::string(key) + ": expected a positive integer, got '" +
                      std::string(v) + "'");
  }
  return n;
}

}  // namespace

std::string GatewayConfig::host() const {
  const auto colon = listen.rfind(':');
  return colon == std::string::npos ? listen : listen.substr(0, colon);
}

int GatewayConfig::port() const {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw ConfigError("listen: expected host:port");
  int port = -1;
  const std::string_view digits(listen.data() + colon + 1, listen.size() - colon - 1);
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc{} || p != digits.data() + digits.size() || port < 0 || port > 65535) {
    throw ConfigError("listen: bad port in '" + listen + "'");
  }
  return port;
}

void apply_setting(GatewayConfig& cfg, std::string_view key, std::string_view value) {
  if (key == "listen") {
    cfg.listen = value;
  } else if (key == "model.classifier") {
    cfg.classifier_model = std::string(value);
  } else if (key == "model.ood") {
    cfg.ood_model = std::string(value);
  } else if (key == "ood.threshold") {
    const std::string s(value);
    char* end = nullptr;
    const double t = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
      throw ConfigError("ood.threshold: not a number '" + s + "'");
    }
    cfg.ood_threshold = t;
  } else if (key == "storage.dir") {
    cfg.storage_dir = std::string(value);
  } else if (key == "limits.max_request_bytes") {
    cfg.max_request_bytes = parse_count(key, value);
  } else if (key == "limits.max_inflight") {
    cfg.max_inflight = parse_count(key, value);
  } else if (key == "auth.token") {
    cfg.auth_token = value;
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0, line_no = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return out;
}

std::string env_name(std::string_view key) {
  std::string s(kEnvPrefix);
  for (char c : key) s.push_back(c == '.' ? '_' : static_cast<char>(std::toupper(c)));
  return s;
}

GatewayConfig load_config(const std::optional<std::filesystem::path>& file,
                          const std::map<std::string, std::string>& flags) {
  GatewayConfig cfg;
  if (file) {
    for (const auto& [k, v] : parse_config_text(read_text_file(*file))) apply_setting(cfg, k, v);
  }
  for (auto key : kKeys) {
    if (const char* v = std::getenv(env_name(key).c_str())) apply_setting(cfg, key, v);
  }
  for (const auto& [k, v] : flags) apply_setting(cfg, k, v);
  return cfg;
}

void validate(const GatewayConfig& cfg) {
  if (!(cfg.ood_threshold >= 0.0 && cfg.ood_threshold <= 1.0)) {
    throw ConfigError("ood.threshold must lie in [0,1]");
  }
  (void)cfg.port();
  if (cfg.classifier_model.empty()) throw ConfigError("model.classifier is not set");
  if (cfg.ood_model.empty()) throw ConfigError("model.ood is not set");
  if (cfg.storage_dir.empty()) throw ConfigError("storage.dir is not set");
}

}  // namespace cxr::gateway
