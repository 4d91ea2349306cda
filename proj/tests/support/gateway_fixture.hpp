#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "cxr/common/io.hpp"
#include "cxr/gateway/gateway.hpp"
#include "cxr/gateway/multipart.hpp"
#include "cxr/nn/demo_models.hpp"
#include "support/paths.hpp"

namespace gwtest {

inline constexpr const char* kBoundary = "cxr-test-boundary-7d1a";

inline std::string stow_content_type(const std::string& boundary = kBoundary) {
  return "multipart/related; type=\"application/dicom\"; boundary=" + boundary;
}

inline std::string file_string(const std::filesystem::path& p) {
  const auto b = cxr::read_file(p);
  return std::string(b.begin(), b.end());
}

inline std::string scenario_file(const std::string& name) {
  return file_string(testpaths::testdata() / "scenario" / name);
}

inline nlohmann::json scenario_manifest() {
  return nlohmann::json::parse(
      cxr::read_text_file(testpaths::testdata() / "scenario" / "scenario.json"));
}

inline cxr::gateway::GatewayConfig config_for(const std::filesystem::path& store) {
  cxr::gateway::GatewayConfig cfg;
  cfg.listen = "127.0.0.1:0";
  cfg.classifier_model = testpaths::testdata() / "models" / "demo-cxr-3class.cbmf";
  cfg.ood_model = testpaths::testdata() / "models" / "demo-ood-2class.cbmf";
  cfg.ood_threshold = scenario_manifest()["threshold"].get<double>();
  cfg.storage_dir = store;
  return cfg;
}

inline cxr::gateway::Models models_for(const cxr::gateway::GatewayConfig& cfg) {
  return cxr::gateway::Models::load(cfg.classifier_model, cfg.ood_model, cfg.ood_threshold);
}

inline std::unique_ptr<cxr::gateway::Gateway> make_gateway(
    const cxr::gateway::GatewayConfig& cfg, std::uint64_t uid_seed = 1) {
  return std::make_unique<cxr::gateway::Gateway>(
      cfg, models_for(cfg), cxr::dicom::seeded_uid_source(uid_seed),
      cxr::dicom::fixed_clock(std::chrono::system_clock::time_point(std::chrono::seconds(1700000000))));
}

inline cxr::gateway::Response stow(cxr::gateway::Gateway& gw, const std::vector<std::string>& parts) {
  return gw.stow(stow_content_type(), cxr::gateway::build_multipart(parts, kBoundary));
}

}  // namespace gwtest
