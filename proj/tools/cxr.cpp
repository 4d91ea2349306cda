#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cxr/augment/batch.hpp"
#include "cxr/augment/pgm.hpp"
#include "cxr/common/io.hpp"
#include "cxr/dataset/manifest.hpp"
#include "cxr/dicom/part10.hpp"
#include "cxr/dicom/pixels.hpp"
#include "cxr/gateway/config.hpp"
#include "cxr/gateway/gateway.hpp"
#include "cxr/gateway/pipeline.hpp"
#include "cxr/gateway/server.hpp"
#include "cxr/metrics/evaluate.hpp"
#include "cxr/nn/demo_models.hpp"

namespace fs = std::filesystem;
using namespace cxr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitRejected = 3;

void write_output(const std::optional<fs::path>& out, const std::string& text) {
  if (out) {
    write_file_atomic(*out, text);
  } else {
    std::cout << text;
  }
}

struct ClassifyArgs {
  fs::path input;
  std::optional<fs::path> model, ood, config;
  std::optional<double> threshold;
};

gateway::Models classify_models(const ClassifyArgs& a) {
  double threshold = ood::kDefaultThreshold;
  std::optional<fs::path> model = a.model, ood_path = a.ood;
  if (a.config) {
    const auto cfg = gateway::load_config(*a.config);
    threshold = cfg.ood_threshold;
    if (!model && !cfg.classifier_model.empty()) model = cfg.classifier_model;
    if (!ood_path && !cfg.ood_model.empty()) ood_path = cfg.ood_model;
  }
  if (a.threshold) threshold = *a.threshold;

  gateway::Models m;
  m.classifier = model ? nn::load_model(read_file(*model)) : nn::make_demo_model(nn::kDemoCxrModel);
  m.ood = ood_path ? nn::load_model(read_file(*ood_path)) : nn::make_demo_model(nn::kDemoOodModel);
  m.threshold = threshold;
  m.check();
  return m;
}

int run_classify(const ClassifyArgs& a) {
  const auto models = classify_models(a);
  const auto grid = augment::decode_image(read_file(a.input));
  const auto result = gateway::run_pipeline(grid, models);
  std::cout << gateway::result_to_json(result).dump(2) << "\n";
  return result.gate.accepted ? kExitOk : kExitRejected;
}

gateway::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"COVID-19 chest X-ray triage toolkit"};
  app.require_subcommand(1);

  ClassifyArgs classify;
  auto* cmd_classify = app.add_subcommand("classify", "Gate and classify one DICOM or PGM image");
  cmd_classify->add_option("input", classify.input, "Image file")->required();
  cmd_classify->add_option("--model", classify.model, "Classifier .cbmf (default: demo model)");
  cmd_classify->add_option("--ood", classify.ood, "Gate .cbmf (default: demo model)");
  cmd_classify->add_option("--threshold", classify.threshold, "Gate threshold in [0,1]");
  cmd_classify->add_option("--config", classify.config, "Take models and threshold from a gateway config");

  auto* cmd_manifest = app.add_subcommand("manifest", "Dataset manifest tools");
  cmd_manifest->require_subcommand(1);
  fs::path manifest_in;
  std::optional<int> min_age;
  bool require_quality = false;
  std::optional<fs::path> manifest_out;
  auto* cmd_filter = cmd_manifest->add_subcommand("filter", "Drop rows by age and quality");
  cmd_filter->add_option("input", manifest_in, "Manifest CSV")->required();
  cmd_filter->add_option("--min-age", min_age, "Keep rows with age >= this");
  cmd_filter->add_flag("--require-quality", require_quality, "Drop rows with quality_ok false");
  cmd_filter->add_option("--out", manifest_out, "Output CSV (default: stdout)");

  fs::path aug_manifest, aug_out;
  augment::AugmentPlan plan;
  auto* cmd_augment = app.add_subcommand("augment", "Write augmented variants of a manifest");
  cmd_augment->add_option("manifest", aug_manifest, "Manifest CSV with path,label")->required();
  cmd_augment->add_option("--out", aug_out, "Output directory")->required();
  cmd_augment->add_option("--seed", plan.seed, "Seed")->default_val(0);
  cmd_augment->add_option("--variants", plan.variants_per_image, "Variants per image")
      ->default_val(5)
      ->check(CLI::PositiveNumber);

  fs::path eval_in;
  int folds = 5;
  std::optional<fs::path> eval_csv, eval_pr;
  auto* cmd_eval = app.add_subcommand("evaluate", "Per-class precision, recall, F1 and AP");
  cmd_eval->add_option("predictions", eval_in, "CSV id,true_label,p_covid,p_noncovid,p_nofinding,fold")
      ->required();
  cmd_eval->add_option("--folds", folds, "Fold count")->default_val(5)->check(CLI::PositiveNumber);
  cmd_eval->add_option("--csv", eval_csv, "Also write the report as CSV");
  cmd_eval->add_option("--pr-out", eval_pr, "Write PR curve points as CSV");

  fs::path serve_config;
  std::vector<std::string> serve_set;
  auto* cmd_serve = app.add_subcommand("serve", "Run the STOW-RS/WADO-RS gateway");
  cmd_serve->add_option("--config", serve_config, "key=value config file")->required();
  cmd_serve->add_option("--set", serve_set, "Override a config key (key=value)");

  std::string model_kind;
  std::uint64_t model_seed = nn::kDemoSeed;
  fs::path model_out;
  auto* cmd_gen = app.add_subcommand("gen-model", "Write a seeded demo model");
  cmd_gen->add_option("--kind", model_kind, "Model kind")
      ->required()
      ->check(CLI::IsMember({std::string(nn::kDemoCxrModel), std::string(nn::kDemoOodModel)}));
  cmd_gen->add_option("--seed", model_seed, "Weight seed")->default_val(nn::kDemoSeed);
  cmd_gen->add_option("--out", model_out, "Output .cbmf")->required();

  fs::path pgm_in, dicom_out;
  std::string photometric = "MONOCHROME2";
  std::uint64_t dicom_seed = 0;
  std::string view;
  auto* cmd_mkdcm = app.add_subcommand("make-dicom", "Wrap a PGM into a DX Part 10 file");
  cmd_mkdcm->add_option("input", pgm_in, "Binary PGM")->required();
  cmd_mkdcm->add_option("--out", dicom_out, "Output .dcm")->required();
  cmd_mkdcm->add_option("--photometric", photometric, "MONOCHROME1 or MONOCHROME2")
      ->check(CLI::IsMember({"MONOCHROME1", "MONOCHROME2"}));
  cmd_mkdcm->add_option("--seed", dicom_seed, "UID seed")->default_val(0);
  cmd_mkdcm->add_option("--view", view, "ViewPosition")->check(CLI::IsMember({"PA", "AP"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_classify) return run_classify(classify);

    if (*cmd_filter) {
      const auto entries = dataset::read_manifest(read_text_file(manifest_in));
      const auto result = dataset::filter_manifest(entries, {min_age, require_quality});
      write_output(manifest_out, dataset::write_manifest(result.kept));
      std::cerr << dataset::summarize(result);
      return kExitOk;
    }

    if (*cmd_augment) {
      const auto result = augment::augment_batch(aug_manifest, aug_out, plan);
      for (const auto& e : result.errors) {
        std::cerr << "skipped row " << e.index << " (" << e.path << "): " << e.message << "\n";
      }
      std::cerr << "wrote " << result.written << " variants to " << aug_out.string() << "\n";
      return result.errors.empty() ? kExitOk : kExitError;
    }

    if (*cmd_eval) {
      const auto samples = metrics::read_predictions_csv(read_text_file(eval_in));
      const auto report = metrics::evaluate(samples, folds);
      std::cout << metrics::render_text(report);
      if (eval_csv) write_file_atomic(*eval_csv, metrics::render_csv(report));
      if (eval_pr) write_file_atomic(*eval_pr, metrics::pr_curves_csv(samples));
      return kExitOk;
    }

    if (*cmd_serve) {
      std::map<std::string, std::string> flags;
      for (const auto& kv : serve_set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw gateway::ConfigError("--set expects key=value");
        flags[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      const auto cfg = gateway::load_config(serve_config, flags);
      auto gw = gateway::Gateway::from_config(cfg);
      gateway::HttpServer server(*gw);
      int port = cfg.port();
      if (port == 0) {
        port = server.bind_any_port(cfg.host());
        if (port < 0) throw gateway::ConfigError("cannot bind " + cfg.host());
      } else if (!server.bind(cfg.host(), port)) {
        throw gateway::ConfigError("cannot bind " + cfg.listen);
      }
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << cfg.host() << ":" << port << "\n";
      server.listen_after_bind();
      g_server = nullptr;
      return kExitOk;
    }

    if (*cmd_gen) {
      write_file_atomic(model_out, nn::save_model(nn::make_demo_model(model_kind, model_seed)));
      return kExitOk;
    }

    if (*cmd_mkdcm) {
      auto grid = augment::read_pgm(read_file(pgm_in));
      grid = dicom::with_photometric(std::move(grid), dicom::parse_photometric(photometric));
      auto id = dicom::seeded_identity(grid, dicom_seed);
      id.view_position = view;
      write_file_atomic(dicom_out, dicom::serialize_part10(dicom::make_image_object(grid, id)));
      std::cout << id.study_uid << " " << id.sop_instance_uid << "\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
