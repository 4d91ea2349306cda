// One PASS/FAIL line per acceptance criterion. Exit status is non-zero if any fails.

#include <httplib.h>
#include <omp.h>
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "cxr/augment/batch.hpp"
#include "cxr/augment/pgm.hpp"
#include "cxr/augment/transforms.hpp"
#include "cxr/common/io.hpp"
#include "cxr/common/rng.hpp"
#include "cxr/dataset/manifest.hpp"
#include "cxr/dicom/errors.hpp"
#include "cxr/dicom/part10.hpp"
#include "cxr/dicom/pixels.hpp"
#include "cxr/gateway/pipeline.hpp"
#include "cxr/gateway/server.hpp"
#include "cxr/metrics/confusion.hpp"
#include "cxr/metrics/pr.hpp"
#include "cxr/nn/kernels.hpp"
#include "cxr/nn/preprocess.hpp"
#include "cxr/ood/gate.hpp"
#include "support/gateway_fixture.hpp"
#include "support/images.hpp"
#include "support/oracles.hpp"

using namespace cxr;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ += !ok;
  }
  bool ok() const { return failed_ == 0; }
  std::size_t checks() const { return checks_; }
  std::string summary() const {
    std::ostringstream s;
    s << failed_ << " of " << checks_ << " checks failed";
    for (const auto& f : failures_) s << "; " << f;
    return s.str();
  }

 private:
  std::size_t checks_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
};

struct Criterion {
  std::string name;
  double limit_s;
  std::function<void(Checker&)> run;
};

std::span<const std::uint8_t> bytes_of(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::string dicom_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const dicom::DicomError& e) {
    return dicom::error_name(e.code());
  }
  return "ok";
}

std::pair<int, std::string> run_cli(const std::string& args) {
  const std::string cmd = "\"" + testpaths::cli() + "\" " + args + " 2>/dev/null";
  std::string out;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (p == nullptr) return {-1, ""};
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int status = ::pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::map<std::string, std::vector<std::uint8_t>> tree(const fs::path& dir) {
  std::map<std::string, std::vector<std::uint8_t>> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = read_file(e.path());
  }
  return out;
}

// ---- criteria ------------------------------------------------------------------

void f1_lock(Checker& c) {
  const struct {
    double p, r;
    const char* f1;
  } rows[] = {{0.981, 0.962, "0.971"}, {0.941, 0.967, "0.954"}, {0.952, 0.950, "0.951"}};
  for (const auto& row : rows) {
    const auto got = format_fixed(metrics::f1_from(row.p, row.r).value, 3);
    c.expect(got == row.f1, "F1(" + format_double(row.p) + ", " + format_double(row.r) + ") = " + got);
  }
}

void ap_oracle(Checker& c) {
  XorShift64Star rng(7001);
  std::vector<double> scores;
  std::vector<int> truths;
  for (int i = 0; i < 1000; ++i) {
    oracle::random_scored_set(rng, 1 + rng.below(50), scores, truths);
    const double got = metrics::average_precision(metrics::pr_curve(scores, truths));
    const double want = oracle::brute_force_ap(scores, truths);
    c.expect(std::abs(got - want) <= 1e-12, "set " + std::to_string(i) + ": " + format_double(got) +
                                                " vs " + format_double(want));
  }
}

void kernel_oracles(Checker& c) {
  XorShift64Star rng(7002);
  for (int i = 0; i < 150; ++i) {
    const std::size_t ch = 1 + rng.below(3), o = 1 + rng.below(4);
    const std::size_t kh = 1 + rng.below(5), kw = 1 + rng.below(5);
    const std::size_t stride = 1 + rng.below(3), pad = rng.below(3);
    const auto in = oracle::random_tensor(rng, {ch, kh + rng.below(12), kw + rng.below(12)});
    const auto k = oracle::random_tensor(rng, {o, ch, kh, kw});
    const auto b = oracle::random_tensor(rng, {o});
    const auto want = oracle::conv2d(in, k, b, stride, pad);
    c.expect(oracle::max_abs_diff(nn::conv2d(in, k, b, {stride, pad}), want) <= 1e-9, "conv2d case");
    c.expect(oracle::max_abs_diff(nn::reference::conv2d(in, k, b, {stride, pad}), want) <= 1e-9,
             "reference conv2d case");
  }
  for (int i = 0; i < 150; ++i) {
    const std::size_t window = 1 + rng.below(4), stride = 1 + rng.below(3);
    const auto in = oracle::random_tensor(rng, {1 + rng.below(4), window + rng.below(10), window + rng.below(10)});
    const auto want = oracle::maxpool2d(in, window, stride);
    c.expect(oracle::max_abs_diff(nn::maxpool2d(in, window, stride), want) <= 1e-9, "maxpool2d case");
  }
  for (int i = 0; i < 150; ++i) {
    const std::size_t n = 1 + rng.below(300), m = 1 + rng.below(20);
    const auto in = oracle::random_tensor(rng, {n});
    const auto w = oracle::random_tensor(rng, {m, n});
    const auto b = oracle::random_tensor(rng, {m});
    c.expect(oracle::max_abs_diff(nn::dense(in, w, b), oracle::dense(in, w, b)) <= 1e-9, "dense case");
  }
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = 1 + rng.below(10);
    const double scale = std::pow(10.0, static_cast<double>(rng.below(4)));
    const auto logits = oracle::random_tensor(rng, {n}, -scale, scale);
    const auto p = nn::softmax(logits);
    double sum = 0.0;
    bool in_range = true;
    for (double v : p.values()) {
      in_range = in_range && v >= 0.0 && v <= 1.0;
      sum += v;
    }
    c.expect(in_range && std::abs(sum - 1.0) <= 1e-12, "softmax is not a probability vector");
    auto shifted = logits;
    const double k = rng.uniform(-100.0, 100.0);
    for (auto& v : shifted.values()) v += k;
    c.expect(oracle::max_abs_diff(nn::softmax(shifted), p) <= 1e-12, "softmax shift invariance");
  }
}

void dicom_round_trip(Checker& c) {
  std::size_t files = 0, errors = 0;
  std::set<int> depths;
  std::set<std::string> photometrics;
  for (const auto& entry : fs::directory_iterator(testpaths::testdata() / "dicom")) {
    if (entry.path().extension() != ".json") continue;
    const auto expect = json::parse(read_text_file(entry.path()));
    const auto name = expect["file"].get<std::string>();
    const auto bytes = read_file(entry.path().parent_path() / name);
    ++files;
    dicom::DicomObject obj;
    const auto parsed = dicom_error([&] { obj = dicom::parse_part10(bytes); });
    c.expect(parsed == expect["parse"].get<std::string>(), name + ": parse gave " + parsed);
    if (parsed != "ok") {
      ++errors;
      continue;
    }
    const auto again = dicom::serialize_part10(obj);
    c.expect(again == bytes, name + ": serialize(parse(x)) != x");
    c.expect(dicom::parse_part10(again) == obj, name + ": parse(serialize(o)) != o");
    dicom::ImageGrid g;
    const auto pix = dicom_error([&] { g = dicom::extract_pixels(obj); });
    c.expect(pix == expect["pixels"].get<std::string>(), name + ": pixels gave " + pix);
    if (pix == "ok") {
      depths.insert(g.bits_allocated);
      photometrics.insert(std::string(dicom::photometric_name(g.photometric)));
    }
  }
  c.expect(files >= 20, "corpus has " + std::to_string(files) + " files");
  c.expect(errors > 0, "corpus has no error cases");
  c.expect(depths == std::set<int>{8, 16}, "corpus lacks a bit depth");
  c.expect(photometrics.size() == 2, "corpus lacks a photometric interpretation");
}

void end_to_end(Checker& c) {
  auto cfg = gwtest::config_for(testpaths::scratch("accept-e2e"));
  auto gw = gwtest::make_gateway(cfg);
  gateway::HttpServer server(*gw);
  const int port = server.bind_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client http("127.0.0.1", port);
  http.set_read_timeout(10, 0);

  const auto valid = gwtest::scenario_file("valid.dcm");
  const auto truncated = gwtest::scenario_file("truncated.dcm");
  const auto ood_file = gwtest::scenario_file("ood.dcm");
  const auto files = gwtest::scenario_manifest()["files"];
  const auto res = http.Post("/studies", gateway::build_multipart({valid, truncated, ood_file}, gwtest::kBoundary),
                             gwtest::stow_content_type().c_str());
  c.expect(res && res->status == 200, "STOW did not return 200");
  if (!res || res->status != 200) {
    server.stop();
    th.join();
    return;
  }
  const auto body = json::parse(res->body);

  std::string truncation_error;
  try {
    dicom::parse_part10(bytes_of(truncated));
  } catch (const dicom::DicomError& e) {
    truncation_error = e.what();
  }
  const auto offline = [&](const std::string& f) {
    return gateway::run_pipeline(dicom::extract_pixels(dicom::parse_part10(bytes_of(f))), gw->models());
  };
  const auto expect_valid = offline(valid);
  const auto expect_ood = offline(ood_file);
  const std::string sr_sop = body["accepted"].size() == 1 ? body["accepted"][0].value("sr_sop", "") : "";
  const json expected = {
      {"accepted",
       {{{"sop", files["valid.dcm"]["sop"]},
         {"prediction", gateway::prediction_to_json(*expect_valid.prediction)},
         {"sr_sop", sr_sop}}}},
      {"rejected",
       {{{"sop", files["ood.dcm"]["sop"]},
         {"reason", "OutOfDistribution: in-distribution probability " +
                        format_double(expect_ood.gate.in_dist_prob) + " below threshold " +
                        format_double(cfg.ood_threshold)}}}},
      {"failed", {{{"index", 1}, {"error", truncation_error}}}}};
  c.expect(body == expected, "outcome lists differ: " + body.dump());
  c.expect(truncation_error.rfind("TruncatedElement", 0) == 0, "truncated part error: " + truncation_error);

  const std::string base = "/studies/" + files["valid.dcm"]["study"].get<std::string>() + "/instances/";
  const auto src = http.Get(base + files["valid.dcm"]["sop"].get<std::string>());
  c.expect(src && src->status == 200 && src->body == valid, "WADO source bytes differ");
  const auto sr = http.Get(base + sr_sop);
  c.expect(sr && sr->status == 200, "SR not retrievable");
  if (sr && sr->status == 200) {
    const auto obj = dicom::parse_part10(bytes_of(sr->body));
    c.expect(obj.get_string(dicom::tags::kModality) == "SR", "SR modality");
    c.expect(obj.get_string(dicom::tags::kSopInstanceUid) == sr_sop, "SR SOP UID");
    c.expect(obj.get_string(dicom::tags::kStudyInstanceUid) == files["valid.dcm"]["study"].get<std::string>(),
             "SR filed under another study");
  }
  const auto ood_sr_files = [&] {
    std::size_t n = 0;
    for (const auto& e : fs::recursive_directory_iterator(cfg.storage_dir)) n += e.path().string().ends_with(".sr.dcm");
    return n;
  }();
  c.expect(ood_sr_files == 1, "expected exactly one SR on disk");

  // The CLI, run as a separate process on the same file, agrees bit for bit.
  const auto scen = testpaths::testdata() / "scenario";
  const auto [code, out] = run_cli("classify \"" + (scen / "valid.dcm").string() + "\" --model \"" +
                                   cfg.classifier_model.string() + "\" --ood \"" + cfg.ood_model.string() +
                                   "\" --threshold " + format_double(cfg.ood_threshold));
  c.expect(code == 0, "CLI exit " + std::to_string(code));
  if (code == 0) {
    const auto cli = json::parse(out);
    const auto service = body["accepted"][0]["prediction"];
    c.expect(cli["prediction"]["probabilities"].get<std::vector<double>>() ==
                 service["probabilities"].get<std::vector<double>>(),
             "CLI and service probabilities differ");
    c.expect(cli["prediction"] == service, "CLI and service predictions differ");
  }
  server.stop();
  th.join();
}

void ood_sweep_and_queue(Checker& c) {
  auto cfg = gwtest::config_for(testpaths::scratch("accept-ood"));
  auto gw = gwtest::make_gateway(cfg);
  const auto files = gwtest::scenario_manifest()["files"];
  std::vector<std::string> uploads;
  for (const char* name : {"valid.dcm", "valid2.dcm", "ood.dcm"}) {
    const auto bytes = gwtest::scenario_file(name);
    uploads.push_back(bytes);
    const auto grid = dicom::extract_pixels(dicom::parse_part10(bytes_of(bytes)));
    const auto img = nn::preprocess(grid, gw->models().ood.input_shape[0], gw->models().ood.input_shape[1]);
    const double score = ood::gate(img, gw->models().ood, 0.0).in_dist_prob;
    c.expect(score == files[name]["in_dist_prob"].get<double>(), std::string(name) + ": score drifted");
    bool prev = true;
    for (int i = 0; i <= 100; ++i) {
      const double t = i / 100.0;
      const bool acc = ood::gate(img, gw->models().ood, t).accepted;
      c.expect(prev || !acc, std::string(name) + ": acceptance not monotone at t=" + format_double(t));
      c.expect(acc == (score >= t), std::string(name) + ": decision disagrees with score at t=" + format_double(t));
      prev = acc;
    }
    c.expect(ood::gate(img, gw->models().ood, cfg.ood_threshold).accepted == files[name]["accepted"].get<bool>(),
             std::string(name) + ": decision at the scenario threshold");
  }
  gateway::HttpServer server(*gw);
  const int port = server.bind_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client http("127.0.0.1", port);
  uploads.push_back(gwtest::scenario_file("truncated.dcm"));
  http.set_read_timeout(10, 0);
  const auto posted =
      http.Post("/studies", gateway::build_multipart(uploads, gwtest::kBoundary), gwtest::stow_content_type().c_str());
  c.expect(posted && posted->status == 200,
           "STOW failed: " + (posted ? std::to_string(posted->status) + " " + posted->body : httplib::to_string(posted.error())));

  const auto sops_of = [&](const std::string& query) {
    std::set<std::string> out;
    const auto r = http.Get("/predictions" + query);
    if (!r || r->status != 200) {
      c.expect(false, "GET /predictions" + query + " failed: " +
                          (r ? std::to_string(r->status) : httplib::to_string(r.error())));
      return out;
    }
    const auto listing = json::parse(r->body);
    for (const auto& rec : listing["records"]) out.insert(rec["sop_instance_uid"].get<std::string>());
    return out;
  };
  c.expect(sops_of("?status=rejected_ood") == std::set<std::string>{files["ood.dcm"]["sop"]},
           "rejected_ood filter");
  c.expect(sops_of("?status=accepted") ==
               std::set<std::string>{files["valid.dcm"]["sop"], files["valid2.dcm"]["sop"]},
           "accepted filter");
  c.expect(sops_of("").size() == 3, "unfiltered listing");
  const auto bad = http.Get("/predictions?status=unknown");
  c.expect(bad && bad->status == 400, "unknown status is not rejected");
  server.stop();
  th.join();
}

void augmentation(Checker& c) {
  const auto in = testpaths::scratch("accept-aug-in");
  const auto manifest = testimg::write_corpus(in, 50);
  const int saved = omp_get_max_threads();
  const augment::AugmentPlan plan{.seed = 20240611, .variants_per_image = 5, .ranges = {}};
  omp_set_num_threads(1);
  const auto a = testpaths::scratch("accept-aug-a");
  const auto ra = augment::augment_batch(manifest, a, plan);
  omp_set_num_threads(4);
  const auto b = testpaths::scratch("accept-aug-b");
  augment::augment_batch(manifest, b, plan);
  omp_set_num_threads(saved);
  c.expect(ra.written == 250 && ra.errors.empty(), "batch wrote " + std::to_string(ra.written));
  c.expect(tree(a) == tree(b), "same seed gave different trees");

  for (int i = 0; i < 50; ++i) {
    const auto g = augment::decode_image(read_file(in / ("img" + std::to_string(i) + ".pgm")));
    c.expect(augment::vflip(augment::vflip(g)) == g, "vflip is not an involution");
    if (i % 10 != 0) continue;
    double prev = std::numeric_limits<double>::infinity();
    for (int q = 30; q <= 90; q += 5) {
      const double e = testimg::mse(g, augment::jpeg_noise(g, q));
      c.expect(e <= prev, "jpeg_noise error rose at quality " + std::to_string(q));
      prev = e;
    }
  }
}

void manifest_boundary(Checker& c) {
  const auto row = [](int age) {
    return dataset::read_manifest(std::string(dataset::kManifestHeader) + "\na.pgm,COVID-19,PA," +
                                  std::to_string(age) + ",true\n");
  };
  const dataset::FilterOptions opt{15, false};
  c.expect(dataset::filter_manifest(row(14), opt).kept.empty(), "age 14 kept");
  c.expect(dataset::filter_manifest(row(14), opt).dropped_age == 1, "age 14 not counted as dropped");
  c.expect(dataset::filter_manifest(row(15), opt).kept.size() == 1, "age 15 dropped");
  const auto fx = testpaths::fixtures() / "manifest";
  const auto out = testpaths::scratch("accept-manifest") / "out.csv";
  const auto [code, _] = run_cli("manifest filter \"" + (fx / "input_20.csv").string() +
                                 "\" --min-age 15 --require-quality --out \"" + out.string() + "\"");
  c.expect(code == 0 && read_text_file(out) == read_text_file(fx / "expected_13.csv"),
           "20-row fixture does not filter to the hand-checked 13 rows");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"f1-formula-lock", 1.0, f1_lock},
      {"ap-brute-force-oracle", 10.0, ap_oracle},
      {"inference-kernel-oracles", 30.0, kernel_oracles},
      {"dicom-corpus-round-trip", 5.0, dicom_round_trip},
      {"stow-wado-end-to-end", 10.0, end_to_end},
      {"ood-sweep-and-queue-filter", 5.0, ood_sweep_and_queue},
      {"augmentation-determinism", 30.0, augmentation},
      {"manifest-age-boundary", 1.0, manifest_boundary},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Checker c;
    std::string error;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.3fs/%.0fs", secs, cr.limit_s);
    const bool ok = error.empty() && c.ok() && secs < cr.limit_s;
    failed += !ok;
    std::cout << (ok ? "PASS " : "FAIL ") << cr.name << " (" << timing << ", " << c.checks() << " checks)";
    if (!error.empty()) std::cout << ": exception: " << error;
    if (!c.ok()) std::cout << ": " << c.summary();
    if (secs >= cr.limit_s) std::cout << ": over time limit";
    std::cout << '\n';
  }
  return failed == 0 ? 0 : 1;
}
