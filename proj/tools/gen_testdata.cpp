// Regenerates the committed fixtures under testdata/. The DICOM corpus is
// written byte by byte here, without the library serializer, so codec tests
// compare against an encoder they do not share code with.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cxr/common/io.hpp"
#include "cxr/common/rng.hpp"
#include "cxr/dicom/part10.hpp"
#include "cxr/dicom/pixels.hpp"
#include "cxr/dicom/sr.hpp"
#include "cxr/gateway/pipeline.hpp"
#include "cxr/nn/demo_models.hpp"

namespace fs = std::filesystem;
using namespace cxr;
using Bytes = std::vector<std::uint8_t>;

namespace {

// ---- raw explicit VR little endian writer --------------------------------

void put16(Bytes& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v & 0xFF));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(Bytes& b, std::uint32_t v) {
  put16(b, static_cast<std::uint16_t>(v & 0xFFFF));
  put16(b, static_cast<std::uint16_t>(v >> 16));
}

bool long_vr(const std::string& vr) { return vr == "OB" || vr == "OW" || vr == "SQ" || vr == "UT"; }

void raw_element(Bytes& b, std::uint16_t g, std::uint16_t e, const std::string& vr,
                 const Bytes& value, std::optional<std::uint32_t> length = std::nullopt) {
  put16(b, g);
  put16(b, e);
  b.push_back(static_cast<std::uint8_t>(vr[0]));
  b.push_back(static_cast<std::uint8_t>(vr[1]));
  const auto len = length.value_or(static_cast<std::uint32_t>(value.size()));
  if (long_vr(vr)) {
    put16(b, 0);
    put32(b, len);
  } else {
    put16(b, static_cast<std::uint16_t>(len));
  }
  b.insert(b.end(), value.begin(), value.end());
}

Bytes text(const std::string& s, char pad) {
  Bytes v(s.begin(), s.end());
  if (v.size() % 2) v.push_back(static_cast<std::uint8_t>(pad));
  return v;
}

Bytes uid(const std::string& s) { return text(s, '\0'); }
Bytes str(const std::string& s) { return text(s, ' '); }

Bytes us(std::uint16_t v) {
  Bytes b;
  put16(b, v);
  return b;
}

struct Elem {
  std::uint16_t g, e;
  std::string vr;
  Bytes value;
  std::optional<std::uint32_t> length;
};

struct RawSpec {
  std::string transfer_syntax = "1.2.840.10008.1.2.1";
  bool group_length = true;
  std::string sop_class = "1.2.840.10008.5.1.4.1.1.1.1";
  std::string sop_instance;
  std::vector<Elem> dataset;
};

Bytes raw_file(const RawSpec& s) {
  Bytes meta;
  raw_element(meta, 0x0002, 0x0001, "OB", Bytes{0x00, 0x01});
  raw_element(meta, 0x0002, 0x0002, "UI", uid(s.sop_class));
  raw_element(meta, 0x0002, 0x0003, "UI", uid(s.sop_instance));
  raw_element(meta, 0x0002, 0x0010, "UI", uid(s.transfer_syntax));
  raw_element(meta, 0x0002, 0x0012, "UI", uid("2.25.1769420151"));

  Bytes out(128, 0);
  for (char c : std::string("DICM")) out.push_back(static_cast<std::uint8_t>(c));
  if (s.group_length) {
    Bytes len;
    put32(len, static_cast<std::uint32_t>(meta.size()));
    raw_element(out, 0x0002, 0x0000, "UL", len);
  }
  out.insert(out.end(), meta.begin(), meta.end());
  for (const auto& el : s.dataset) raw_element(out, el.g, el.e, el.vr, el.value, el.length);
  return out;
}

// ---- synthetic images ------------------------------------------------------

struct Synthetic {
  std::uint32_t rows, cols;
  std::uint16_t bits;
  std::vector<std::uint16_t> samples;  // display orientation: high = bright
};

// Chest-like phantom: bright body ellipse, two dark lung fields, bright spine.
Synthetic phantom(std::uint32_t rows, std::uint32_t cols, std::uint16_t bits, std::uint64_t seed) {
  Synthetic s{rows, cols, bits, std::vector<std::uint16_t>(std::size_t{rows} * cols)};
  XorShift64Star rng(seed);
  const double max = bits == 8 ? 255.0 : 65535.0;
  for (std::uint32_t y = 0; y < rows; ++y) {
    for (std::uint32_t x = 0; x < cols; ++x) {
      const double u = (x + 0.5) / cols, v = (y + 0.5) / rows;
      double level = 40.0 / 255.0;
      if (std::pow((u - 0.5) / 0.41, 2) + std::pow((v - 0.55) / 0.47, 2) < 1) level = 200.0 / 255.0;
      for (double cx : {0.31, 0.69}) {
        if (std::pow((u - cx) / 0.16, 2) + std::pow((v - 0.5) / 0.3, 2) < 1) level = 70.0 / 255.0;
      }
      if (std::abs(u - 0.5) < 0.047) level = 230.0 / 255.0;
      level += (rng.uniform() - 0.5) * 24.0 / 255.0;
      s.samples[std::size_t{y} * cols + x] =
          static_cast<std::uint16_t>(std::lround(std::clamp(level, 0.0, 1.0) * max));
    }
  }
  return s;
}

Synthetic checkerboard(std::uint32_t rows, std::uint32_t cols, std::uint32_t cell) {
  Synthetic s{rows, cols, 8, std::vector<std::uint16_t>(std::size_t{rows} * cols)};
  for (std::uint32_t y = 0; y < rows; ++y) {
    for (std::uint32_t x = 0; x < cols; ++x) {
      s.samples[std::size_t{y} * cols + x] = ((x / cell + y / cell) % 2) ? 255 : 0;
    }
  }
  return s;
}

Bytes pixel_bytes(const Synthetic& s, bool monochrome1) {
  Bytes b;
  const std::uint16_t max = s.bits == 8 ? 255 : 65535;
  for (auto v : s.samples) {
    const std::uint16_t stored = monochrome1 ? static_cast<std::uint16_t>(max - v) : v;
    if (s.bits == 8) {
      b.push_back(static_cast<std::uint8_t>(stored));
    } else {
      put16(b, stored);
    }
  }
  if (b.size() % 2) b.push_back(0);
  return b;
}

// FNV-1a over the stored samples as little-endian u16, as extract_pixels
// returns them.
std::string samples_hash(const Synthetic& s, bool monochrome1) {
  Bytes b;
  const std::uint16_t max = s.bits == 8 ? 255 : 65535;
  for (auto v : s.samples) put16(b, monochrome1 ? static_cast<std::uint16_t>(max - v) : v);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(b.data(), b.size())));
  return buf;
}

struct ImageOpts {
  bool monochrome1 = false;
  std::string view;
  bool with_sequence = false;
  bool with_ut = false;
};

std::string nth_uid(std::uint64_t n) { return "2.25." + std::to_string(900000000000ULL + n); }

RawSpec image_spec(const Synthetic& s, std::uint64_t n, const ImageOpts& o) {
  RawSpec spec;
  spec.sop_instance = nth_uid(n * 10 + 3);
  auto& d = spec.dataset;
  d.push_back({0x0008, 0x0016, "UI", uid(spec.sop_class), {}});
  d.push_back({0x0008, 0x0018, "UI", uid(spec.sop_instance), {}});
  d.push_back({0x0008, 0x0060, "CS", str("DX"), {}});
  if (o.with_sequence) {
    Bytes item_body;
    raw_element(item_body, 0x0008, 0x1150, "UI", uid(spec.sop_class));
    raw_element(item_body, 0x0008, 0x1155, "UI", uid(nth_uid(n * 10 + 9)));
    Bytes seq;
    put16(seq, 0xFFFE);
    put16(seq, 0xE000);
    put32(seq, static_cast<std::uint32_t>(item_body.size()));
    seq.insert(seq.end(), item_body.begin(), item_body.end());
    d.push_back({0x0008, 0x1140, "SQ", seq, {}});
  }
  d.push_back({0x0010, 0x0020, "LO", str("SYN" + std::to_string(n)), {}});
  if (!o.view.empty()) d.push_back({0x0018, 0x5101, "CS", str(o.view), {}});
  d.push_back({0x0020, 0x000D, "UI", uid(nth_uid(n * 10 + 1)), {}});
  d.push_back({0x0020, 0x000E, "UI", uid(nth_uid(n * 10 + 2)), {}});
  d.push_back({0x0020, 0x0013, "IS", str(std::to_string(n)), {}});
  if (o.with_ut) {
    d.push_back({0x0020, 0x4000, "UT",
                 str("Synthetic phantom; lung fields and spine only, no pathology."), {}});
  }
  d.push_back({0x0028, 0x0002, "US", us(1), {}});
  d.push_back({0x0028, 0x0004, "CS", str(o.monochrome1 ? "MONOCHROME1" : "MONOCHROME2"), {}});
  d.push_back({0x0028, 0x0010, "US", us(static_cast<std::uint16_t>(s.rows)), {}});
  d.push_back({0x0028, 0x0011, "US", us(static_cast<std::uint16_t>(s.cols)), {}});
  d.push_back({0x0028, 0x0100, "US", us(s.bits), {}});
  d.push_back({0x0028, 0x0101, "US", us(s.bits), {}});
  d.push_back({0x0028, 0x0102, "US", us(static_cast<std::uint16_t>(s.bits - 1)), {}});
  d.push_back({0x0028, 0x0103, "US", us(0), {}});
  d.push_back({0x7FE0, 0x0010, s.bits == 8 ? "OB" : "OW", pixel_bytes(s, o.monochrome1), {}});
  return spec;
}

Elem* find_elem(RawSpec& spec, std::uint16_t g, std::uint16_t e) {
  for (auto& el : spec.dataset) {
    if (el.g == g && el.e == e) return &el;
  }
  return nullptr;
}

// ---- corpus ------------------------------------------------------------------

struct Corpus {
  fs::path dir;
  int count = 0;

  void add(const std::string& name, const Bytes& bytes, nlohmann::json expect) {
    write_file_atomic(dir / (name + ".dcm"), bytes);
    expect["file"] = name + ".dcm";
    write_file_atomic(dir / (name + ".json"), expect.dump(2) + "\n");
    ++count;
  }

  void add_image(const std::string& name, const Synthetic& s, std::uint64_t n,
                 const ImageOpts& o = {}) {
    add(name, raw_file(image_spec(s, n, o)), valid_expect(s, o));
  }

  static nlohmann::json valid_expect(const Synthetic& s, const ImageOpts& o) {
    return {{"parse", "ok"},
            {"pixels", "ok"},
            {"rows", s.rows},
            {"cols", s.cols},
            {"bits_allocated", s.bits},
            {"photometric", o.monochrome1 ? "MONOCHROME1" : "MONOCHROME2"},
            {"samples_fnv1a", samples_hash(s, o.monochrome1)}};
  }
};

nlohmann::json parse_error(const std::string& code) {
  return {{"parse", code}, {"pixels", nullptr}};
}

nlohmann::json pixel_error(const std::string& code) { return {{"parse", "ok"}, {"pixels", code}}; }

void write_corpus(const fs::path& dir) {
  fs::create_directories(dir);
  Corpus c{dir};
  const auto p8 = phantom(64, 64, 8, 1);
  const auto p16 = phantom(64, 64, 16, 2);

  c.add_image("valid_8bit_mono2", p8, 1);
  c.add_image("valid_8bit_mono1", p8, 2, {.monochrome1 = true, .view = {}});
  c.add_image("valid_16bit_mono2", p16, 3);
  c.add_image("valid_16bit_mono1", p16, 4, {.monochrome1 = true, .view = {}});
  c.add_image("valid_8bit_odd_33x31", phantom(33, 31, 8, 5), 5);
  c.add_image("valid_16bit_1x1", phantom(1, 1, 16, 6), 6);
  c.add_image("valid_8bit_sequence", p8, 7, {.view = {}, .with_sequence = true});
  c.add_image("valid_8bit_ut_text", p8, 8, {.view = {}, .with_ut = true});
  c.add_image("valid_16bit_mono1_128x96", phantom(128, 96, 16, 9), 9,
              {.monochrome1 = true, .view = "AP"});
  c.add_image("valid_8bit_pa_view", phantom(96, 128, 8, 10), 10, {.view = "PA"});
  {
    auto spec = image_spec(p8, 11, {});
    spec.group_length = false;
    c.add("valid_8bit_no_group_length", raw_file(spec), Corpus::valid_expect(p8, {}));
  }
  {
    dicom::SRDocument doc;
    doc.source_sop_instance_uid = nth_uid(13);
    doc.study_instance_uid = nth_uid(11);
    doc.probabilities = {0.90, 0.06, 0.04};
    doc.model_version = "demo-cxr-3class@1.0.0";
    doc.created_at = std::chrono::system_clock::time_point(std::chrono::seconds(1700000000));
    const auto sr = dicom::build_sr(doc, dicom::seeded_uid_source(12));
    c.add("valid_sr_document", dicom::serialize_part10(sr),
          {{"parse", "ok"}, {"pixels", "MissingPixelModule"}, {"modality", "SR"}});
  }

  const auto base = raw_file(image_spec(p8, 20, {}));
  {
    Bytes b(base.begin(), base.begin() + 200);
    c.add("error_truncated_header", b, parse_error("TruncatedElement"));
  }
  {
    Bytes b(base.begin(), base.end() - 1000);
    c.add("error_truncated_pixels", b, parse_error("TruncatedElement"));
  }
  {
    Bytes b = base;
    b[128] = 'X';
    c.add("error_missing_magic", b, parse_error("MissingMagic"));
  }
  c.add("error_short_file", Bytes(100, 0), parse_error("MissingMagic"));
  {
    auto spec = image_spec(p8, 21, {});
    spec.transfer_syntax = "1.2.840.10008.1.2.4.50";
    c.add("error_jpeg_baseline", raw_file(spec), parse_error("UnsupportedTransferSyntax"));
  }
  {
    auto spec = image_spec(p8, 22, {});
    spec.transfer_syntax = "1.2.840.10008.1.2";
    c.add("error_implicit_vr", raw_file(spec), parse_error("UnsupportedTransferSyntax"));
  }
  {
    auto spec = image_spec(p8, 23, {});
    auto* modality = find_elem(spec, 0x0008, 0x0060);
    modality->value = Bytes{'D', 'X', 'X'};
    c.add("error_odd_length", raw_file(spec), parse_error("OddLength"));
  }
  {
    auto spec = image_spec(p8, 24, {});
    std::swap(spec.dataset[1], spec.dataset[2]);
    c.add("error_tag_order", raw_file(spec), parse_error("TagOrder"));
  }
  {
    auto spec = image_spec(p8, 25, {.view = {}, .with_sequence = true});
    find_elem(spec, 0x0008, 0x1140)->length = 0xFFFFFFFFu;
    c.add("error_undefined_length", raw_file(spec), parse_error("UndefinedLength"));
  }
  {
    auto spec = image_spec(p8, 26, {});
    find_elem(spec, 0x0028, 0x0010)->value = us(65);
    c.add("error_pixel_length", raw_file(spec), pixel_error("PixelLengthMismatch"));
  }
  {
    auto spec = image_spec(p8, 27, {});
    std::erase_if(spec.dataset, [](const Elem& e) { return e.g == 0x0028 && e.e == 0x0010; });
    c.add("error_missing_rows", raw_file(spec), pixel_error("MissingPixelModule"));
  }
  {
    auto spec = image_spec(p8, 28, {});
    find_elem(spec, 0x0028, 0x0100)->value = us(32);
    c.add("error_bits_allocated_32", raw_file(spec), pixel_error("UnsupportedPixelFormat"));
  }
  {
    auto spec = image_spec(p8, 29, {});
    find_elem(spec, 0x0008, 0x0060)->vr = "XX";
    c.add("error_unknown_vr", raw_file(spec), parse_error("UnsupportedVR"));
  }
  std::cout << "corpus: " << c.count << " files in " << dir.string() << "\n";
}

// ---- models and scenario -----------------------------------------------------

dicom::ImageGrid to_grid(const Synthetic& s, dicom::Photometric p) {
  dicom::ImageGrid g;
  g.rows = s.rows;
  g.cols = s.cols;
  g.bits_allocated = s.bits;
  g.photometric = dicom::Photometric::Monochrome2;
  g.samples = s.samples;
  return dicom::with_photometric(std::move(g), p);
}

Bytes image_file(const dicom::ImageGrid& g, std::uint64_t seed, const std::string& view) {
  auto id = dicom::seeded_identity(g, seed);
  id.view_position = view;
  return dicom::serialize_part10(dicom::make_image_object(g, id));
}

void write_models_and_scenario(const fs::path& models_dir, const fs::path& scenario_dir) {
  fs::create_directories(models_dir);
  fs::create_directories(scenario_dir);
  gateway::Models m;
  m.classifier = nn::make_demo_model(nn::kDemoCxrModel);
  m.ood = nn::make_demo_model(nn::kDemoOodModel);
  m.threshold = ood::kDefaultThreshold;
  write_file_atomic(models_dir / "demo-cxr-3class.cbmf", nn::save_model(m.classifier));
  write_file_atomic(models_dir / "demo-ood-2class.cbmf", nn::save_model(m.ood));

  const auto valid = to_grid(phantom(128, 128, 8, 101), dicom::Photometric::Monochrome2);
  const auto valid2 = to_grid(phantom(160, 128, 16, 102), dicom::Photometric::Monochrome1);
  const auto third = to_grid(phantom(128, 128, 8, 103), dicom::Photometric::Monochrome2);
  const auto ood_img = to_grid(checkerboard(128, 128, 16), dicom::Photometric::Monochrome2);

  struct Item {
    const char* name;
    const dicom::ImageGrid* grid;
    std::uint64_t seed;
    bool expect_accept;
  };
  const Item items[] = {{"valid", &valid, 1, true},
                        {"valid2", &valid2, 2, true},
                        {"ood", &ood_img, 4, false}};
  nlohmann::json manifest = {{"threshold", m.threshold}, {"files", nlohmann::json::object()}};
  for (const auto& it : items) {
    const auto bytes = image_file(*it.grid, it.seed, "PA");
    write_file_atomic(scenario_dir / (std::string(it.name) + ".dcm"), bytes);
    const auto r = gateway::run_pipeline(*it.grid, m);
    if (r.gate.accepted != it.expect_accept) {
      throw std::runtime_error(std::string(it.name) + ": gate decision does not match the scenario");
    }
    const auto obj = dicom::parse_part10(bytes);
    manifest["files"][std::string(it.name) + ".dcm"] = {
        {"sop", obj.get_string(dicom::tags::kSopInstanceUid)},
        {"study", obj.get_string(dicom::tags::kStudyInstanceUid)},
        {"in_dist_prob", r.gate.in_dist_prob},
        {"accepted", r.gate.accepted}};
    if (std::string(it.name) == "valid") {
      write_file_atomic(models_dir / "golden_valid_classify.json",
                        gateway::result_to_json(r).dump(2) + "\n");
    }
  }
  const auto third_bytes = image_file(third, 3, "PA");
  Bytes truncated(third_bytes.begin(), third_bytes.begin() + third_bytes.size() / 2);
  write_file_atomic(scenario_dir / "truncated.dcm", truncated);
  manifest["files"]["truncated.dcm"] = {{"error", "TruncatedElement"}};
  write_file_atomic(scenario_dir / "scenario.json", manifest.dump(2) + "\n");
  std::cout << "models and scenario written\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regenerate committed test fixtures"};
  fs::path root = "testdata";
  app.add_option("--root", root, "testdata directory");
  CLI11_PARSE(app, argc, argv);
  try {
    write_corpus(root / "dicom");
    write_models_and_scenario(root / "models", root / "scenario");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
