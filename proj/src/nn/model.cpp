#include "cxr/nn/model.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <map>
#include <sstream>

#include "cxr/nn/errors.hpp"
#include "cxr/nn/kernels.hpp"

namespace cxr::nn {

namespace {

constexpr std::array<std::string_view, 7> kKindNames = {
    "conv2d", "maxpool2d", "relu", "flatten", "dense", "globalavgpool", "softmax"};

NnError schema(const std::string& detail, std::optional<std::size_t> layer = std::nullopt) {
  return NnError(ErrorCode::SchemaError, detail, layer);
}

std::string field_msg(const LayerSpec& l, const std::string& field, const std::string& what) {
  return std::string(layer_kind_name(l.kind)) + " field '" + field + "': " + what;
}

void check_tensor(const LayerSpec& l, std::size_t index, const Tensor& t,
                  const std::vector<std::size_t>& expected, const char* field) {
  if (t.size() != element_count(expected)) {
    throw schema(field_msg(l, field,
                           "has " + std::to_string(t.size()) + " values, expected " +
                               std::to_string(element_count(expected)) + " for shape " +
                               shape_str(expected)),
                 index);
  }
  if (t.shape() != expected) {
    throw schema(field_msg(l, field,
                           "shape " + shape_str(t.shape()) + ", expected " + shape_str(expected)),
                 index);
  }
  if (!t.all_finite()) throw schema(field_msg(l, field, "non-finite value"), index);
}

// Shape of the parameter tensors for layer `l` given its input shape.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> param_shapes(
    const LayerSpec& l, const std::vector<std::size_t>& in) {
  if (l.kind == LayerKind::Conv2d) {
    return {{l.out_channels, in.empty() ? 0 : in[0], l.kernel_h, l.kernel_w}, {l.out_channels}};
  }
  return {{l.out_features, in.empty() ? 0 : in[0]}, {l.out_features}};
}

// Returns the output shape of layer `index`, throwing SchemaError on any
// inconsistency.
std::vector<std::size_t> check_layer(const LayerSpec& l, std::size_t index,
                                     const std::vector<std::size_t>& in) {
  auto wrap = [&](auto&& fn) {
    try {
      return fn();
    } catch (const NnError& e) {
      throw schema(std::string(layer_kind_name(l.kind)) + ": " + e.what(), index);
    }
  };
  switch (l.kind) {
    case LayerKind::Conv2d: {
      if (l.out_channels == 0) throw schema(field_msg(l, "out_channels", "must be > 0"), index);
      if (l.kernel_h == 0 || l.kernel_w == 0) {
        throw schema(field_msg(l, "kernel", "must be > 0"), index);
      }
      if (l.stride == 0) throw schema(field_msg(l, "stride", "must be > 0"), index);
      if (in.size() != 3) throw schema(field_msg(l, "input", "needs [C,H,W]"), index);
      auto [ws, bs] = param_shapes(l, in);
      check_tensor(l, index, l.weights, ws, "weights");
      check_tensor(l, index, l.bias, bs, "bias");
      return wrap([&] { return conv2d_output_shape(in, ws, bs, {l.stride, l.pad}); });
    }
    case LayerKind::MaxPool2d:
      if (l.window == 0) throw schema(field_msg(l, "window", "must be > 0"), index);
      if (l.stride == 0) throw schema(field_msg(l, "stride", "must be > 0"), index);
      return wrap([&] { return maxpool2d_output_shape(in, l.window, l.stride); });
    case LayerKind::Dense: {
      if (l.out_features == 0) throw schema(field_msg(l, "out_features", "must be > 0"), index);
      if (in.size() != 1) {
        throw schema(field_msg(l, "input", "needs a vector, got " + shape_str(in)), index);
      }
      auto [ws, bs] = param_shapes(l, in);
      check_tensor(l, index, l.weights, ws, "weights");
      check_tensor(l, index, l.bias, bs, "bias");
      return {l.out_features};
    }
    case LayerKind::Relu:
      return in;
    case LayerKind::Flatten:
      return {element_count(in)};
    case LayerKind::GlobalAvgPool:
      if (in.size() != 3) throw schema(field_msg(l, "input", "needs [C,H,W]"), index);
      return {in[0]};
    case LayerKind::Softmax:
      if (in.size() != 1) {
        throw schema(field_msg(l, "input", "needs a vector, got " + shape_str(in)), index);
      }
      return in;
  }
  return in;
}

// Little-endian byte helpers.
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_tensor(std::vector<std::uint8_t>& out, const Tensor& t) {
  put_u64(out, t.size());
  for (double v : t.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> b) : b_(b) {}

  std::uint64_t uint(int width, const char* what) {
    if (b_.size() - pos_ < static_cast<std::size_t>(width)) {
      throw schema(std::string("file truncated reading ") + what);
    }
    std::uint64_t v = 0;
    for (int i = width - 1; i >= 0; --i) v = (v << 8) | b_[pos_ + i];
    pos_ += width;
    return v;
  }

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    if (b_.size() - pos_ < n) throw schema(std::string("file truncated reading ") + what);
    auto s = b_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return b_.size() - pos_; }

 private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

std::size_t parse_size(std::string_view s, const std::string& what,
                       std::optional<std::size_t> layer = std::nullopt) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw schema("field '" + what + "': bad integer '" + std::string(s) + "'", layer);
  }
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string layer_header(const LayerSpec& l) {
  std::string s(layer_kind_name(l.kind));
  switch (l.kind) {
    case LayerKind::Conv2d:
      s += " out_channels=" + std::to_string(l.out_channels) +
           " kernel=" + std::to_string(l.kernel_h) + "x" + std::to_string(l.kernel_w) +
           " stride=" + std::to_string(l.stride) + " pad=" + std::to_string(l.pad);
      break;
    case LayerKind::MaxPool2d:
      s += " window=" + std::to_string(l.window) + " stride=" + std::to_string(l.stride);
      break;
    case LayerKind::Dense:
      s += " out_features=" + std::to_string(l.out_features);
      break;
    default:
      break;
  }
  return s;
}

LayerSpec parse_layer_header(std::string_view text, std::size_t index) {
  auto parts = split(text, ' ');
  LayerSpec l;
  try {
    l.kind = parse_layer_kind(parts.at(0));
  } catch (const NnError& e) {
    throw schema(e.what(), index);
  }
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].empty()) continue;
    auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw schema("malformed field '" + parts[i] + "'", index);
    const std::string key = parts[i].substr(0, eq);
    const std::string val = parts[i].substr(eq + 1);
    if (key == "out_channels" && l.kind == LayerKind::Conv2d) {
      l.out_channels = parse_size(val, key, index);
    } else if (key == "kernel" && l.kind == LayerKind::Conv2d) {
      auto hw = split(val, 'x');
      if (hw.size() != 2) throw schema("field 'kernel': expected HxW", index);
      l.kernel_h = parse_size(hw[0], key, index);
      l.kernel_w = parse_size(hw[1], key, index);
    } else if (key == "stride" &&
               (l.kind == LayerKind::Conv2d || l.kind == LayerKind::MaxPool2d)) {
      l.stride = parse_size(val, key, index);
    } else if (key == "pad" && l.kind == LayerKind::Conv2d) {
      l.pad = parse_size(val, key, index);
    } else if (key == "window" && l.kind == LayerKind::MaxPool2d) {
      l.window = parse_size(val, key, index);
    } else if (key == "out_features" && l.kind == LayerKind::Dense) {
      l.out_features = parse_size(val, key, index);
    } else {
      throw schema("unknown field '" + key + "' for " + std::string(layer_kind_name(l.kind)),
                   index);
    }
  }
  return l;
}

}  // namespace

std::string_view layer_kind_name(LayerKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

LayerKind parse_layer_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<LayerKind>(i);
  }
  throw schema("unknown layer kind '" + std::string(name) + "'");
}

void validate_model(const ModelFile& model) {
  if (model.class_labels.empty()) throw schema("field 'labels': no class labels");
  for (auto d : model.input_shape) {
    if (d == 0) throw schema("field 'input_shape': zero dimension");
  }
  if (model.layers.empty()) throw schema("field 'layers': empty layer stack");
  auto shape = model.input_chw();
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    shape = check_layer(model.layers[i], i, shape);
  }
  const std::size_t last = model.layers.size() - 1;
  if (model.layers.back().kind != LayerKind::Softmax) {
    throw schema("field 'kind': final layer must be softmax, found " +
                     std::string(layer_kind_name(model.layers.back().kind)),
                 last);
  }
  if (shape.size() != 1 || shape[0] != model.class_labels.size()) {
    throw schema("field 'labels': model emits " + shape_str(shape) + " for " +
                     std::to_string(model.class_labels.size()) + " labels",
                 last);
  }
}

std::vector<std::uint8_t> save_model(const ModelFile& model) {
  validate_model(model);
  std::ostringstream h;
  h << "name=" << model.name << "\n";
  h << "version=" << model.version << "\n";
  h << "input_shape=" << model.input_shape[0] << "," << model.input_shape[1] << ","
    << model.input_shape[2] << "\n";
  h << "labels=";
  for (std::size_t i = 0; i < model.class_labels.size(); ++i) {
    h << (i ? "|" : "") << model.class_labels[i];
  }
  h << "\n";
  h << "layers=" << model.layers.size() << "\n";
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    h << "layer." << i << "=" << layer_header(model.layers[i]) << "\n";
  }
  const std::string header = h.str();

  std::vector<std::uint8_t> out = {'C', 'B', 'M', 'F'};
  put_u32(out, kModelFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(header.size()));
  out.insert(out.end(), header.begin(), header.end());
  for (const auto& l : model.layers) {
    if (!l.has_parameters()) continue;
    put_tensor(out, l.weights);
    put_tensor(out, l.bias);
  }
  return out;
}

ModelFile load_model(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  auto magic = r.take(4, "magic");
  if (std::memcmp(magic.data(), "CBMF", 4) != 0) throw schema("field 'magic': not a CBMF file");
  const auto version = r.uint(4, "format version");
  if (version != kModelFormatVersion) {
    throw schema("field 'format_version': unsupported " + std::to_string(version));
  }
  const auto header_len = r.uint(4, "header length");
  auto header_bytes = r.take(header_len, "header");
  const std::string header(header_bytes.begin(), header_bytes.end());

  std::map<std::string, std::string> kv;
  for (const auto& line : split(header, '\n')) {
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw schema("malformed header line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto require = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw schema("field '" + key + "': missing from header");
    return it->second;
  };

  ModelFile m;
  m.name = require("name");
  m.version = require("version");
  auto dims = split(require("input_shape"), ',');
  if (dims.size() != 3) throw schema("field 'input_shape': expected H,W,C");
  for (std::size_t i = 0; i < 3; ++i) m.input_shape[i] = parse_size(dims[i], "input_shape");
  m.class_labels = split(require("labels"), '|');
  const std::size_t count = parse_size(require("layers"), "layers");
  for (std::size_t i = 0; i < count; ++i) {
    m.layers.push_back(parse_layer_header(require("layer." + std::to_string(i)), i));
  }

  // Parameter blocks are flat on disk; their shapes follow from the stack.
  auto shape = m.input_chw();
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    auto& l = m.layers[i];
    if (l.has_parameters()) {
      auto [ws, bs] = param_shapes(l, shape);
      for (auto [tensor, expected, field] :
           {std::tuple{&l.weights, ws, "weights"}, std::tuple{&l.bias, bs, "bias"}}) {
        const auto n = r.uint(8, field);
        if (n > r.remaining() / 8) {
          throw schema(field_msg(l, field, "block of " + std::to_string(n) +
                                               " values exceeds file"),
                       i);
        }
        if (n != element_count(expected)) {
          throw schema(field_msg(l, field,
                                 "has " + std::to_string(n) + " values, expected " +
                                     std::to_string(element_count(expected)) + " for shape " +
                                     shape_str(expected)),
                       i);
        }
        std::vector<double> values(n);
        for (auto& v : values) v = std::bit_cast<double>(r.uint(8, field));
        *tensor = Tensor(expected, std::move(values));
      }
    }
    shape = check_layer(l, i, shape);
  }
  if (r.remaining() != 0) {
    throw schema("field 'weights': " + std::to_string(r.remaining()) + " trailing bytes");
  }
  validate_model(m);
  return m;
}

}  // namespace cxr::nn
