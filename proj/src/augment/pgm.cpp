#include "cxr/augment/pgm.hpp"

#include <cctype>
#include <string>

namespace cxr::augment {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> b) : b_(b) {}

  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(b_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint32_t number(const char* what) {
    skip_space_and_comments();
    std::uint64_t v = 0;
    std::size_t digits = 0;
    while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
      v = v * 10 + (b_[pos_++] - '0');
      if (v > 0xFFFFFFFFu) throw PgmError(std::string("PGM ") + what + " too large");
      ++digits;
    }
    if (digits == 0) throw PgmError(std::string("PGM header: missing ") + what);
    return static_cast<std::uint32_t>(v);
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }

 private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 2;
};

}  // namespace

bool looks_like_pgm(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5';
}

dicom::ImageGrid read_pgm(std::span<const std::uint8_t> bytes) {
  if (!looks_like_pgm(bytes)) throw PgmError("not a binary PGM (P5)");
  HeaderReader h(bytes);
  dicom::ImageGrid g;
  g.cols = h.number("width");
  g.rows = h.number("height");
  const std::uint32_t maxval = h.number("maxval");
  if (g.cols == 0 || g.rows == 0) throw PgmError("PGM has zero dimension");
  if (maxval == 0 || maxval > 65535) throw PgmError("PGM maxval out of range");
  if (h.pos() >= bytes.size() || !std::isspace(bytes[h.pos()])) {
    throw PgmError("PGM header not terminated by whitespace");
  }
  h.advance();
  g.bits_allocated = maxval <= 255 ? 8 : 16;
  g.photometric = dicom::Photometric::Monochrome2;
  const std::size_t count = static_cast<std::size_t>(g.rows) * g.cols;
  const std::size_t bps = g.bits_allocated / 8;
  if (bytes.size() - h.pos() < count * bps) throw PgmError("PGM pixel data truncated");
  g.samples.resize(count);
  const auto* p = bytes.data() + h.pos();
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t v = bps == 1 ? p[i] : (p[2 * i] << 8) | p[2 * i + 1];
    if (v > maxval) throw PgmError("PGM sample exceeds maxval");
    g.samples[i] = static_cast<std::uint16_t>(v);
  }
  return g;
}

std::vector<std::uint8_t> write_pgm(const dicom::ImageGrid& grid) {
  grid.validate();
  const std::string header = "P5\n" + std::to_string(grid.cols) + " " +
                             std::to_string(grid.rows) + "\n" +
                             std::to_string(grid.max_value()) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  if (grid.bits_allocated == 8) {
    for (auto s : grid.samples) out.push_back(static_cast<std::uint8_t>(s));
  } else {
    for (auto s : grid.samples) {
      out.push_back(static_cast<std::uint8_t>(s >> 8));
      out.push_back(static_cast<std::uint8_t>(s & 0xFF));
    }
  }
  return out;
}

}  // namespace cxr::augment

#include "cxr/dicom/part10.hpp"

namespace cxr::augment {

dicom::ImageGrid decode_image(std::span<const std::uint8_t> bytes) {
  if (looks_like_pgm(bytes)) return read_pgm(bytes);
  return dicom::extract_pixels(dicom::parse_part10(bytes));
}

}  // namespace cxr::augment
