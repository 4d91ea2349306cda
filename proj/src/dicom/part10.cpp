#include "cxr/dicom/part10.hpp"

#include <algorithm>
#include <cstring>

#include "cxr/dicom/errors.hpp"

namespace cxr::dicom {

namespace {

constexpr std::size_t kPreambleSize = 128;
constexpr std::uint32_t kUndefinedLength = 0xFFFFFFFFu;

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, std::size_t pos) : bytes_(bytes), pos_(pos) {}

  bool done() const { return pos_ >= bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t offset() const { return pos_; }

  std::uint16_t peek_group() const {
    return static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
  }

  std::uint16_t u16() {
    auto v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }

  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }

  char ch() { return static_cast<char>(bytes_[pos_++]); }

  std::span<const std::uint8_t> take(std::size_t n) {
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
};

DataElement read_element(Reader& r) {
  const std::size_t start = r.offset();
  if (r.remaining() < 8) {
    throw DicomError(ErrorCode::TruncatedElement,
                     "element header at offset " + std::to_string(start) + " cut short");
  }
  Tag tag;
  tag.group = r.u16();
  tag.element = r.u16();
  const char a = r.ch();
  const char b = r.ch();
  auto vr = parse_vr(a, b);
  if (!vr) {
    throw DicomError(ErrorCode::UnsupportedVR,
                     tag.str() + " has VR '" + std::string{a, b} + "'");
  }
  std::uint32_t length;
  if (has_long_length(*vr)) {
    if (r.remaining() < 6) {
      throw DicomError(ErrorCode::TruncatedElement, tag.str() + " long header cut short");
    }
    r.u16();  // reserved
    length = r.u32();
  } else {
    length = r.u16();
  }
  if (length == kUndefinedLength) {
    throw DicomError(ErrorCode::UndefinedLength, tag.str() + " uses undefined length");
  }
  if (length > r.remaining()) {
    throw DicomError(ErrorCode::TruncatedElement,
                     tag.str() + " declares " + std::to_string(length) + " bytes, " +
                         std::to_string(r.remaining()) + " remain");
  }
  if (length % 2 != 0) {
    throw DicomError(ErrorCode::OddLength,
                     tag.str() + " has odd length " + std::to_string(length));
  }
  auto value = r.take(length);
  return DataElement{tag, *vr, std::vector<std::uint8_t>(value.begin(), value.end())};
}

void check_ascending(const std::vector<DataElement>& list, const char* where) {
  for (std::size_t i = 1; i < list.size(); ++i) {
    if (!(list[i - 1].tag < list[i].tag)) {
      throw DicomError(ErrorCode::TagOrder, std::string(where) + ": " + list[i].tag.str() +
                                                " follows " + list[i - 1].tag.str());
    }
  }
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::size_t padded_size(const DataElement& e) { return e.value.size() + e.value.size() % 2; }

std::size_t encoded_size(const DataElement& e) {
  return (has_long_length(e.vr) ? 12 : 8) + padded_size(e);
}

void encode_element(std::vector<std::uint8_t>& out, const DataElement& e) {
  const std::size_t len = padded_size(e);
  if (!has_long_length(e.vr) && len > 0xFFFF) {
    throw DicomError(ErrorCode::InvariantViolation,
                     e.tag.str() + " value too long for VR " + std::string(vr_name(e.vr)));
  }
  if (len >= kUndefinedLength) {
    throw DicomError(ErrorCode::InvariantViolation, e.tag.str() + " value too long");
  }
  put_u16(out, e.tag.group);
  put_u16(out, e.tag.element);
  auto name = vr_name(e.vr);
  out.push_back(static_cast<std::uint8_t>(name[0]));
  out.push_back(static_cast<std::uint8_t>(name[1]));
  if (has_long_length(e.vr)) {
    put_u16(out, 0);
    put_u32(out, static_cast<std::uint32_t>(len));
  } else {
    put_u16(out, static_cast<std::uint16_t>(len));
  }
  out.insert(out.end(), e.value.begin(), e.value.end());
  if (e.value.size() % 2 != 0) out.push_back(pad_byte(e.vr));
}

}  // namespace

DicomObject parse_part10(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPreambleSize + 4 ||
      std::memcmp(bytes.data() + kPreambleSize, "DICM", 4) != 0) {
    throw DicomError(ErrorCode::MissingMagic, "no DICM marker at offset 128");
  }
  Reader r(bytes, kPreambleSize + 4);
  DicomObject obj;
  while (r.remaining() >= 2 && r.peek_group() == 0x0002) {
    obj.meta.push_back(read_element(r));
  }
  check_ascending(obj.meta, "file meta");

  const DataElement* ts = nullptr;
  for (const auto& e : obj.meta) {
    if (e.tag == tags::kTransferSyntaxUid) ts = &e;
  }
  if (ts == nullptr) {
    throw DicomError(ErrorCode::UnsupportedTransferSyntax, "file meta has no transfer syntax");
  }
  obj.transfer_syntax = ts->as_string();
  if (obj.transfer_syntax != kExplicitVrLittleEndian) {
    throw DicomError(ErrorCode::UnsupportedTransferSyntax, obj.transfer_syntax);
  }

  while (!r.done()) obj.dataset.push_back(read_element(r));
  check_ascending(obj.dataset, "dataset");
  return obj;
}

std::vector<std::uint8_t> serialize_part10(const DicomObject& obj) {
  if (obj.find(tags::kSopClassUid) == nullptr || obj.find(tags::kSopInstanceUid) == nullptr) {
    throw DicomError(ErrorCode::InvariantViolation,
                     "dataset lacks SOPClassUID or SOPInstanceUID");
  }
  if (obj.transfer_syntax != kExplicitVrLittleEndian) {
    throw DicomError(ErrorCode::UnsupportedTransferSyntax, obj.transfer_syntax);
  }
  check_ascending(obj.meta, "file meta");
  check_ascending(obj.dataset, "dataset");
  for (const auto& e : obj.meta) {
    if (e.tag.group != 0x0002) {
      throw DicomError(ErrorCode::InvariantViolation, e.tag.str() + " in file meta");
    }
  }
  for (const auto& e : obj.dataset) {
    if (e.tag.group <= 0x0002) {
      throw DicomError(ErrorCode::InvariantViolation, e.tag.str() + " in dataset");
    }
  }

  std::vector<std::uint8_t> out(kPreambleSize + 4, 0);
  std::memcpy(out.data() + kPreambleSize, "DICM", 4);
  for (const auto& e : obj.meta) {
    if (e.tag == tags::kFileMetaGroupLength) {
      std::size_t rest = 0;
      for (const auto& m : obj.meta) {
        if (m.tag != tags::kFileMetaGroupLength) rest += encoded_size(m);
      }
      encode_element(out, DataElement::u32(e.tag, static_cast<std::uint32_t>(rest)));
    } else {
      encode_element(out, e);
    }
  }
  for (const auto& e : obj.dataset) encode_element(out, e);
  return out;
}

std::vector<DataElement> parse_element_stream(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, 0);
  std::vector<DataElement> out;
  while (!r.done()) out.push_back(read_element(r));
  check_ascending(out, "element stream");
  return out;
}

std::vector<std::uint8_t> encode_element_stream(std::span<const DataElement> elements) {
  std::vector<std::uint8_t> out;
  for (const auto& e : elements) encode_element(out, e);
  return out;
}

std::vector<std::uint8_t> encode_sequence(std::span<const std::vector<DataElement>> items) {
  std::vector<std::uint8_t> out;
  for (const auto& item : items) {
    auto body = encode_element_stream(item);
    put_u16(out, tags::kItem.group);
    put_u16(out, tags::kItem.element);
    put_u32(out, static_cast<std::uint32_t>(body.size()));
    out.insert(out.end(), body.begin(), body.end());
  }
  return out;
}

std::vector<std::vector<DataElement>> decode_sequence(std::span<const std::uint8_t> value) {
  Reader r(value, 0);
  std::vector<std::vector<DataElement>> items;
  while (!r.done()) {
    if (r.remaining() < 8) throw DicomError(ErrorCode::TruncatedElement, "item header cut short");
    Tag tag;
    tag.group = r.u16();
    tag.element = r.u16();
    if (tag != tags::kItem) {
      throw DicomError(ErrorCode::InvariantViolation, "expected item tag, got " + tag.str());
    }
    const std::uint32_t length = r.u32();
    if (length == kUndefinedLength) {
      throw DicomError(ErrorCode::UndefinedLength, "sequence item uses undefined length");
    }
    if (length > r.remaining()) {
      throw DicomError(ErrorCode::TruncatedElement, "sequence item exceeds value");
    }
    items.push_back(parse_element_stream(r.take(length)));
  }
  return items;
}

std::vector<DataElement> make_file_meta(std::string_view sop_class_uid,
                                        std::string_view sop_instance_uid) {
  std::vector<DataElement> meta;
  meta.push_back(DataElement::u32(tags::kFileMetaGroupLength, 0));
  meta.push_back(DataElement::bytes(tags::kFileMetaVersion, VR::OB, {0x00, 0x01}));
  meta.push_back(DataElement::text(tags::kMediaStorageSopClassUid, VR::UI, sop_class_uid));
  meta.push_back(DataElement::text(tags::kMediaStorageSopInstanceUid, VR::UI, sop_instance_uid));
  meta.push_back(DataElement::text(tags::kTransferSyntaxUid, VR::UI, kExplicitVrLittleEndian));
  meta.push_back(DataElement::text(tags::kImplementationClassUid, VR::UI, "2.25.1769420151"));
  std::size_t rest = 0;
  for (std::size_t i = 1; i < meta.size(); ++i) rest += encoded_size(meta[i]);
  meta[0] = DataElement::u32(tags::kFileMetaGroupLength, static_cast<std::uint32_t>(rest));
  return meta;
}

}  // namespace cxr::dicom
