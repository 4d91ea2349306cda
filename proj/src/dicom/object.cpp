#include "cxr/dicom/object.hpp"

#include <algorithm>

namespace cxr::dicom {

namespace {

auto lower(std::vector<DataElement>& list, Tag tag) {
  return std::lower_bound(list.begin(), list.end(), tag,
                          [](const DataElement& e, Tag t) { return e.tag < t; });
}

}  // namespace

const DataElement* DicomObject::find(Tag tag) const {
  const auto& list = tag.group == 0x0002 ? meta : dataset;
  for (const auto& e : list) {
    if (e.tag == tag) return &e;
  }
  return nullptr;
}

std::string DicomObject::get_string(Tag tag) const {
  const auto* e = find(tag);
  return e ? e->as_string() : std::string{};
}

void DicomObject::set(DataElement element) {
  if (element.tag == tags::kTransferSyntaxUid) transfer_syntax = element.as_string();
  auto& list = element.tag.group == 0x0002 ? meta : dataset;
  auto it = lower(list, element.tag);
  if (it != list.end() && it->tag == element.tag) {
    *it = std::move(element);
  } else {
    list.insert(it, std::move(element));
  }
}

}  // namespace cxr::dicom
