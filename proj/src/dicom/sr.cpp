#include "cxr/dicom/sr.hpp"

#include <cmath>

#include "cxr/common/io.hpp"
#include "cxr/dicom/errors.hpp"
#include "cxr/dicom/part10.hpp"

namespace cxr::dicom {

void validate(const SRDocument& doc) {
  for (std::size_t i = 0; i < kClassLabels.size(); ++i) {
    if (doc.class_labels[i] != kClassLabels[i]) {
      throw DicomError(ErrorCode::InvariantViolation,
                       "class label " + std::to_string(i) + " is '" + doc.class_labels[i] + "'");
    }
  }
  double sum = 0.0;
  for (double p : doc.probabilities) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw DicomError(ErrorCode::InvariantViolation, "probability outside [0,1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw DicomError(ErrorCode::InvariantViolation,
                     "probabilities sum to " + format_double(sum));
  }
  if (doc.source_sop_instance_uid.empty()) {
    throw DicomError(ErrorCode::InvariantViolation, "missing source SOP instance UID");
  }
}

namespace {

std::vector<DataElement> text_item(const std::string& text) {
  return {DataElement::text(tags::kRelationshipType, VR::CS, "CONTAINS"),
          DataElement::text(tags::kValueType, VR::CS, "TEXT"),
          DataElement::text(tags::kTextValue, VR::UT, text)};
}

}  // namespace

DicomObject build_sr(const SRDocument& doc, const UidSource& uids) {
  validate(doc);
  const std::string sop_uid = uids();
  const std::string series_uid = uids();
  const std::string study_uid =
      doc.study_instance_uid.empty() ? uids() : doc.study_instance_uid;
  const std::string date = format_da(doc.created_at);
  const std::string time = format_tm(doc.created_at);

  std::vector<std::vector<DataElement>> content;
  for (std::size_t i = 0; i < kClassLabels.size(); ++i) {
    content.push_back(
        text_item(doc.class_labels[i] + "=" + format_fixed(doc.probabilities[i], 4)));
  }
  content.push_back(
      text_item(std::string("OOD-Gate=") + (doc.gate_accepted ? "ACCEPTED" : "REJECTED")));

  const std::vector<std::vector<DataElement>> reference = {
      {DataElement::text(tags::kReferencedSopInstanceUid, VR::UI,
                         doc.source_sop_instance_uid)}};

  DicomObject obj;
  obj.meta = make_file_meta(kBasicTextSrSopClass, sop_uid);
  obj.set(DataElement::text(tags::kInstanceCreationDate, VR::DA, date));
  obj.set(DataElement::text(tags::kInstanceCreationTime, VR::TM, time));
  obj.set(DataElement::text(tags::kSopClassUid, VR::UI, kBasicTextSrSopClass));
  obj.set(DataElement::text(tags::kSopInstanceUid, VR::UI, sop_uid));
  obj.set(DataElement::text(tags::kContentDate, VR::DA, date));
  obj.set(DataElement::text(tags::kContentTime, VR::TM, time));
  obj.set(DataElement::text(tags::kModality, VR::CS, "SR"));
  obj.set(DataElement::bytes(tags::kReferencedSopSequence, VR::SQ, encode_sequence(reference)));
  obj.set(DataElement::text(tags::kSoftwareVersions, VR::LO, doc.model_version));
  obj.set(DataElement::text(tags::kStudyInstanceUid, VR::UI, study_uid));
  obj.set(DataElement::text(tags::kSeriesInstanceUid, VR::UI, series_uid));
  obj.set(DataElement::text(tags::kSeriesNumber, VR::IS, "1"));
  obj.set(DataElement::text(tags::kInstanceNumber, VR::IS, "1"));
  obj.set(DataElement::text(tags::kValueType, VR::CS, "CONTAINER"));
  obj.set(DataElement::text(tags::kContinuityOfContent, VR::CS, "SEPARATE"));
  obj.set(DataElement::text(tags::kCompletionFlag, VR::CS, "COMPLETE"));
  obj.set(DataElement::text(tags::kVerificationFlag, VR::CS, "UNVERIFIED"));
  obj.set(DataElement::bytes(tags::kContentSequence, VR::SQ, encode_sequence(content)));
  return obj;
}

std::vector<std::string> read_sr_text_items(const DicomObject& sr) {
  const auto* seq = sr.find(tags::kContentSequence);
  if (seq == nullptr) return {};
  std::vector<std::string> out;
  for (const auto& item : decode_sequence(seq->value)) {
    for (const auto& e : item) {
      if (e.tag == tags::kTextValue) out.push_back(e.as_string());
    }
  }
  return out;
}

}  // namespace cxr::dicom
