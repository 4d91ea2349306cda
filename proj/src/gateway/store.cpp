#include "cxr/gateway/store.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>

#include "cxr/common/io.hpp"

namespace cxr::gateway {

namespace fs = std::filesystem;

namespace {

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

Store::Store(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_);
  for (const auto& entry : fs::recursive_directory_iterator(root_)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (!ends_with(name, ".record.json")) continue;
    auto rec = record_from_json(nlohmann::json::parse(read_text_file(entry.path())));
    if (by_sop_.count(rec.sop_instance_uid)) {
      throw RecordError("duplicate record for " + rec.sop_instance_uid + " in " + root_.string());
    }
    next_seq_ = std::max(next_seq_, rec.seq + 1);
    if (rec.sr_sop_uid) sr_to_sop_[*rec.sr_sop_uid] = rec.sop_instance_uid;
    by_sop_.emplace(rec.sop_instance_uid, std::move(rec));
  }
}

fs::path Store::record_path(const StudyRecord& r) const {
  return root_ / r.study_uid / (r.sop_instance_uid + ".record.json");
}

StudyRecord Store::put(StudyRecord record, std::span<const std::uint8_t> source,
                       std::optional<std::span<const std::uint8_t>> sr) {
  validate(record);
  if (sr.has_value() != record.sr_sop_uid.has_value()) {
    throw RecordError("record " + record.sop_instance_uid + ": SR bytes and sr_sop_uid disagree");
  }
  const auto dir = root_ / record.study_uid;
  record.source_bytes_path = (fs::path(record.study_uid) / (record.sop_instance_uid + ".dcm")).string();
  {
    std::unique_lock lock(mu_);
    if (by_sop_.count(record.sop_instance_uid)) {
      throw RecordError("record " + record.sop_instance_uid + " already exists");
    }
    record.seq = next_seq_++;
  }
  fs::create_directories(dir);
  write_file_atomic(root_ / record.source_bytes_path, source);
  if (sr) write_file_atomic(dir / (record.sop_instance_uid + ".sr.dcm"), *sr);
  write_file_atomic(record_path(record), to_json(record).dump(2) + "\n");

  std::unique_lock lock(mu_);
  if (record.sr_sop_uid) sr_to_sop_[*record.sr_sop_uid] = record.sop_instance_uid;
  by_sop_[record.sop_instance_uid] = record;
  return record;
}

std::optional<StudyRecord> Store::find(const std::string& sop) const {
  std::shared_lock lock(mu_);
  auto it = by_sop_.find(sop);
  if (it == by_sop_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::vector<std::uint8_t>> Store::retrieve(const std::string& study,
                                                         const std::string& sop) const {
  fs::path path;
  {
    std::shared_lock lock(mu_);
    if (auto it = by_sop_.find(sop); it != by_sop_.end()) {
      if (it->second.study_uid != study) return std::nullopt;
      path = root_ / it->second.source_bytes_path;
    } else if (auto s = sr_to_sop_.find(sop); s != sr_to_sop_.end()) {
      const auto& rec = by_sop_.at(s->second);
      if (rec.study_uid != study) return std::nullopt;
      path = root_ / rec.study_uid / (rec.sop_instance_uid + ".sr.dcm");
    } else {
      return std::nullopt;
    }
  }
  return read_file(path);
}

RecordPage Store::list(std::optional<Status> status, std::size_t limit, std::size_t offset) const {
  std::vector<const StudyRecord*> matching;
  std::shared_lock lock(mu_);
  for (const auto& [sop, rec] : by_sop_) {
    if (!status || rec.status == *status) matching.push_back(&rec);
  }
  std::sort(matching.begin(), matching.end(),
            [](const StudyRecord* a, const StudyRecord* b) { return a->seq > b->seq; });
  RecordPage page;
  page.total = matching.size();
  for (std::size_t i = offset; i < matching.size() && page.records.size() < limit; ++i) {
    page.records.push_back(*matching[i]);
  }
  return page;
}

std::optional<StudyRecord> Store::set_review(const std::string& sop, const Review& review) {
  std::unique_lock lock(mu_);
  auto it = by_sop_.find(sop);
  if (it == by_sop_.end()) return std::nullopt;
  StudyRecord updated = it->second;
  updated.review = review;
  write_file_atomic(record_path(updated), to_json(updated).dump(2) + "\n");
  it->second = updated;
  return updated;
}

std::size_t Store::size() const {
  std::shared_lock lock(mu_);
  return by_sop_.size();
}

bool Store::writable() const {
  const auto probe = root_ / ".probe";
  {
    std::ofstream out(probe);
    if (!out) return false;
  }
  std::error_code ec;
  fs::remove(probe, ec);
  return true;
}

}  // namespace cxr::gateway
