#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "cxr/gateway/record.hpp"

namespace cxr::gateway {

struct RecordPage {
  std::vector<StudyRecord> records;
  std::size_t total = 0;  // matching records before limit/offset
};

/// Directory-backed record store:
///   <root>/<study>/<sop>.dcm          source bytes as received
///   <root>/<study>/<sop>.sr.dcm       generated SR (accepted only)
///   <root>/<study>/<sop>.record.json  written last; its presence commits
/// Every file goes through write-then-rename. The in-memory index is
/// rebuilt from the record files on construction.
class Store {
 public:
  explicit Store(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  /// Assigns seq and source_bytes_path, writes the files and indexes the
  /// record. Throws RecordError if the record is invalid or the SOP exists.
  StudyRecord put(StudyRecord record, std::span<const std::uint8_t> source,
                  std::optional<std::span<const std::uint8_t>> sr = std::nullopt);

  std::optional<StudyRecord> find(const std::string& sop) const;

  /// Stored bytes of a source instance or an SR, looked up by SOP UID
  /// under the given study.
  std::optional<std::vector<std::uint8_t>> retrieve(const std::string& study,
                                                    const std::string& sop) const;

  /// Newest first.
  RecordPage list(std::optional<Status> status, std::size_t limit, std::size_t offset) const;

  /// Rewrites the record file with the new review. nullopt if unknown.
  std::optional<StudyRecord> set_review(const std::string& sop, const Review& review);

  std::size_t size() const;
  bool writable() const;

 private:
  std::filesystem::path record_path(const StudyRecord& r) const;

  std::filesystem::path root_;
  mutable std::shared_mutex mu_;
  std::map<std::string, StudyRecord> by_sop_;
  std::map<std::string, std::string> sr_to_sop_;
  std::uint64_t next_seq_ = 1;
};

}  // namespace cxr::gateway
