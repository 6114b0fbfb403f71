#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <vector>

#include "mcpforge/sink/record.hpp"

namespace mcpforge::sink {

// Append-only record store, durable across restarts.
//
// File format (documented contract):
//   magic "MFSK1\n", then zero or more records;
//   record = u32 little-endian payload length, payload = UTF-8 JSON object
//   {"seq","arrival_ns","trial","tag","source","body64"} with body base64.
// A truncated trailing record (crash mid-append) is ignored on load.
class RecordStore {
 public:
  explicit RecordStore(std::filesystem::path path);
  ~RecordStore();
  RecordStore(const RecordStore&) = delete;
  RecordStore& operator=(const RecordStore&) = delete;

  // Assigns seq + arrival, persists, and returns the stored record.
  SinkRecord append(std::string trial_id, std::string tag, std::string source,
                    std::string body);

  std::vector<SinkRecord> query(const std::string& trial_id,
                                const std::string& tag_prefix = "") const;
  std::vector<SinkRecord> all() const;
  std::size_t size() const;

  const std::filesystem::path& path() const { return path_; }

 private:
  // Parses existing records; returns {offset past last good record,
  // total file size} so the constructor can trim a torn tail.
  std::pair<std::size_t, std::size_t> load();

  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::vector<SinkRecord> records_;
  std::uint64_t next_seq_ = 1;
  int fd_ = -1;
};

}  // namespace mcpforge::sink
