#include "mcpforge/sink/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <stdexcept>

#include "mcpforge/util/fs.hpp"
#include "mcpforge/util/text.hpp"

namespace mcpforge::sink {

namespace {
constexpr char kMagic[] = "MFSK1\n";
constexpr std::size_t kMagicLen = 6;

std::uint64_t steady_ns() {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(
          std::chrono::steady_clock::now().time_since_epoch())
          .count());
}
}  // namespace

Json SinkRecord::to_json() const {
  return Json{{"seq", seq},
              {"arrival_ns", arrival_ns},
              {"trial", trial_id},
              {"tag", tag},
              {"source", source},
              {"body64", util::base64_encode(body)}};
}

SinkRecord SinkRecord::from_json(const Json& j) {
  SinkRecord r;
  r.seq = j.value("seq", std::uint64_t{0});
  r.arrival_ns = j.value("arrival_ns", std::uint64_t{0});
  r.trial_id = j.value("trial", std::string{});
  r.tag = j.value("tag", std::string{});
  r.source = j.value("source", std::string{});
  if (auto decoded = util::base64_decode(j.value("body64", std::string{})))
    r.body = std::move(*decoded);
  return r;
}

RecordStore::RecordStore(std::filesystem::path path) : path_(std::move(path)) {
  util::ensure_dir(path_.parent_path());
  const auto [good_end, file_size] = load();
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd_ < 0)
    throw std::runtime_error("cannot open sink store: " + path_.string());
  if (records_.empty()) {
    // Fresh or empty file: (re)write the magic header.
    if (::ftruncate(fd_, 0) != 0)
      throw std::runtime_error("cannot reset sink store: " + path_.string());
    if (::write(fd_, kMagic, kMagicLen) != static_cast<ssize_t>(kMagicLen))
      throw std::runtime_error("cannot write sink store header");
  } else if (good_end < file_size) {
    // Drop a torn tail record so future appends stay parseable.
    if (::ftruncate(fd_, static_cast<off_t>(good_end)) != 0)
      throw std::runtime_error("cannot trim sink store: " + path_.string());
  }
}

RecordStore::~RecordStore() {
  if (fd_ >= 0) ::close(fd_);
}

std::pair<std::size_t, std::size_t> RecordStore::load() {
  auto maybe = util::read_file(path_);
  if (!maybe) return {0, 0};  // no existing store
  const std::string& data = *maybe;
  if (data.size() < kMagicLen ||
      std::memcmp(data.data(), kMagic, kMagicLen) != 0)
    return {0, data.size()};
  std::size_t off = kMagicLen;
  while (off + 4 <= data.size()) {
    std::uint32_t len = 0;
    std::memcpy(&len, data.data() + off, 4);
    if (off + 4 + len > data.size()) break;  // truncated tail: ignore
    const std::string payload = data.substr(off + 4, len);
    off += 4 + len;
    Json j = Json::parse(payload, nullptr, false);
    if (j.is_discarded() || !j.is_object()) continue;
    SinkRecord r = SinkRecord::from_json(j);
    next_seq_ = std::max(next_seq_, r.seq + 1);
    records_.push_back(std::move(r));
  }
  return {off, data.size()};
}

SinkRecord RecordStore::append(std::string trial_id, std::string tag,
                               std::string source, std::string body) {
  std::lock_guard lock(mu_);
  SinkRecord r;
  r.seq = next_seq_++;
  r.arrival_ns = steady_ns();
  r.trial_id = std::move(trial_id);
  r.tag = std::move(tag);
  r.source = std::move(source);
  r.body = std::move(body);

  const std::string payload = r.to_json().dump();
  const std::uint32_t len = static_cast<std::uint32_t>(payload.size());
  std::string frame(4, '\0');
  std::memcpy(frame.data(), &len, 4);
  frame += payload;
  std::size_t off = 0;
  while (off < frame.size()) {
    const ssize_t n = ::write(fd_, frame.data() + off, frame.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("sink store write failed");
    }
    off += static_cast<std::size_t>(n);
  }
  records_.push_back(r);
  return r;
}

std::vector<SinkRecord> RecordStore::query(const std::string& trial_id,
                                           const std::string& tag_prefix) const {
  std::lock_guard lock(mu_);
  std::vector<SinkRecord> out;
  for (const auto& r : records_) {
    if (!trial_id.empty() && r.trial_id != trial_id) continue;
    if (!tag_prefix.empty() && !util::starts_with(r.tag, tag_prefix)) continue;
    out.push_back(r);
  }
  return out;
}

std::vector<SinkRecord> RecordStore::all() const {
  std::lock_guard lock(mu_);
  return records_;
}

std::size_t RecordStore::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

}  // namespace mcpforge::sink
