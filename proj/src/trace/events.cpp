#include "mcpforge/trace/events.hpp"

#include "mcpforge/util/fs.hpp"

namespace mcpforge::trace {

std::uint64_t Transcript::add(std::string_view kind, Json fields) {
  TraceEvent e;
  e.seq = next_seq_++;
  e.kind = std::string(kind);
  e.fields = std::move(fields);
  events_.push_back(std::move(e));
  return events_.back().seq;
}

std::vector<const TraceEvent*> Transcript::find(std::string_view kind) const {
  std::vector<const TraceEvent*> out;
  for (const auto& e : events_)
    if (e.kind == kind) out.push_back(&e);
  return out;
}

const TraceEvent* Transcript::first(std::string_view kind) const {
  for (const auto& e : events_)
    if (e.kind == kind) return &e;
  return nullptr;
}

bool Transcript::contains(std::string_view kind) const {
  return first(kind) != nullptr;
}

bool Transcript::any_field_contains(std::string_view kind,
                                    std::string_view key,
                                    std::string_view needle) const {
  for (const auto& e : events_) {
    if (e.kind != kind) continue;
    const auto it = e.fields.find(std::string(key));
    if (it == e.fields.end() || !it->is_string()) continue;
    if (it->get<std::string>().find(needle) != std::string::npos) return true;
  }
  return false;
}

Json Transcript::to_json() const {
  Json events = Json::array();
  for (const auto& e : events_)
    events.push_back(Json{{"seq", e.seq}, {"kind", e.kind}, {"f", e.fields}});
  return Json{{"events", std::move(events)}};
}

Transcript Transcript::from_json(const Json& j) {
  Transcript t;
  if (!j.is_object() || !j.contains("events")) return t;
  for (const auto& ej : j.at("events")) {
    TraceEvent e;
    e.seq = ej.value("seq", std::uint64_t{0});
    e.kind = ej.value("kind", std::string{});
    e.fields = ej.value("f", Json::object());
    t.next_seq_ = std::max(t.next_seq_, e.seq + 1);
    t.events_.push_back(std::move(e));
  }
  return t;
}

void Transcript::save(const std::filesystem::path& path) const {
  util::write_file_atomic(path, to_json().dump(2) + "\n");
}

Transcript Transcript::load(const std::filesystem::path& path) {
  auto text = util::read_file(path);
  if (!text) throw std::runtime_error("cannot read transcript: " + path.string());
  return from_json(Json::parse(*text));
}

bool HostState::any_connection_flood_failed() const {
  for (const auto& [name, s] : servers)
    if (s.conn_state == "failed" && s.fail_reason == "flood") return true;
  return false;
}

bool HostState::any_handshake_completed() const {
  for (const auto& [name, s] : servers)
    if (s.handshake == "ok") return true;
  return false;
}

Json HostState::to_json() const {
  Json servers_json = Json::object();
  for (const auto& [name, s] : servers) {
    servers_json[name] = Json{{"transport", s.transport},
                              {"conn_state", s.conn_state},
                              {"fail_reason", s.fail_reason},
                              {"flood_detail", s.flood_detail},
                              {"handshake", s.handshake},
                              {"peak_buffered_bytes", s.peak_buffered_bytes},
                              {"peak_inbox_depth", s.peak_inbox_depth},
                              {"notifications_in", s.notifications_in},
                              {"decode_errors", s.decode_errors}};
  }
  return Json{{"survived", survived}, {"servers", std::move(servers_json)}};
}

HostState HostState::from_json(const Json& j) {
  HostState state;
  state.survived = j.value("survived", true);
  if (j.contains("servers")) {
    for (const auto& [name, sj] : j.at("servers").items()) {
      ServerConnSummary s;
      s.transport = sj.value("transport", "");
      s.conn_state = sj.value("conn_state", "");
      s.fail_reason = sj.value("fail_reason", "");
      s.flood_detail = sj.value("flood_detail", "");
      s.handshake = sj.value("handshake", "");
      s.peak_buffered_bytes = sj.value("peak_buffered_bytes", std::size_t{0});
      s.peak_inbox_depth = sj.value("peak_inbox_depth", std::size_t{0});
      s.notifications_in = sj.value("notifications_in", std::size_t{0});
      s.decode_errors = sj.value("decode_errors", std::size_t{0});
      state.servers[name] = std::move(s);
    }
  }
  return state;
}

}  // namespace mcpforge::trace
