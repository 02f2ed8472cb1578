#include "iav/trace.hpp"

#include <charconv>
#include <istream>
#include <ostream>

namespace iav {

namespace {

constexpr const char* kEventNames[] = {"Moved",        "Sent",           "Delivered",       "PhaseChanged",
                                       "CollisionDetected", "GoalReached", "ObstacleInjected", "ObstacleRemoved",
                                       "CycleCompleted", "MissionDone"};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t at = s.find(sep, start);
    if (at == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, at - start));
    start = at + 1;
  }
}

class FieldReader {
 public:
  FieldReader(std::vector<std::string_view> f, std::size_t first, std::size_t line)
      : f_(std::move(f)), i_(first), line_(line) {}

  std::string_view text() {
    if (i_ >= f_.size()) throw TraceError(line_, "missing field");
    return f_[i_++];
  }
  double real() {
    const auto t = text();
    double v = 0.0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size()) throw TraceError(line_, "bad number '" + std::string(t) + "'");
    return v;
  }
  std::uint64_t whole() {
    const auto t = text();
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size()) throw TraceError(line_, "bad integer '" + std::string(t) + "'");
    return v;
  }
  MessageId message() {
    const auto t = text();
    for (int id = 1; id <= 5; ++id)
      if (t == message_name(static_cast<MessageId>(id))) return static_cast<MessageId>(id);
    throw TraceError(line_, "bad message name '" + std::string(t) + "'");
  }
  Phase phase() {
    const auto t = text();
    if (auto p = parse_phase(t)) return *p;
    throw TraceError(line_, "bad phase '" + std::string(t) + "'");
  }
  EntityRef entity() {
    const auto t = text();
    try {
      return parse_entity(std::string(t));
    } catch (const std::exception&) {
      throw TraceError(line_, "bad entity '" + std::string(t) + "'");
    }
  }
  void finish() {
    if (i_ != f_.size()) throw TraceError(line_, "unexpected extra fields");
  }

 private:
  std::vector<std::string_view> f_;
  std::size_t i_;
  std::size_t line_;
};

}  // namespace

const char* to_string(ObstacleKind k) {
  switch (k) {
    case ObstacleKind::Static: return "static";
    case ObstacleKind::Dynamic: return "dynamic";
    case ObstacleKind::Pedestrian: return "pedestrian";
  }
  return "?";
}

std::optional<ObstacleKind> parse_obstacle_kind(std::string_view s) {
  if (s == "static") return ObstacleKind::Static;
  if (s == "dynamic") return ObstacleKind::Dynamic;
  if (s == "pedestrian") return ObstacleKind::Pedestrian;
  return std::nullopt;
}

const char* to_string(EventKind k) { return kEventNames[static_cast<int>(k)]; }

std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string format_event(const TraceEvent& e) {
  std::string s = std::to_string(e.step) + '|' + to_string(e.entity) + '|' + to_string(e.kind());
  auto add = [&s](const std::string& f) {
    s += '|';
    s += f;
  };
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ev::Moved>) {
          add(format_double(d.position.x));
          add(format_double(d.position.y));
          add(format_double(d.heading));
          add(format_double(d.speed));
        } else if constexpr (std::is_same_v<T, ev::Sent>) {
          add(message_name(d.id));
          add(to_hex(d.frame));
        } else if constexpr (std::is_same_v<T, ev::Delivered>) {
          add(to_string(EntityRef{EntityKind::Vehicle, d.from}));
          add(message_name(d.id));
          add(std::to_string(d.send_step));
        } else if constexpr (std::is_same_v<T, ev::PhaseChanged>) {
          add(to_string(d.from));
          add(to_string(d.to));
          add(d.intersection ? std::to_string(*d.intersection) : "-");
        } else if constexpr (std::is_same_v<T, ev::CollisionDetected>) {
          add(to_string(d.other));
          add(format_double(d.distance));
        } else if constexpr (std::is_same_v<T, ev::GoalReached>) {
          add(std::to_string(d.index));
          add(format_double(d.position.x));
          add(format_double(d.position.y));
        } else if constexpr (std::is_same_v<T, ev::ObstacleInjected>) {
          add(format_double(d.position.x));
          add(format_double(d.position.y));
          add(format_double(d.radius));
          add(to_string(d.kind));
        } else if constexpr (std::is_same_v<T, ev::CycleCompleted>) {
          add(std::to_string(d.count));
        }
      },
      e.data);
  return s;
}

TraceEvent parse_event(std::string_view line, std::size_t line_no) {
  auto fields = split(line, '|');
  if (fields.size() < 3) throw TraceError(line_no, "expected step|entity|event");
  const std::string_view name = fields[2];
  FieldReader r(std::move(fields), 0, line_no);
  TraceEvent e;
  e.step = r.whole();
  e.entity = r.entity();
  r.text();

  if (name == "Moved") {
    ev::Moved d;
    d.position.x = r.real();
    d.position.y = r.real();
    d.heading = r.real();
    d.speed = r.real();
    e.data = d;
  } else if (name == "Sent") {
    ev::Sent d;
    d.id = r.message();
    try {
      d.frame = from_hex(r.text());
    } catch (const std::exception& ex) {
      throw TraceError(line_no, ex.what());
    }
    e.data = std::move(d);
  } else if (name == "Delivered") {
    ev::Delivered d;
    const EntityRef from = r.entity();
    if (from.kind != EntityKind::Vehicle) throw TraceError(line_no, "sender must be a vehicle");
    d.from = from.id;
    d.id = r.message();
    d.send_step = r.whole();
    e.data = d;
  } else if (name == "PhaseChanged") {
    ev::PhaseChanged d;
    d.from = r.phase();
    d.to = r.phase();
    const auto t = r.text();
    if (t != "-") {
      std::uint64_t v = 0;
      auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc{} || p != t.data() + t.size() || v > 255) throw TraceError(line_no, "bad intersection");
      d.intersection = static_cast<IntersectionId>(v);
    }
    e.data = d;
  } else if (name == "CollisionDetected") {
    ev::CollisionDetected d;
    d.other = r.entity();
    d.distance = r.real();
    e.data = d;
  } else if (name == "GoalReached") {
    ev::GoalReached d;
    d.index = r.whole();
    d.position.x = r.real();
    d.position.y = r.real();
    e.data = d;
  } else if (name == "ObstacleInjected") {
    ev::ObstacleInjected d;
    d.position.x = r.real();
    d.position.y = r.real();
    d.radius = r.real();
    const auto k = parse_obstacle_kind(r.text());
    if (!k) throw TraceError(line_no, "bad obstacle kind");
    d.kind = *k;
    e.data = d;
  } else if (name == "ObstacleRemoved") {
    e.data = ev::ObstacleRemoved{};
  } else if (name == "CycleCompleted") {
    e.data = ev::CycleCompleted{r.whole()};
  } else if (name == "MissionDone") {
    e.data = ev::MissionDone{};
  } else {
    throw TraceError(line_no, "unknown event '" + std::string(name) + "'");
  }
  r.finish();
  return e;
}

void write_trace(std::ostream& os, const std::vector<TraceEvent>& events) {
  for (const TraceEvent& e : events) os << format_event(e) << '\n';
}

std::vector<TraceEvent> read_trace(std::istream& is) {
  std::vector<TraceEvent> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.push_back(parse_event(line, n));
  }
  return out;
}

}  // namespace iav
