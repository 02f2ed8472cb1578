#include "iav/wire_codec.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <type_traits>

namespace iav {

const ItsPduHeader& header_of(const Message& m) {
  return std::visit([](const auto& v) -> const ItsPduHeader& { return v.header; }, m);
}

MessageId message_id_of(const Message& m) { return static_cast<MessageId>(m.index() + 1); }

StationId sender_of(const Message& m) { return header_of(m).station_id; }

const char* message_name(MessageId id) {
  switch (id) {
    case MessageId::Cam: return "CAM";
    case MessageId::Denm: return "DENM";
    case MessageId::Cpm: return "CPM";
    case MessageId::Mcm: return "MCM";
    case MessageId::AckMcm: return "ACK_MCM";
  }
  return "?";
}

const char* to_string(DecodeErrc e) {
  switch (e) {
    case DecodeErrc::Truncated: return "Truncated";
    case DecodeErrc::UnknownMessageId: return "UnknownMessageId";
    case DecodeErrc::BadEnum: return "BadEnum";
    case DecodeErrc::TrailingBytes: return "TrailingBytes";
    case DecodeErrc::BadVersion: return "BadVersion";
    case DecodeErrc::BadValue: return "BadValue";
  }
  return "?";
}

DecodeError::DecodeError(DecodeErrc code, std::size_t offset, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + " at byte " + std::to_string(offset) + ": " + what),
      code_(code),
      offset_(offset) {}

namespace {

bool valid_station_type(std::uint8_t v) { return v <= 3; }
bool valid_denm_type(std::uint8_t v) { return v >= 1 && v <= 3; }
bool valid_cause(std::uint8_t v) { return v == 1 || v == 2 || v == 26 || v == 97; }
bool valid_sub_cause(std::uint8_t cause, std::uint8_t sub) { return cause != 97 || sub <= 4; }
bool valid_quality(std::uint8_t v) { return v <= kQualityHighest; }
bool valid_sensor_type(std::uint8_t v) { return v <= 1; }
bool valid_confidence(std::uint8_t v) { return v <= 3; }
bool valid_object_class(std::uint8_t v) { return v <= 3; }
bool valid_direction(std::uint8_t v) { return v <= 2; }
bool valid_yaw(double y) { return y > -180.0 && y <= 180.0; }

template <typename E>
std::uint8_t raw(E e) {
  return static_cast<std::uint8_t>(e);
}

void require(bool ok, const char* what) {
  if (!ok) throw InvariantViolation(what);
}

void check_header(const ItsPduHeader& h, MessageId expected) {
  require(h.protocol_version == kProtocolVersion, "protocol_version must be 1");
  require(h.message_id == expected, "header.message_id disagrees with message type");
}

void check_position(const Position2& p) {
  require(std::isfinite(p[0]) && std::isfinite(p[1]), "current_position must be finite");
}

void check_maneuver(const ManeuverContainer& m) {
  require(valid_direction(raw(m.direction)), "maneuver.direction out of range");
}

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { le(v); }
  void u32(std::uint32_t v) { le(v); }
  void u64(std::uint64_t v) { le(v); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }
  void boolean(bool v) { out_.push_back(v ? 1 : 0); }
  void position(const Position2& p) {
    f64(p[0]);
    f64(p[1]);
  }
  void header(const ItsPduHeader& h) {
    u8(h.protocol_version);
    u8(raw(h.message_id));
    u32(h.station_id);
  }
  void maneuver(const ManeuverContainer& m) {
    u8(m.id_intersection);
    u8(raw(m.direction));
  }
  Bytes take() { return std::move(out_); }

 private:
  template <typename T>
  void le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint16_t u16() { return le<std::uint16_t>(); }
  std::uint32_t u32() { return le<std::uint32_t>(); }
  std::uint64_t u64() { return le<std::uint64_t>(); }
  double f64() {
    const std::size_t at = pos_;
    const double v = std::bit_cast<double>(le<std::uint64_t>());
    if (!std::isfinite(v)) throw DecodeError(DecodeErrc::BadValue, at, "non-finite double");
    return v;
  }
  bool boolean() {
    const std::size_t at = pos_;
    const std::uint8_t v = u8();
    if (v > 1) throw DecodeError(DecodeErrc::BadEnum, at, "boolean byte not 0 or 1");
    return v == 1;
  }
  template <typename E>
  E enumeration(bool (*valid)(std::uint8_t), const char* what) {
    const std::size_t at = pos_;
    const std::uint8_t v = u8();
    if (!valid(v)) throw DecodeError(DecodeErrc::BadEnum, at, what);
    return static_cast<E>(v);
  }
  Position2 position() {
    Position2 p;
    p[0] = f64();
    p[1] = f64();
    return p;
  }
  ManeuverContainer maneuver() {
    ManeuverContainer m;
    m.id_intersection = u8();
    m.direction = enumeration<Direction>(valid_direction, "direction");
    return m;
  }
  std::size_t offset() const { return pos_; }
  void finish() const {
    if (pos_ != in_.size())
      throw DecodeError(DecodeErrc::TrailingBytes, pos_,
                        std::to_string(in_.size() - pos_) + " bytes after a complete message");
  }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n)
      throw DecodeError(DecodeErrc::Truncated, pos_, "need " + std::to_string(n) + " more bytes");
  }
  template <typename T>
  T le() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(in_[pos_ + i]) << (8 * i));
    pos_ += sizeof(T);
    return v;
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void validate_one(const CamMessage& m) {
  check_header(m.header, MessageId::Cam);
  require(valid_station_type(raw(m.station_type)), "station_type out of range");
  check_position(m.current_position);
}

void validate_one(const DenmMessage& m) {
  check_header(m.header, MessageId::Denm);
  require(valid_denm_type(raw(m.message_type)), "DENM message_type out of range");
  require(valid_station_type(raw(m.station_type)), "station_type out of range");
  require(std::isfinite(m.management.distance) && m.management.distance >= 0.0,
          "DENM distance must be finite and non-negative");
  require(valid_cause(raw(m.situation.cause_code)), "cause_code out of range");
  require(valid_sub_cause(raw(m.situation.cause_code), m.situation.sub_cause_code),
          "sub_cause_code out of range for COLLISION_RISK");
  require(valid_quality(m.situation.information_quality), "information_quality out of range");
}

void validate_one(const CpmMessage& m) {
  check_header(m.header, MessageId::Cpm);
  require(valid_station_type(raw(m.station_type)), "station_type out of range");
  check_position(m.current_position);
  require(valid_sensor_type(raw(m.sensor_information.type)), "sensor type out of range");
  require(valid_confidence(raw(m.sensor_information.confidence)), "sensor confidence out of range");
  require(m.perceived_objects.size() <= kMaxPerceivedObjects, "more than 255 perceived objects");
  for (const auto& o : m.perceived_objects) {
    require(valid_object_class(raw(o.object_id)), "objectID out of range");
    require(std::isfinite(o.distance) && o.distance >= 0.0, "object distance must be non-negative");
    require(std::isfinite(o.acceleration), "object acceleration must be finite");
    require(valid_yaw(o.yaw_angle), "yaw_angle outside (-180, 180]");
  }
}

void validate_one(const McmMessage& m) {
  check_header(m.header, MessageId::Mcm);
  require(valid_station_type(raw(m.station_type)), "station_type out of range");
  check_position(m.current_position);
  check_maneuver(m.maneuver);
}

void validate_one(const AckMcmMessage& m) {
  check_header(m.header, MessageId::AckMcm);
  require(valid_station_type(raw(m.station_type)), "station_type out of range");
  check_position(m.current_position);
  require(valid_station_type(raw(m.station_type_destinator)), "station_type_destinator out of range");
  check_maneuver(m.maneuver);
}

void write_one(Writer& w, const CamMessage& m) {
  w.header(m.header);
  w.u16(m.generation_time);
  w.u8(raw(m.station_type));
  w.position(m.current_position);
}

void write_one(Writer& w, const DenmMessage& m) {
  w.header(m.header);
  w.u8(raw(m.message_type));
  w.u8(raw(m.station_type));
  w.u64(m.management.detection_time);
  w.f64(m.management.distance);
  w.u32(m.management.validity_duration);
  w.u8(raw(m.situation.cause_code));
  w.u8(m.situation.sub_cause_code);
  w.u8(m.situation.information_quality);
}

void write_one(Writer& w, const CpmMessage& m) {
  w.header(m.header);
  w.u16(m.generation_time);
  w.u8(raw(m.station_type));
  w.position(m.current_position);
  w.u8(raw(m.sensor_information.type));
  w.u8(raw(m.sensor_information.confidence));
  w.u8(static_cast<std::uint8_t>(m.perceived_objects.size()));
  for (const auto& o : m.perceived_objects) {
    w.u8(raw(o.object_id));
    w.f64(o.distance);
    w.f64(o.acceleration);
    w.f64(o.yaw_angle);
  }
}

void write_one(Writer& w, const McmMessage& m) {
  w.header(m.header);
  w.u16(m.generation_time);
  w.u8(raw(m.station_type));
  w.position(m.current_position);
  w.maneuver(m.maneuver);
}

void write_one(Writer& w, const AckMcmMessage& m) {
  w.header(m.header);
  w.u16(m.generation_time);
  w.u8(raw(m.station_type));
  w.position(m.current_position);
  w.u8(raw(m.station_type_destinator));
  w.u32(m.station_id_destinator);
  w.maneuver(m.maneuver);
  w.boolean(m.ack_mcm_response);
}

StationType read_station_type(Reader& r) { return r.enumeration<StationType>(valid_station_type, "station_type"); }

}  // namespace

void validate(const Message& msg) {
  std::visit([](const auto& m) { validate_one(m); }, msg);
}

Bytes encode(const Message& msg) {
  validate(msg);
  Writer w;
  std::visit([&w](const auto& m) { write_one(w, m); }, msg);
  return w.take();
}

Message decode(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  ItsPduHeader h;
  h.protocol_version = r.u8();
  if (h.protocol_version != kProtocolVersion)
    throw DecodeError(DecodeErrc::BadVersion, 0, "protocol_version " + std::to_string(h.protocol_version));
  const std::uint8_t id = r.u8();
  if (id < 1 || id > 5) throw DecodeError(DecodeErrc::UnknownMessageId, 1, "message_id " + std::to_string(id));
  h.message_id = static_cast<MessageId>(id);
  h.station_id = r.u32();

  Message out;
  switch (h.message_id) {
    case MessageId::Cam: {
      CamMessage m;
      m.header = h;
      m.generation_time = r.u16();
      m.station_type = read_station_type(r);
      m.current_position = r.position();
      out = m;
      break;
    }
    case MessageId::Denm: {
      DenmMessage m;
      m.header = h;
      m.message_type = r.enumeration<DenmType>(valid_denm_type, "DENM message_type");
      m.station_type = read_station_type(r);
      m.management.detection_time = r.u64();
      const std::size_t dist_at = r.offset();
      m.management.distance = r.f64();
      if (m.management.distance < 0.0) throw DecodeError(DecodeErrc::BadValue, dist_at, "negative distance");
      m.management.validity_duration = r.u32();
      m.situation.cause_code = r.enumeration<CauseCode>(valid_cause, "cause_code");
      const std::size_t sub_at = r.offset();
      m.situation.sub_cause_code = r.u8();
      if (!valid_sub_cause(raw(m.situation.cause_code), m.situation.sub_cause_code))
        throw DecodeError(DecodeErrc::BadEnum, sub_at, "sub_cause_code");
      m.situation.information_quality = r.enumeration<std::uint8_t>(valid_quality, "information_quality");
      out = m;
      break;
    }
    case MessageId::Cpm: {
      CpmMessage m;
      m.header = h;
      m.generation_time = r.u16();
      m.station_type = read_station_type(r);
      m.current_position = r.position();
      m.sensor_information.type = r.enumeration<SensorType>(valid_sensor_type, "sensor type");
      m.sensor_information.confidence = r.enumeration<SensorConfidence>(valid_confidence, "sensor confidence");
      const std::size_t count = r.u8();
      m.perceived_objects.reserve(count);
      for (std::size_t i = 0; i < count; ++i) {
        PerceivedObjectRecord o;
        o.object_id = r.enumeration<ObjectClassCode>(valid_object_class, "objectID");
        const std::size_t dist_at = r.offset();
        o.distance = r.f64();
        if (o.distance < 0.0) throw DecodeError(DecodeErrc::BadValue, dist_at, "negative distance");
        o.acceleration = r.f64();
        const std::size_t yaw_at = r.offset();
        o.yaw_angle = r.f64();
        if (!valid_yaw(o.yaw_angle)) throw DecodeError(DecodeErrc::BadValue, yaw_at, "yaw_angle out of range");
        m.perceived_objects.push_back(o);
      }
      out = std::move(m);
      break;
    }
    case MessageId::Mcm: {
      McmMessage m;
      m.header = h;
      m.generation_time = r.u16();
      m.station_type = read_station_type(r);
      m.current_position = r.position();
      m.maneuver = r.maneuver();
      out = m;
      break;
    }
    case MessageId::AckMcm: {
      AckMcmMessage m;
      m.header = h;
      m.generation_time = r.u16();
      m.station_type = read_station_type(r);
      m.current_position = r.position();
      m.station_type_destinator = read_station_type(r);
      m.station_id_destinator = r.u32();
      m.maneuver = r.maneuver();
      m.ack_mcm_response = r.boolean();
      out = m;
      break;
    }
  }
  r.finish();
  return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xf]);
  }
  return s;
}

Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Bytes out;
  int hi = -1;
  for (char c : hex) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    const int n = nibble(c);
    if (n < 0) throw std::invalid_argument(std::string("invalid hex digit '") + c + "'");
    if (hi < 0) {
      hi = n;
    } else {
      out.push_back(static_cast<std::uint8_t>((hi << 4) | n));
      hi = -1;
    }
  }
  if (hi >= 0) throw std::invalid_argument("odd number of hex digits");
  return out;
}

}  // namespace iav
