#pragma once

// Cooperation messages exchanged between stations. Field order in every struct
// is the on-wire order used by wire_codec.

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

namespace iav {

using StationId = std::uint32_t;

inline constexpr std::uint8_t kProtocolVersion = 1;

enum class MessageId : std::uint8_t { Cam = 1, Denm = 2, Cpm = 3, Mcm = 4, AckMcm = 5 };

enum class StationType : std::uint8_t { Unknown = 0, Pedestrian = 1, Iav = 2, Beacon = 3 };

enum class DenmType : std::uint8_t { Trigger = 1, Update = 2, Terminate = 3 };

enum class CauseCode : std::uint8_t {
  TrafficCondition = 1,
  Accident = 2,
  SlowVia = 26,
  CollisionRisk = 97,
};

// Sub-causes defined for CauseCode::CollisionRisk.
enum class CollisionRiskSubCause : std::uint8_t {
  Unavailable = 0,
  Longitudinal = 1,
  Crossing = 2,
  Lateral = 3,
  VulnerableUser = 4,
};

inline constexpr std::uint8_t kQualityUnavailable = 0;
inline constexpr std::uint8_t kQualityLowest = 1;
inline constexpr std::uint8_t kQualityHighest = 7;

enum class SensorType : std::uint8_t { Unknown = 0, Lidar = 1 };
enum class SensorConfidence : std::uint8_t { Unknown = 0, Low = 1, Medium = 2, High = 3 };

enum class ObjectClassCode : std::uint8_t { Unknown = 0, Pedestrian = 1, Iav = 2, Object = 3 };

enum class Direction : std::uint8_t { Straight = 0, Left = 1, Right = 2 };

struct ItsPduHeader {
  std::uint8_t protocol_version = kProtocolVersion;
  MessageId message_id = MessageId::Cam;
  StationId station_id = 0;
  friend bool operator==(const ItsPduHeader&, const ItsPduHeader&) = default;
};

using Position2 = std::array<double, 2>;

struct CamMessage {
  ItsPduHeader header{kProtocolVersion, MessageId::Cam, 0};
  std::uint16_t generation_time = 0;
  StationType station_type = StationType::Iav;
  Position2 current_position{};
  friend bool operator==(const CamMessage&, const CamMessage&) = default;
};

struct DenmManagement {
  std::uint64_t detection_time = 0;  // simulation step index
  double distance = 0.0;             // meters
  std::uint32_t validity_duration = 0;  // seconds
  friend bool operator==(const DenmManagement&, const DenmManagement&) = default;
};

struct DenmSituation {
  CauseCode cause_code = CauseCode::CollisionRisk;
  std::uint8_t sub_cause_code = 0;
  std::uint8_t information_quality = kQualityUnavailable;
  friend bool operator==(const DenmSituation&, const DenmSituation&) = default;
};

struct DenmMessage {
  ItsPduHeader header{kProtocolVersion, MessageId::Denm, 0};
  DenmType message_type = DenmType::Trigger;
  StationType station_type = StationType::Iav;
  DenmManagement management;
  DenmSituation situation;
  friend bool operator==(const DenmMessage&, const DenmMessage&) = default;
};

struct SensorInformation {
  SensorType type = SensorType::Lidar;
  SensorConfidence confidence = SensorConfidence::High;
  friend bool operator==(const SensorInformation&, const SensorInformation&) = default;
};

struct PerceivedObjectRecord {
  ObjectClassCode object_id = ObjectClassCode::Unknown;
  double distance = 0.0;
  double acceleration = 0.0;
  double yaw_angle = 0.0;  // degrees, relative to the sender's heading
  friend bool operator==(const PerceivedObjectRecord&, const PerceivedObjectRecord&) = default;
};

inline constexpr std::size_t kMaxPerceivedObjects = 255;

struct CpmMessage {
  ItsPduHeader header{kProtocolVersion, MessageId::Cpm, 0};
  std::uint16_t generation_time = 0;
  StationType station_type = StationType::Iav;
  Position2 current_position{};
  SensorInformation sensor_information;
  std::vector<PerceivedObjectRecord> perceived_objects;
  friend bool operator==(const CpmMessage&, const CpmMessage&) = default;
};

struct ManeuverContainer {
  std::uint8_t id_intersection = 0;
  Direction direction = Direction::Straight;
  friend bool operator==(const ManeuverContainer&, const ManeuverContainer&) = default;
};

struct McmMessage {
  ItsPduHeader header{kProtocolVersion, MessageId::Mcm, 0};
  std::uint16_t generation_time = 0;
  StationType station_type = StationType::Iav;
  Position2 current_position{};
  ManeuverContainer maneuver;
  friend bool operator==(const McmMessage&, const McmMessage&) = default;
};

struct AckMcmMessage {
  ItsPduHeader header{kProtocolVersion, MessageId::AckMcm, 0};
  std::uint16_t generation_time = 0;
  StationType station_type = StationType::Iav;
  Position2 current_position{};
  StationType station_type_destinator = StationType::Iav;
  StationId station_id_destinator = 0;
  ManeuverContainer maneuver;
  bool ack_mcm_response = false;
  friend bool operator==(const AckMcmMessage&, const AckMcmMessage&) = default;
};

using Message = std::variant<CamMessage, DenmMessage, CpmMessage, McmMessage, AckMcmMessage>;

/// Header of whichever alternative `m` holds.
const ItsPduHeader& header_of(const Message& m);
MessageId message_id_of(const Message& m);
StationId sender_of(const Message& m);
const char* message_name(MessageId id);

}  // namespace iav
