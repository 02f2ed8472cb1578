#pragma once

// The messages the golden hex fixtures were generated from.

#include <vector>

#include "iav/messages.hpp"

namespace iav::test {

inline CamMessage golden_cam() {
  CamMessage m;
  m.header.station_id = 7;
  m.generation_time = 500;
  m.station_type = StationType::Iav;
  m.current_position = {12.5, -3.25};
  return m;
}

inline DenmMessage golden_denm(DenmType type, StationId station, std::uint64_t at, double distance, CauseCode cause,
                        std::uint8_t sub, std::uint8_t quality) {
  DenmMessage m;
  m.header.station_id = station;
  m.message_type = type;
  m.station_type = StationType::Iav;
  m.management = {at, distance, 5};
  m.situation = {cause, sub, quality};
  return m;
}

inline CpmMessage golden_cpm() {
  CpmMessage m;
  m.header.station_id = 2;
  m.generation_time = 1200;
  m.current_position = {1.0, 10.0};
  m.sensor_information = {SensorType::Lidar, SensorConfidence::High};
  m.perceived_objects = {{ObjectClassCode::Object, 2.5, 0.0, -10.0}, {ObjectClassCode::Pedestrian, 1.75, 0.0, 90.0}};
  return m;
}

inline McmMessage golden_mcm() {
  McmMessage m;
  m.header.station_id = 11;
  m.generation_time = 65535;
  m.current_position = {30.0, 2.6};
  m.maneuver = {3, Direction::Left};
  return m;
}

inline AckMcmMessage golden_ack(bool yes) {
  AckMcmMessage m;
  m.header.station_id = 4;
  m.generation_time = 100;
  m.current_position = {32.6, 0.0};
  m.station_type_destinator = StationType::Iav;
  m.station_id_destinator = 11;
  m.maneuver = {3, yes ? Direction::Straight : Direction::Right};
  m.ack_mcm_response = yes;
  return m;
}

struct GoldenCase {
  const char* file;
  Message message;
};

inline std::vector<GoldenCase> golden_cases() {
  return {
      {"cam", golden_cam()},
      {"denm_trigger", golden_denm(DenmType::Trigger, 3, 42, 0.8, CauseCode::CollisionRisk, 1, 4)},
      {"denm_update", golden_denm(DenmType::Update, 3, 43, 0.5, CauseCode::CollisionRisk, 2, 4)},
      {"denm_terminate", golden_denm(DenmType::Terminate, 9, 1000, 1.25, CauseCode::TrafficCondition, 0, 7)},
      {"cpm", golden_cpm()},
      {"cpm_empty", [] {
         CpmMessage m;
         m.header.station_id = 2;
         return Message{m};
       }()},
      {"mcm", golden_mcm()},
      {"ack_mcm", golden_ack(false)},
      {"ack_mcm_yes", golden_ack(true)},
  };
}

}  // namespace iav::test
