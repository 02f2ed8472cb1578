#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "iav/wire_codec.hpp"

namespace iav::test {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Bytes golden(const std::string& name) { return from_hex(read_file(std::string(IAV_GOLDEN_DIR) + "/" + name + ".hex")); }

inline std::string scenario_path(const std::string& name) { return std::string(IAV_SCENARIO_DIR) + "/" + name; }

}  // namespace iav::test
