#pragma once

// Fixed-layout little-endian binary encoding of the five cooperation messages.
//
// Every field is written in declaration order with its natural width: integers
// little-endian, doubles as IEEE-754 binary64 bit patterns, booleans as one byte
// (0 or 1), and the CPM object list as a u8 count followed by the records.
// Header layout (6 bytes): protocol_version u8, message_id u8, station_id u32.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iav/messages.hpp"

namespace iav {

using Bytes = std::vector<std::uint8_t>;

/// Raised by encode() when a message breaks one of its type invariants.
class InvariantViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class DecodeErrc {
  Truncated,
  UnknownMessageId,
  BadEnum,
  TrailingBytes,
  BadVersion,
  BadValue,  // non-finite double, negative distance, yaw outside (-180, 180]
};

const char* to_string(DecodeErrc e);

class DecodeError : public std::runtime_error {
 public:
  DecodeError(DecodeErrc code, std::size_t offset, const std::string& what);
  DecodeErrc code() const noexcept { return code_; }
  /// Byte offset at which decoding failed.
  std::size_t offset() const noexcept { return offset_; }

 private:
  DecodeErrc code_;
  std::size_t offset_;
};

/// Throws InvariantViolation on any out-of-range field.
void validate(const Message& msg);

Bytes encode(const Message& msg);
Message decode(std::span<const std::uint8_t> bytes);

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Accepts upper or lower case, ignores ASCII whitespace. Throws std::invalid_argument.
Bytes from_hex(std::string_view hex);

}  // namespace iav
