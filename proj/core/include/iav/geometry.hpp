#pragma once

#include <cmath>
#include <numbers>

namespace iav {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }

/// Left-hand normal of a direction (rotated +90 degrees).
constexpr Vec2 left_normal(Vec2 d) { return {-d.y, d.x}; }

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wraps an angle in degrees into (-180, 180].
inline double wrap_degrees(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w <= -180.0) w += 360.0;
  if (w > 180.0) w -= 360.0;
  return w;
}

/// Heading in degrees (0 = +x, counter-clockwise positive) of a direction vector.
inline double heading_of(Vec2 d) { return wrap_degrees(rad_to_deg(std::atan2(d.y, d.x))); }

inline Vec2 unit_from_heading(double heading_deg) {
  const double r = deg_to_rad(heading_deg);
  return {std::cos(r), std::sin(r)};
}

}  // namespace iav
