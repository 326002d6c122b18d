#include "urbanet/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace urbanet {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

double normalize_longitude(double lon) noexcept {
  if (lon >= -180.0 && lon < 180.0) return lon;
  double wrapped = std::fmod(lon + 180.0, 360.0);
  if (wrapped < 0.0) wrapped += 360.0;
  wrapped -= 180.0;
  // fmod can land exactly on the excluded upper bound after the shift.
  if (wrapped >= 180.0) wrapped -= 360.0;
  return wrapped;
}

GeoPoint GeoPoint::make(double lat, double lon) {
  if (!std::isfinite(lat) || !std::isfinite(lon)) {
    throw std::invalid_argument("coordinate is not finite");
  }
  if (lat < -90.0 || lat > 90.0) {
    throw std::invalid_argument("latitude out of range: " + std::to_string(lat));
  }
  return GeoPoint{lat, normalize_longitude(lon)};
}

bool is_valid(const GeoPoint& p) noexcept {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 &&
         p.lat <= 90.0 && p.lon >= -180.0 && p.lon < 180.0;
}

SphericalPoint::SphericalPoint(const GeoPoint& p) noexcept
    : sin_lat(std::sin(p.lat * kDegToRad)),
      cos_lat(std::cos(p.lat * kDegToRad)),
      lon_rad(p.lon * kDegToRad) {}

double great_circle(const SphericalPoint& a, const SphericalPoint& b) noexcept {
  // sin^2 + cos^2 rounds below 1, so identity needs an explicit case.
  if (a.sin_lat == b.sin_lat && a.cos_lat == b.cos_lat && a.lon_rad == b.lon_rad) {
    return 0.0;
  }
  // |dlon| and commutative products keep the result exactly symmetric.
  const double dlon = std::abs(a.lon_rad - b.lon_rad);
  const double cos_angle =
      a.sin_lat * b.sin_lat + (a.cos_lat * b.cos_lat) * std::cos(dlon);
  const double angle = std::acos(std::clamp(cos_angle, -1.0, 1.0));
  return std::max(0.0, kEarthRadiusMeters * angle);
}

double great_circle(const GeoPoint& a, const GeoPoint& b) noexcept {
  return great_circle(SphericalPoint(a), SphericalPoint(b));
}

}  // namespace urbanet
