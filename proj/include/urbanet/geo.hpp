// Great-circle geometry on a spherical Earth.
#pragma once

namespace urbanet {

/// Spherical Earth radius used for every inline distance and edge weight.
inline constexpr double kEarthRadiusMeters = 6'378'000.0;

/// Geographic position in decimal degrees. Construct through `make` to get
/// validation and longitude normalization.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  /// Validates latitude in [-90, 90], wraps longitude into [-180, 180).
  /// Throws std::invalid_argument on non-finite input or out-of-range latitude.
  static GeoPoint make(double lat, double lon);

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

bool is_valid(const GeoPoint& p) noexcept;

double normalize_longitude(double lon) noexcept;

/// Spherical law of cosines on kEarthRadiusMeters; result in meters.
/// The arccos argument is clamped to [-1, 1], so the result is always finite
/// and non-negative, and great_circle(a, b) == great_circle(b, a) bit-for-bit.
double great_circle(const GeoPoint& a, const GeoPoint& b) noexcept;

/// Per-point trigonometry for hot loops. great_circle(a, b) is defined as
/// great_circle(SphericalPoint(a), SphericalPoint(b)), so both paths agree
/// exactly.
struct SphericalPoint {
  double sin_lat = 0.0;
  double cos_lat = 1.0;
  double lon_rad = 0.0;

  SphericalPoint() = default;
  explicit SphericalPoint(const GeoPoint& p) noexcept;
};

double great_circle(const SphericalPoint& a, const SphericalPoint& b) noexcept;

}  // namespace urbanet
