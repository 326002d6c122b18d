#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "support/oracles.hpp"
#include "urbanet/fixtures.hpp"
#include "urbanet/geo.hpp"

using urbanet::GeoPoint;
using urbanet::great_circle;

TEST(GreatCircle, IdentityIsZero) {
  const auto p = GeoPoint::make(10.0, 20.0);
  EXPECT_EQ(great_circle(p, p), 0.0);
}

TEST(GreatCircle, QuarterMeridianIsAnalytic) {
  const double expected = std::numbers::pi / 2.0 * 6'378'000.0;  // 10,018,538.97 m
  EXPECT_NEAR(great_circle(GeoPoint::make(0, 0), GeoPoint::make(0, 90)), expected, 1e-6);
}

TEST(GreatCircle, MatchesHaversineOnCityPair) {
  // Frozen from the haversine oracle (independent Python evaluation): 1193.1215 m.
  const auto a = GeoPoint::make(-22.0175, -47.8908);
  const auto b = GeoPoint::make(-22.0087, -47.8974);
  EXPECT_NEAR(oracle::haversine(a, b), 1193.121479448062, 1e-6);
  EXPECT_NEAR(great_circle(a, b), 1193.121479448062, 1193.12 * 1e-3);
}

TEST(GreatCircle, SymmetricAndTriangleOnRandomTriples) {
  std::mt19937_64 rng(42);
  auto draw = [&] {
    return GeoPoint::make(-60 + 120 * urbanet::fixtures::uniform01(rng),
                          -180 + 360 * urbanet::fixtures::uniform01(rng));
  };
  for (int i = 0; i < 2000; ++i) {
    const auto a = draw();
    const auto b = draw();
    const auto c = draw();
    EXPECT_EQ(great_circle(a, b), great_circle(b, a));
    const double ab = great_circle(a, b);
    const double bc = great_circle(b, c);
    const double ac = great_circle(a, c);
    EXPECT_LE(ac, (ab + bc) * (1 + 1e-6) + 1e-9);
  }
}

TEST(GreatCircle, NearIdenticalPointsStayFinite) {
  const auto a = GeoPoint::make(45.0, 7.0);
  const auto b = GeoPoint::make(45.0, 7.0 + 1e-12);
  const double d = great_circle(a, b);
  EXPECT_TRUE(std::isfinite(d));
  EXPECT_GE(d, 0.0);
}

TEST(GreatCircle, AntipodesClampToHalfCircumference) {
  const double d = great_circle(GeoPoint::make(0, 0), GeoPoint::make(0, -180));
  EXPECT_NEAR(d, std::numbers::pi * 6'378'000.0, 1e-3);
}

TEST(GeoPoint, NormalizesLongitudeAndRejectsBadLatitude) {
  EXPECT_DOUBLE_EQ(GeoPoint::make(0, 180).lon, -180.0);
  EXPECT_DOUBLE_EQ(GeoPoint::make(0, 190).lon, -170.0);
  EXPECT_DOUBLE_EQ(GeoPoint::make(0, -540).lon, -180.0);
  EXPECT_DOUBLE_EQ(GeoPoint::make(0, 359.5).lon, -0.5);
  EXPECT_THROW(GeoPoint::make(91, 0), std::invalid_argument);
  EXPECT_THROW(GeoPoint::make(std::nan(""), 0), std::invalid_argument);
  EXPECT_FALSE(urbanet::is_valid(GeoPoint{0, 180}));
}
