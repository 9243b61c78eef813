#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "renew/renew.hpp"
#include "support/fixtures.hpp"

using namespace renew;
using fixtures::RawRing;

namespace {

PolygonSet fromRaw(const RawRing& r) { return polygonFromPoints(r); }

std::vector<RawRing> rawRings(const PolygonSet& s) { return openRings(s); }

}  // namespace

TEST(Buffer, ZeroHalfWidthReturnsPadItself) {
  const Pad p = fixtures::pad(0, 0, PadShape::Rect, 10, 10);
  EXPECT_NEAR(area(bufferShape(p, 0.0)), 100.0, 1e-9);
}

TEST(Buffer, SquareDilationMatchesAnalyticArea) {
  const double expected = fixtures::dilatedConvexArea(100.0, 40.0, 0.2);  // 108.12566
  EXPECT_NEAR(area(bufferRegion(rectangle(0, 0, 10, 10), 0.2)), expected, 1e-3);
}

TEST(Buffer, TrackStadiumMatchesAnalyticArea) {
  const Track t = fixtures::track(0, 0, 10, 0, 0.5);
  const double expected = fixtures::stadiumArea(10.0, 0.45);  // 9.63617
  EXPECT_NEAR(area(bufferShape(t, 0.2)), expected, 2e-3);
}

TEST(Buffer, NegativeHalfWidthThrows) {
  EXPECT_THROW(bufferRegion(rectangle(0, 0, 1, 1), -0.1), Error);
  EXPECT_THROW(bufferShape(fixtures::track(0, 0, 1, 0, 0.2), -1.0), Error);
}

TEST(Buffer, CirclePadIsDisc) {
  const Pad p = fixtures::pad(3, 4, PadShape::Circle, 2.0, 2.0);
  EXPECT_NEAR(area(bufferShape(p, 0.5)), fixtures::inscribedDiscArea(1.5, kArcSegments), 1e-9);
  EXPECT_NEAR(area(bufferShape(p, 0.5)), std::numbers::pi * 1.5 * 1.5, 2e-3 * std::numbers::pi * 1.5 * 1.5);
}

TEST(Buffer, OvalPadIsStadiumAlongLongAxis) {
  // 4 x 2 oval: straight part 2 mm, radius 1.
  const Pad p = fixtures::pad(0, 0, PadShape::Oval, 4.0, 2.0);
  EXPECT_NEAR(area(bufferShape(p, 0.0)), 2.0 * 2.0 + fixtures::inscribedDiscArea(1.0, kArcSegments), 1e-9);
  EXPECT_NEAR(area(bufferShape(p, 0.0)), fixtures::stadiumArea(2.0, 1.0), 1e-2);
  const Pad tall = fixtures::pad(0, 0, PadShape::Oval, 2.0, 4.0);
  const BoundingBox b = boundingBox(bufferShape(tall, 0.0));
  EXPECT_NEAR(b.height(), 4.0, 1e-6);
  EXPECT_NEAR(b.width(), 2.0, 1e-3);
}

TEST(Buffer, RotatedRectPadKeepsArea) {
  const Pad p = fixtures::pad(5, 5, PadShape::Rect, 3.0, 1.0, 30.0);
  EXPECT_NEAR(area(bufferShape(p, 0.0)), 3.0, 1e-9);
  const BoundingBox b = boundingBox(bufferShape(p, 0.0));
  const double c = std::cos(std::numbers::pi / 6), s = std::sin(std::numbers::pi / 6);
  EXPECT_NEAR(b.width(), 3.0 * c + 1.0 * s, 1e-9);
  EXPECT_NEAR(b.height(), 3.0 * s + 1.0 * c, 1e-9);
}

TEST(Buffer, MonotoneInHalfWidth) {
  const Net n = fixtures::net(1, "n", {fixtures::track(0, 0, 5, 0, 0.3), fixtures::track(5, 0, 5, 5, 0.3)},
                              {fixtures::pad(0, 0, PadShape::Rect, 1, 1)});
  const PolygonSet small = bufferShape(n, 0.1);
  const PolygonSet large = bufferShape(n, 0.4);
  EXPECT_LT(area(small), area(large));
  EXPECT_LT(area(booleanSubtract(small, large)), 1e-6);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 6.0);
  for (int i = 0; i < 2000; ++i) {
    const Point p{u(rng), u(rng)};
    if (covers(small, p)) {
      EXPECT_TRUE(covers(large, p));
    }
  }
}

TEST(Boolean, UnionExamples) {
  EXPECT_NEAR(area(booleanUnion(rectangle(0, 0, 1, 1), rectangle(2, 0, 3, 1))), 2.0, 1e-12);
  EXPECT_NEAR(area(booleanUnion(rectangle(0, 0, 1, 1), rectangle(0, 0, 1, 1))), 1.0, 1e-12);
  EXPECT_NEAR(area(booleanUnion(rectangle(0, 0, 2, 2), rectangle(1, 0, 3, 2))), 6.0, 1e-12);
}

TEST(Boolean, SubtractExamples) {
  const PolygonSet a = rectangle(0, 0, 2, 2);
  EXPECT_TRUE(booleanSubtract(a, a).empty());
  EXPECT_NEAR(area(booleanSubtract(a, {})), 4.0, 1e-12);
  const PolygonSet holed = booleanSubtract(a, rectangle(0.5, 0.5, 1.5, 1.5));
  ASSERT_EQ(holed.size(), 1u);
  EXPECT_EQ(holed.front().inners().size(), 1u);
  EXPECT_NEAR(area(holed), 3.0, 1e-12);
}

TEST(Boolean, IntersectExamples) {
  EXPECT_TRUE(booleanIntersect(rectangle(0, 0, 1, 1), rectangle(2, 2, 3, 3)).empty());
  EXPECT_NEAR(area(booleanIntersect(rectangle(0, 0, 2, 2), rectangle(0, 0, 2, 2))), 4.0, 1e-12);
  EXPECT_NEAR(area(booleanIntersect(rectangle(0, 0, 2, 2), rectangle(1, 0, 3, 2))), 2.0, 1e-12);
}

TEST(Boolean, UnionOfManyPieces) {
  std::vector<PolygonSet> pieces;
  for (int i = 0; i < 10; ++i) pieces.push_back(rectangle(i, 0, i + 1.5, 1));
  EXPECT_NEAR(area(booleanUnion(std::span<const PolygonSet>(pieces))), 10.5, 1e-9);
  EXPECT_TRUE(booleanUnion(std::span<const PolygonSet>{}).empty());
}

TEST(Boolean, SliversBelowThresholdDropped) {
  const PolygonSet a = rectangle(0, 0, 1, 1);
  const PolygonSet b = rectangle(0, 0, 1, 1 - 1e-8);
  EXPECT_TRUE(booleanSubtract(a, b).empty());
}

TEST(BooleanProperties, RandomPairsObeyAlgebra) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 60; ++i) {
    const PolygonSet a = fromRaw(fixtures::randomStarPolygon(rng));
    const PolygonSet b = fromRaw(fixtures::randomStarPolygon(rng));
    const PolygonSet c = fromRaw(fixtures::randomStarPolygon(rng));
    const double tol = 1e-9 * std::max(1.0, area(a) + area(b) + area(c));
    EXPECT_NEAR(area(booleanUnion(a, b)), area(booleanUnion(b, a)), tol);
    EXPECT_NEAR(area(booleanIntersect(a, b)), area(booleanIntersect(b, a)), tol);
    EXPECT_NEAR(area(booleanUnion(booleanUnion(a, b), c)), area(booleanUnion(a, booleanUnion(b, c))), 1e-6 * area(a));
    EXPECT_NEAR(area(booleanIntersect(booleanIntersect(a, b), c)), area(booleanIntersect(a, booleanIntersect(b, c))),
                1e-6 * area(a));
    EXPECT_NEAR(area(a), area(booleanIntersect(a, b)) + area(booleanSubtract(a, b)), 1e-6 * area(a));
    EXPECT_TRUE(isValid(booleanUnion(a, b)));
    EXPECT_TRUE(isValid(booleanSubtract(a, b)));
  }
}

TEST(BooleanProperties, AreasMatchRasterOracle) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    const RawRing ra = fixtures::randomStarPolygon(rng);
    const RawRing rb = fixtures::randomStarPolygon(rng);
    const PolygonSet u = booleanUnion(fromRaw(ra), fromRaw(rb));
    // Raster oracle of the union evaluated on the raw inputs only.
    const int n = 400;
    long hits = 0;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        const Point p{(x + 0.5) * 100.0 / n, (y + 0.5) * 100.0 / n};
        if (fixtures::insideRings({ra}, p) || fixtures::insideRings({rb}, p)) ++hits;
      }
    const double oracle = hits * (100.0 / n) * (100.0 / n);
    EXPECT_NEAR(area(u), oracle, 0.01 * oracle + 1.0);
  }
}

TEST(Measures, AreaAndLength) {
  EXPECT_EQ(area({}), 0.0);
  EXPECT_NEAR(area(rectangle(0, 0, 1, 1)), 1.0, 1e-15);
  EXPECT_EQ(pathLength({}), 0.0);
  EXPECT_NEAR(pathLength(PolylineSet{Polyline{{0, 0}, {3, 4}}}), 5.0, 1e-15);
  EXPECT_NEAR(pathLength(boundaryLines(rectangle(0, 0, 10, 10))), 40.0, 1e-12);
  EXPECT_NEAR(perimeter(rectangle(0, 0, 10, 10)), 40.0, 1e-12);
}

TEST(Measures, ShoelaceAgreesWithArea) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    const RawRing r = fixtures::randomStarPolygon(rng);
    EXPECT_NEAR(area(fromRaw(r)), fixtures::shoelace(r), 1e-9);
  }
}

TEST(Transform, IdentityTranslationRotation) {
  const PolygonSet sq = rectangle(0, 0, 2, 2);
  EXPECT_NEAR(symmetricDifferenceArea(applyTransform(sq, Transform::identity()), sq), 0.0, 1e-12);
  const BoundingBox moved = boundingBox(applyTransform(sq, Transform::translation(5, 0)));
  EXPECT_NEAR(moved.min.x, 5.0, 1e-12);
  EXPECT_NEAR(moved.min.y, 0.0, 1e-12);
  const Point r = Transform{0, 0, 90}.apply({1, 0});
  EXPECT_NEAR(r.x, 0.0, 1e-15);
  EXPECT_NEAR(r.y, 1.0, 1e-15);
  EXPECT_THROW(Transform({0, 0, 45}).apply({1, 0}), Error);
}

TEST(Transform, PreservesAreaAndLength) {
  std::mt19937_64 rng(5);
  for (int rot : {0, 90, 180, 270}) {
    const PolygonSet a = fromRaw(fixtures::randomStarPolygon(rng));
    const Transform t{12.5, -3.25, rot};
    EXPECT_NEAR(area(applyTransform(a, t)), area(a), 1e-9 * area(a));
    const PolylineSet l = boundaryLines(a);
    EXPECT_NEAR(pathLength(applyTransform(l, t)), pathLength(l), 1e-9 * pathLength(l));
    EXPECT_TRUE(isValid(applyTransform(a, t)));
  }
}

TEST(Rings, AssembleNestsHoles) {
  const PolygonSet s = assembleRings({{{0, 0}, {10, 0}, {10, 10}, {0, 10}}, {{2, 2}, {4, 2}, {4, 4}, {2, 4}}, {{20, 0}, {21, 0}, {21, 1}}});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(area(s), 100 - 4 + 0.5, 1e-12);
  const auto rings = rawRings(s);
  EXPECT_EQ(rings.size(), 3u);
  for (const auto& r : rings) EXPECT_NE(r.front(), r.back());
}

TEST(Rings, InvalidOutlineReported) {
  std::string why;
  EXPECT_FALSE(isValid(polygonFromPoints({{0, 0}, {4, 4}, {4, 0}, {0, 2}}), &why));  // lopsided bow tie
  EXPECT_FALSE(why.empty());
}
