#pragma once

// Planar geometry kernel. Regions are Boost.Geometry multi-polygons with
// counter-clockwise outers and clockwise holes; every operation returns a
// normalized set (welded vertices, no slivers below kMinRegionArea).
//
// Boolean operations run in Boost.Polygon on a 1 nm integer grid. The
// floating-point overlay in Boost.Geometry breaks down when two boundaries
// nearly coincide, which is the normal case when diffing two revisions of a
// board; integer snap rounding makes such edges cancel exactly.

#ifndef BOOST_ALLOW_DEPRECATED_HEADERS
#define BOOST_ALLOW_DEPRECATED_HEADERS
#endif

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/register/point.hpp>
#include <boost/polygon/polygon.hpp>

#include "renew/error.hpp"

namespace renew {

struct Point {
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Point&, const Point&) = default;
};

}  // namespace renew

BOOST_GEOMETRY_REGISTER_POINT_2D(renew::Point, double, boost::geometry::cs::cartesian, x, y)

namespace renew {

namespace bg = boost::geometry;

using Ring = bg::model::ring<Point, false, true>;
using Polygon = bg::model::polygon<Point, false, true>;
using PolygonSet = bg::model::multi_polygon<Polygon>;
using Polyline = bg::model::linestring<Point>;
using PolylineSet = bg::model::multi_linestring<Polyline>;

/// Segments used to approximate a full circle in round joins, caps and discs.
inline constexpr int kArcSegments = 64;
/// Consecutive vertices closer than this are welded.
inline constexpr double kSnapTolerance = 1e-7;
/// Rings and polygons below this area (mm^2) are numerical noise and dropped.
inline constexpr double kMinRegionArea = 1e-6;
/// Grid steps per mm for Boolean operations.
inline constexpr double kGridScale = 1e6;

inline double distance(Point a, Point b) { return std::hypot(b.x - a.x, b.y - a.y); }

struct BoundingBox {
  Point min{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point max{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  bool empty() const { return min.x > max.x || min.y > max.y; }
  double width() const { return empty() ? 0.0 : max.x - min.x; }
  double height() const { return empty() ? 0.0 : max.y - min.y; }

  void extend(Point p) {
    min.x = std::min(min.x, p.x);
    min.y = std::min(min.y, p.y);
    max.x = std::max(max.x, p.x);
    max.y = std::max(max.y, p.y);
  }
  void extend(const BoundingBox& o) {
    if (!o.empty()) {
      extend(o.min);
      extend(o.max);
    }
  }
};

/// Rigid motion restricted to quarter turns: p' = R(rotation) * p + (dx, dy).
struct Transform {
  double dx{0.0};
  double dy{0.0};
  int rotation{0};  // degrees; one of 0, 90, 180, 270

  static Transform identity() { return {}; }
  static Transform translation(double x, double y) { return {x, y, 0}; }

  bool isQuarterTurn() const {
    return rotation == 0 || rotation == 90 || rotation == 180 || rotation == 270;
  }
  bool isIdentity() const { return dx == 0.0 && dy == 0.0 && rotation == 0; }

  Point apply(Point p) const {
    Point r;
    switch (rotation) {
      case 0: r = p; break;
      case 90: r = {-p.y, p.x}; break;
      case 180: r = {-p.x, -p.y}; break;
      case 270: r = {p.y, -p.x}; break;
      default: throw Error("transform rotation must be a quarter turn, got " + std::to_string(rotation));
    }
    return {r.x + dx, r.y + dy};
  }

  friend bool operator==(const Transform&, const Transform&) = default;
};

namespace detail {

inline Ring cleanRing(const Ring& in) {
  Ring out;
  for (const Point& p : in) {
    if (out.empty() || distance(out.back(), p) > kSnapTolerance) out.push_back(p);
  }
  if (out.size() > 1 && distance(out.front(), out.back()) <= kSnapTolerance) out.back() = out.front();
  if (!out.empty() && !(out.front() == out.back())) out.push_back(out.front());
  return out;
}

inline bg::strategy::buffer::join_round joinRound() { return bg::strategy::buffer::join_round(kArcSegments); }
inline bg::strategy::buffer::end_round endRound() { return bg::strategy::buffer::end_round(kArcSegments); }
inline bg::strategy::buffer::point_circle pointCircle() { return bg::strategy::buffer::point_circle(kArcSegments); }

}  // namespace detail

/// Welds near-coincident vertices, fixes orientation and drops degenerate
/// rings and polygons.
inline PolygonSet normalize(const PolygonSet& in) {
  PolygonSet out;
  for (const Polygon& poly : in) {
    Polygon p;
    p.outer() = detail::cleanRing(poly.outer());
    if (p.outer().size() < 4 || std::abs(bg::area(p.outer())) < kMinRegionArea) continue;
    for (const Ring& hole : poly.inners()) {
      Ring h = detail::cleanRing(hole);
      if (h.size() >= 4 && std::abs(bg::area(h)) >= kMinRegionArea) p.inners().push_back(std::move(h));
    }
    bg::correct(p);
    if (bg::area(p) >= kMinRegionArea) out.push_back(std::move(p));
  }
  return out;
}

inline PolygonSet rectangle(double x0, double y0, double x1, double y1) {
  Polygon p;
  p.outer() = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}};
  bg::correct(p);
  return normalize(PolygonSet{p});
}

inline PolygonSet polygonFromPoints(const std::vector<Point>& pts) {
  Polygon p;
  for (const Point& q : pts) p.outer().push_back(q);
  bg::correct(p);
  return normalize(PolygonSet{p});
}

/// Disc approximated by kArcSegments vertices on the circle.
inline PolygonSet disc(Point center, double radius) {
  if (radius <= 0.0) return {};
  PolygonSet out;
  bg::buffer(center, out, bg::strategy::buffer::distance_symmetric<double>(radius),
             bg::strategy::buffer::side_straight(), detail::joinRound(), detail::endRound(),
             detail::pointCircle());
  return normalize(out);
}

/// Stadium: every point within `radius` of segment ab.
inline PolygonSet stadium(Point a, Point b, double radius) {
  if (radius <= 0.0) return {};
  if (distance(a, b) <= kSnapTolerance) return disc(a, radius);
  Polyline line{a, b};
  PolygonSet out;
  bg::buffer(line, out, bg::strategy::buffer::distance_symmetric<double>(radius),
             bg::strategy::buffer::side_straight(), detail::joinRound(), detail::endRound(),
             detail::pointCircle());
  return normalize(out);
}

/// Minkowski dilation of a region with a disc of the given radius, round joins.
inline PolygonSet bufferRegion(const PolygonSet& region, double halfWidth) {
  if (halfWidth < 0.0) throw Error("buffer half-width must be non-negative");
  if (halfWidth == 0.0 || region.empty()) return normalize(region);
  PolygonSet out;
  bg::buffer(region, out, bg::strategy::buffer::distance_symmetric<double>(halfWidth),
             bg::strategy::buffer::side_straight(), detail::joinRound(), detail::endRound(),
             detail::pointCircle());
  return normalize(out);
}

/// Ribbon of the given half-width around open or closed polylines.
inline PolygonSet bufferLines(const PolylineSet& lines, double halfWidth) {
  if (halfWidth < 0.0) throw Error("buffer half-width must be non-negative");
  if (halfWidth == 0.0 || lines.empty()) return {};
  PolygonSet out;
  bg::buffer(lines, out, bg::strategy::buffer::distance_symmetric<double>(halfWidth),
             bg::strategy::buffer::side_straight(), detail::joinRound(), detail::endRound(),
             detail::pointCircle());
  return normalize(out);
}

namespace detail {

namespace gtl = boost::polygon;
using GridUnit = long long;
using GridPoint = gtl::point_data<GridUnit>;
using GridRing = gtl::polygon_data<GridUnit>;
using GridPolygon = gtl::polygon_with_holes_data<GridUnit>;
using GridSet = gtl::polygon_set_data<GridUnit>;

inline GridRing toGrid(const Ring& r) {
  std::vector<GridPoint> pts;
  pts.reserve(r.size());
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    pts.emplace_back(std::llround(r[i].x * kGridScale), std::llround(r[i].y * kGridScale));
  return GridRing(pts.begin(), pts.end());
}

inline void insertGrid(GridSet& out, const PolygonSet& s) {
  for (const Polygon& p : s) {
    GridPolygon g;
    const GridRing outer = toGrid(p.outer());
    g.set(outer.begin(), outer.end());
    std::vector<GridRing> holes;
    for (const Ring& h : p.inners()) holes.push_back(toGrid(h));
    g.set_holes(holes.begin(), holes.end());
    out.insert(g);
  }
}

inline GridSet toGrid(const PolygonSet& s) {
  GridSet out;
  insertGrid(out, s);
  return out;
}

template <typename Points>
Ring fromGrid(const Points& pts) {
  Ring r;
  for (auto it = pts.begin(); it != pts.end(); ++it)
    r.push_back({static_cast<double>(gtl::x(*it)) / kGridScale, static_cast<double>(gtl::y(*it)) / kGridScale});
  return r;
}

inline PolygonSet fromGrid(const GridSet& s) {
  std::vector<GridPolygon> polys;
  s.get(polys);
  PolygonSet out;
  for (const GridPolygon& g : polys) {
    Polygon p;
    p.outer() = fromGrid(g);
    for (auto h = g.begin_holes(); h != g.end_holes(); ++h) p.inners().push_back(fromGrid(*h));
    bg::correct(p);
    out.push_back(std::move(p));
  }
  return normalize(out);
}

}  // namespace detail

inline PolygonSet booleanUnion(const PolygonSet& a, const PolygonSet& b) {
  if (a.empty()) return normalize(b);
  if (b.empty()) return normalize(a);
  detail::GridSet g;
  detail::insertGrid(g, a);
  detail::insertGrid(g, b);
  return detail::fromGrid(g);
}

/// Union of many sets in a single sweep.
inline PolygonSet booleanUnion(std::span<const PolygonSet> sets) {
  if (sets.empty()) return {};
  if (sets.size() == 1) return normalize(sets.front());
  detail::GridSet g;
  for (const PolygonSet& s : sets) detail::insertGrid(g, s);
  return detail::fromGrid(g);
}

inline PolygonSet booleanSubtract(const PolygonSet& a, const PolygonSet& b) {
  using namespace boost::polygon::operators;
  if (a.empty()) return {};
  if (b.empty()) return normalize(a);
  return detail::fromGrid(detail::GridSet(detail::toGrid(a) - detail::toGrid(b)));
}

inline PolygonSet booleanIntersect(const PolygonSet& a, const PolygonSet& b) {
  using namespace boost::polygon::operators;
  if (a.empty() || b.empty()) return {};
  return detail::fromGrid(detail::GridSet(detail::toGrid(a) & detail::toGrid(b)));
}

inline double area(const PolygonSet& s) { return s.empty() ? 0.0 : std::max(0.0, bg::area(s)); }

inline double pathLength(const PolylineSet& p) { return p.empty() ? 0.0 : bg::length(p); }

inline double perimeter(const PolygonSet& s) { return s.empty() ? 0.0 : bg::perimeter(s); }

/// Every ring of the set as a closed polyline (first point repeated last).
inline PolylineSet boundaryLines(const PolygonSet& s) {
  PolylineSet out;
  auto add = [&](const Ring& r) {
    Polyline line(r.begin(), r.end());
    if (line.size() >= 2) out.push_back(std::move(line));
  };
  for (const Polygon& p : s) {
    add(p.outer());
    for (const Ring& h : p.inners()) add(h);
  }
  return out;
}

inline double symmetricDifferenceArea(const PolygonSet& a, const PolygonSet& b) {
  return area(booleanSubtract(a, b)) + area(booleanSubtract(b, a));
}

/// True when `inner` lies inside `outer` up to kMinRegionArea of spill.
inline bool regionContains(const PolygonSet& outer, const PolygonSet& inner) {
  return area(booleanSubtract(inner, outer)) < kMinRegionArea;
}

inline bool covers(const PolygonSet& s, Point p) { return !s.empty() && bg::covered_by(p, s); }

inline bool isValid(const PolygonSet& s, std::string* reason = nullptr) {
  std::string why;
  const bool ok = bg::is_valid(s, why);
  if (!ok && reason) *reason = why;
  return ok;
}

inline BoundingBox boundingBox(const PolygonSet& s) {
  BoundingBox box;
  for (const Polygon& p : s)
    for (const Point& q : p.outer()) box.extend(q);
  return box;
}

inline PolygonSet applyTransform(const PolygonSet& s, const Transform& t) {
  if (!t.isQuarterTurn()) throw Error("transform rotation must be a quarter turn");
  PolygonSet out = s;
  for (Polygon& p : out) {
    for (Point& q : p.outer()) q = t.apply(q);
    for (Ring& h : p.inners())
      for (Point& q : h) q = t.apply(q);
  }
  return out;
}

inline PolylineSet applyTransform(const PolylineSet& s, const Transform& t) {
  if (!t.isQuarterTurn()) throw Error("transform rotation must be a quarter turn");
  PolylineSet out = s;
  for (Polyline& line : out)
    for (Point& q : line) q = t.apply(q);
  return out;
}

/// Builds a region from bare rings. Rings may be open or closed and of any
/// orientation; a ring lying inside an earlier outer ring becomes one of its
/// holes, otherwise it starts a new polygon.
inline PolygonSet assembleRings(const std::vector<std::vector<Point>>& rings) {
  PolygonSet out;
  for (const auto& pts : rings) {
    Ring r(pts.begin(), pts.end());
    r = detail::cleanRing(r);
    if (r.size() < 4) continue;
    bg::correct(r);
    Polygon* owner = nullptr;
    for (Polygon& p : out) {
      if (bg::within(r.front(), p.outer()) || bg::covered_by(r, p.outer())) {
        owner = &p;
        break;
      }
    }
    if (owner != nullptr) {
      std::reverse(r.begin(), r.end());
      owner->inners().push_back(std::move(r));
    } else {
      Polygon p;
      p.outer() = std::move(r);
      out.push_back(std::move(p));
    }
  }
  for (Polygon& p : out) bg::correct(p);
  return out;
}

/// Vertices of every ring without the closing duplicate, outer first.
inline std::vector<std::vector<Point>> openRings(const PolygonSet& s) {
  std::vector<std::vector<Point>> rings;
  auto add = [&](const Ring& r) {
    std::vector<Point> pts(r.begin(), r.end());
    if (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
    rings.push_back(std::move(pts));
  };
  for (const Polygon& p : s) {
    add(p.outer());
    for (const Ring& h : p.inners()) add(h);
  }
  return rings;
}

}  // namespace renew
