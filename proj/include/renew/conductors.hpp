#pragma once

// Conductor footprints of tracks, pads and nets, their disc dilations, and
// rigid motion of whole boards.

#include <cmath>
#include <numbers>
#include <vector>

#include "renew/geometry.hpp"
#include "renew/model.hpp"

namespace renew {

namespace detail {

inline Point rotateAbout(Point p, Point c, double degrees) {
  const double r = degrees * std::numbers::pi / 180.0;
  const double cs = std::cos(r);
  const double sn = std::sin(r);
  const double x = p.x - c.x;
  const double y = p.y - c.y;
  return {c.x + x * cs - y * sn, c.y + x * sn + y * cs};
}

inline void requireNonNegative(double halfWidth) {
  if (!(halfWidth >= 0.0)) throw Error("buffer half-width must be non-negative");
}

}  // namespace detail

/// Track as a width-w stadium grown by halfWidth.
inline PolygonSet bufferShape(const Track& t, double halfWidth) {
  detail::requireNonNegative(halfWidth);
  return stadium(t.start, t.end, t.width / 2.0 + halfWidth);
}

inline PolygonSet bufferShape(const Pad& p, double halfWidth) {
  detail::requireNonNegative(halfWidth);
  switch (p.shape) {
    case PadShape::Circle:
      return disc(p.center, p.width / 2.0 + halfWidth);
    case PadShape::Oval: {
      const double longSide = std::max(p.width, p.height);
      const double shortSide = std::min(p.width, p.height);
      const double half = (longSide - shortSide) / 2.0;
      // long axis along local x when width >= height
      const double axis = p.width >= p.height ? p.rotation : p.rotation + 90.0;
      const Point a = detail::rotateAbout({p.center.x - half, p.center.y}, p.center, axis);
      const Point b = detail::rotateAbout({p.center.x + half, p.center.y}, p.center, axis);
      return stadium(a, b, shortSide / 2.0 + halfWidth);
    }
    case PadShape::Rect: {
      const double hw = p.width / 2.0;
      const double hh = p.height / 2.0;
      std::vector<Point> corners;
      for (Point c : {Point{-hw, -hh}, Point{hw, -hh}, Point{hw, hh}, Point{-hw, hh}})
        corners.push_back(detail::rotateAbout({p.center.x + c.x, p.center.y + c.y}, p.center, p.rotation));
      return bufferRegion(polygonFromPoints(corners), halfWidth);
    }
  }
  return {};
}

inline PolygonSet bufferShape(const PolygonSet& s, double halfWidth) { return bufferRegion(s, halfWidth); }

/// Union of every track and pad of the net, each dilated by halfWidth.
inline PolygonSet bufferShape(const Net& n, double halfWidth) {
  detail::requireNonNegative(halfWidth);
  std::vector<PolygonSet> pieces;
  pieces.reserve(n.tracks.size() + n.pads.size());
  for (const Track& t : n.tracks) pieces.push_back(bufferShape(t, halfWidth));
  for (const Pad& p : n.pads) pieces.push_back(bufferShape(p, halfWidth));
  return booleanUnion(pieces);
}

/// Copper of the net itself.
inline PolygonSet conductorRegion(const Net& n) { return bufferShape(n, 0.0); }

inline double normalizeDegrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;
  return r;
}

inline Net applyTransform(const Net& n, const Transform& t) {
  if (!t.isQuarterTurn()) throw Error("transform rotation must be a quarter turn");
  Net out = n;
  for (Track& tr : out.tracks) {
    tr.start = t.apply(tr.start);
    tr.end = t.apply(tr.end);
  }
  for (Pad& p : out.pads) {
    p.center = t.apply(p.center);
    p.rotation = normalizeDegrees(p.rotation + t.rotation);
  }
  return out;
}

inline Board applyTransform(const Board& b, const Transform& t) {
  if (!t.isQuarterTurn()) throw Error("transform rotation must be a quarter turn");
  Board out = b;
  for (Net& n : out.nets) n = applyTransform(n, t);
  for (Via& v : out.vias) v.position = t.apply(v.position);
  for (Hole& h : out.holes) h.position = t.apply(h.position);
  for (Footprint& f : out.footprints) f.center = t.apply(f.center);
  out.outline = applyTransform(b.outline, t);
  return out;
}

}  // namespace renew
