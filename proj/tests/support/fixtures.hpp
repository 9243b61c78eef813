#pragma once

// Test-side helpers: board builders, seeded generators and brute-force
// oracles that never call into the geometry library.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "renew/renew.hpp"

namespace fixtures {

using renew::Board;
using renew::Net;
using renew::Pad;
using renew::PadShape;
using renew::Point;
using renew::Track;

// ---------------------------------------------------------------------------
// Oracles

using RawRing = std::vector<Point>;

/// Even-odd crossing test against a list of rings (outer rings and holes alike).
inline bool insideRings(const std::vector<RawRing>& rings, Point p) {
  bool in = false;
  for (const auto& r : rings) {
    const std::size_t n = r.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point a = r[i];
      const Point b = r[j];
      if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
    }
  }
  return in;
}

inline double segmentDistance(Point p, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 == 0.0 ? 0.0 : ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

inline double edgeDistance(const std::vector<RawRing>& rings, Point p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : rings)
    for (std::size_t i = 0, j = r.size() - 1; i < r.size(); j = i++) best = std::min(best, segmentDistance(p, r[j], r[i]));
  return best;
}

/// Shoelace area of one ring, sign ignored.
inline double shoelace(const RawRing& r) {
  double s = 0.0;
  for (std::size_t i = 0, j = r.size() - 1; i < r.size(); j = i++) s += r[j].x * r[i].y - r[i].x * r[j].y;
  return std::abs(s) / 2.0;
}

/// Rasterized area of a region on an n x n grid over [x0,x1]x[y0,y1].
inline double rasterArea(const std::vector<RawRing>& rings, double x0, double y0, double x1, double y1, int n) {
  const double hx = (x1 - x0) / n;
  const double hy = (y1 - y0) / n;
  long hits = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (insideRings(rings, {x0 + (i + 0.5) * hx, y0 + (j + 0.5) * hy})) ++hits;
  return hits * hx * hy;
}

/// Exact area of a stadium (capsule): rectangle plus one full disc.
inline double stadiumArea(double length, double radius) {
  return 2.0 * radius * length + std::numbers::pi * radius * radius;
}

/// Area of a convex polygon of perimeter P and area A dilated by r.
/// Area of the regular n-gon inscribed in a circle of radius r.
inline double inscribedDiscArea(double r, int n) { return 0.5 * n * r * r * std::sin(2.0 * std::numbers::pi / n); }

inline double dilatedConvexArea(double A, double P, double r) { return A + P * r + std::numbers::pi * r * r; }

// ---------------------------------------------------------------------------
// Random geometry

/// Star-shaped simple polygon: evenly spaced jittered angles around a centre.
inline RawRing randomStarPolygon(std::mt19937_64& rng, int maxVertices = 12) {
  std::uniform_int_distribution<int> count(3, maxVertices);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = count(rng);
  const Point c{20.0 + 60.0 * unit(rng), 20.0 + 60.0 * unit(rng)};
  RawRing r;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * (i + 0.8 * unit(rng)) / n;
    const double rad = 5.0 + 30.0 * unit(rng);
    r.push_back({std::clamp(c.x + rad * std::cos(a), 0.0, 100.0), std::clamp(c.y + rad * std::sin(a), 0.0, 100.0)});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Board builders

inline Track track(double x1, double y1, double x2, double y2, double w) { return {{x1, y1}, {x2, y2}, w}; }

inline Pad pad(double x, double y, PadShape shape, double w, double h, double rot = 0.0,
               std::optional<std::string> fp = std::nullopt) {
  Pad p;
  p.center = {x, y};
  p.shape = shape;
  p.width = w;
  p.height = h;
  p.rotation = rot;
  p.footprint = std::move(fp);
  return p;
}

inline Net net(int id, std::string name, std::vector<Track> tracks, std::vector<Pad> pads = {},
               std::string layer = "F.Cu") {
  Net n;
  n.id = id;
  n.name = std::move(name);
  n.layer = std::move(layer);
  n.tracks = std::move(tracks);
  n.pads = std::move(pads);
  return n;
}

inline Board board(std::string name, double w, double h, std::vector<Net> nets, double iso = 0.4,
                   std::vector<std::string> layers = {"F.Cu"}) {
  Board b;
  b.name = std::move(name);
  b.layers = std::move(layers);
  b.nets = std::move(nets);
  b.outline = renew::rectangle(0.0, 0.0, w, h);
  b.drcMinIsolationWidth = iso;
  return b;
}

/// The renewal scenario used across CLI, service and acceptance checks: a
/// 60 x 60 mm board where one signal is rerouted and a test pad is added.
struct RollerPair {
  Board oldBoard;
  Board newBoard;
};

inline RollerPair rollerPair() {
  using S = PadShape;
  const std::vector<Pad> vccPads{pad(10, 10, S::Circle, 1.8, 1.8, 0, "J1"), pad(50, 10, S::Rect, 1.6, 1.6, 0, "U1")};
  const std::vector<Pad> stepPads{pad(10, 20, S::Circle, 1.8, 1.8, 0, "J1"), pad(50, 30, S::Rect, 1.6, 1.6, 0, "U1")};
  const std::vector<Pad> gndPads{pad(10, 50, S::Circle, 1.8, 1.8, 0, "J1"), pad(50, 50, S::Rect, 1.6, 1.6, 0, "U1")};
  RollerPair r;
  r.oldBoard = board("roller-a", 60, 60,
                     {net(1, "VCC", {track(10, 10, 50, 10, 0.6)}, vccPads),
                      net(2, "STEP", {track(10, 20, 35, 20, 0.4), track(35, 20, 35, 30, 0.4), track(35, 30, 50, 30, 0.4)},
                          stepPads),
                      net(3, "GND", {track(10, 50, 50, 50, 0.8)}, gndPads)});
  r.oldBoard.footprints = {{"J1", {10, 30}, {"1", "2", "3"}}, {"U1", {50, 30}, {"1", "2", "3"}}};
  r.newBoard = r.oldBoard;
  r.newBoard.name = "roller-b";
  r.newBoard.nets[1].tracks = {track(10, 20, 22, 20, 0.4), track(22, 20, 22, 30, 0.4), track(22, 30, 50, 30, 0.4)};
  r.newBoard.nets[2].tracks.push_back(track(30, 50, 30, 42, 0.8));
  r.newBoard.nets[2].pads.push_back(pad(30, 42, S::Rect, 2.0, 2.0, 0, "TP1"));
  r.newBoard.footprints.push_back({"TP1", {30, 42}, {"1"}});
  return r;
}

// ---------------------------------------------------------------------------
// Seeded corpora

/// Random board exercising every field, for serialization round trips.
inline Board randomBoard(std::mt19937_64& rng, int index) {
  std::uniform_real_distribution<double> coord(1.0, 99.0);
  std::uniform_real_distribution<double> size(0.15, 2.5);
  std::uniform_real_distribution<double> rot(0.0, 359.9);
  std::uniform_int_distribution<int> small(0, 4);
  std::uniform_int_distribution<int> shape(0, 2);
  Board b;
  b.name = "random-" + std::to_string(index);
  b.layers = small(rng) % 2 ? std::vector<std::string>{"F.Cu", "B.Cu"} : std::vector<std::string>{"F.Cu"};
  b.drcMinIsolationWidth = 0.1 + 0.5 * std::uniform_real_distribution<double>(0, 1)(rng);
  b.iterationIndex = 1 + small(rng);
  b.baseEngraveDepth = 0.1 + 0.1 * std::uniform_real_distribution<double>(0, 1)(rng);
  b.outline = index % 3 == 0 ? renew::assembleRings({{{0, 0}, {100, 0}, {100, 100}, {0, 100}}, {{40, 40}, {45, 40}, {45, 45}, {40, 45}}})
                             : renew::rectangle(0, 0, 100, 100);
  const int nets = 1 + small(rng) + small(rng);
  for (int i = 0; i < nets; ++i) {
    Net n;
    n.id = 10 * i + 1;
    n.name = "N" + std::to_string(i) + (i % 2 ? "/sig \"q\"" : "");
    n.layer = b.layers[static_cast<std::size_t>(i) % b.layers.size()];
    const int tracks = small(rng);
    for (int k = 0; k < tracks; ++k) n.tracks.push_back({{coord(rng), coord(rng)}, {coord(rng), coord(rng)}, size(rng)});
    const int pads = 1 + small(rng) / 2;
    for (int k = 0; k < pads; ++k)
      n.pads.push_back(pad(coord(rng), coord(rng), static_cast<PadShape>(shape(rng)), size(rng), size(rng), rot(rng),
                           k % 2 ? std::optional<std::string>("U" + std::to_string(i)) : std::nullopt));
    b.nets.push_back(std::move(n));
  }
  for (int k = small(rng); k > 0; --k) {
    const double drill = 0.2 + 0.4 * std::uniform_real_distribution<double>(0, 1)(rng);
    b.vias.push_back({{coord(rng), coord(rng)}, drill, drill + 0.3, b.layers.front(), b.layers.back()});
  }
  for (int k = small(rng); k > 0; --k) b.holes.push_back({{coord(rng), coord(rng)}, size(rng)});
  for (int k = small(rng); k > 0; --k)
    b.footprints.push_back({"FP" + std::to_string(k), {coord(rng), coord(rng)}, {"1", "2"}});
  return b;
}

/// One pair of the diff property corpus. `adjacent` marks pairs where a
/// changed net touches an unchanged one, so prefiltering may legitimately
/// change the result.
struct DiffFixture {
  std::string name;
  Board a;
  Board b;
  bool adjacent{false};
};

namespace detail {

// Net k lives in the band y in [15k - 10, 15k].
inline Net bandNet(std::mt19937_64& rng, int k, const std::string& layer) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double y0 = 15.0 * k - 10.0;
  auto y = [&] { return y0 + 1.5 + 7.0 * u(rng); };
  std::vector<Point> pts{{5.0 + 10.0 * u(rng), y()}};
  const int legs = 1 + static_cast<int>(3 * u(rng));
  for (int i = 0; i < legs; ++i) pts.push_back({pts.back().x + 8.0 + 20.0 * u(rng), y()});
  const double w = 0.2 + 0.6 * u(rng);
  Net n;
  n.id = k;
  n.name = "band" + std::to_string(k);
  n.layer = layer;
  for (std::size_t i = 1; i < pts.size(); ++i) n.tracks.push_back({pts[i - 1], pts[i], w});
  const auto s = static_cast<PadShape>(static_cast<int>(3 * u(rng)) % 3);
  n.pads.push_back(pad(pts.front().x, pts.front().y, s, 1.2, 0.9 + 0.6 * u(rng), s == PadShape::Circle ? 0.0 : 30.0));
  n.pads.push_back(pad(pts.back().x, pts.back().y, PadShape::Rect, 1.4, 1.4, 0.0));
  return n;
}

}  // namespace detail

/// Twenty board pairs covering reroutes, additions, removals, pad edits,
/// width changes and a second layer.
inline std::vector<DiffFixture> diffCorpus() {
  std::vector<DiffFixture> out;
  for (int f = 0; f < 20; ++f) {
    std::mt19937_64 rng(1000 + f);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const bool twoLayers = f % 4 == 3;
    std::vector<std::string> layers{"F.Cu"};
    if (twoLayers) layers.push_back("B.Cu");
    DiffFixture fx;
    fx.name = "fixture-" + std::to_string(f);
    std::vector<Net> nets;
    for (int k = 1; k <= 5; ++k) nets.push_back(detail::bandNet(rng, k, layers[static_cast<std::size_t>(k) % layers.size()]));
    fx.a = board(fx.name + "-a", 100, 100, nets, 0.3, layers);
    fx.b = fx.a;
    fx.b.name = fx.name + "-b";
    auto& nb = fx.b.nets;
    switch (f % 5) {
      case 0: {  // reroute one net inside its band
        const std::string layer = nb[1].layer;
        nb[1] = detail::bandNet(rng, 2, layer);
        break;
      }
      case 1:  // add a net in the empty top band
        nb.push_back(detail::bandNet(rng, 6, layers.front()));
        break;
      case 2:  // remove a net
        nb.erase(nb.begin() + 2);
        break;
      case 3:  // pad resized and track widened
        nb[0].pads[0].width += 0.5;
        nb[3].tracks[0].width += 0.3;
        break;
      case 4:  // two nets rerouted, one removed
        nb[0] = detail::bandNet(rng, 1, nb[0].layer);
        nb[4] = detail::bandNet(rng, 5, nb[4].layer);
        nb.erase(nb.begin() + 1);
        break;
    }
    // Every fourth fixture drags a changed track into a neighbouring band.
    if (f % 4 == 1 && f % 5 != 2) {
      Net& n = nb.front();
      n.tracks.push_back({n.tracks.back().end, {n.tracks.back().end.x, 15.0 * (n.id + 1) - 5.0}, 0.5});
      fx.adjacent = true;
    }
    out.push_back(std::move(fx));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Field comparison written independently of renew::approxEqual.

inline std::string boardMismatch(const Board& a, const Board& b, double tol) {
  auto bad = [tol](double x, double y) { return !(std::abs(x - y) <= tol); };
  if (a.name != b.name) return "name";
  if (a.layers != b.layers) return "layers";
  if (a.iterationIndex != b.iterationIndex) return "iterationIndex";
  if (bad(a.drcMinIsolationWidth, b.drcMinIsolationWidth)) return "drcMinIsolationWidth";
  if (bad(a.baseEngraveDepth, b.baseEngraveDepth)) return "baseEngraveDepth";
  if (a.nets.size() != b.nets.size()) return "nets.size";
  for (std::size_t i = 0; i < a.nets.size(); ++i) {
    const auto& x = a.nets[i];
    const auto& y = b.nets[i];
    const std::string at = "nets[" + std::to_string(i) + "]";
    if (x.id != y.id || x.name != y.name || x.layer != y.layer) return at + ".header";
    if (x.tracks.size() != y.tracks.size() || x.pads.size() != y.pads.size()) return at + ".sizes";
    for (std::size_t k = 0; k < x.tracks.size(); ++k) {
      const auto& s = x.tracks[k];
      const auto& t = y.tracks[k];
      if (bad(s.start.x, t.start.x) || bad(s.start.y, t.start.y) || bad(s.end.x, t.end.x) || bad(s.end.y, t.end.y) ||
          bad(s.width, t.width))
        return at + ".tracks[" + std::to_string(k) + "]";
    }
    for (std::size_t k = 0; k < x.pads.size(); ++k) {
      const auto& s = x.pads[k];
      const auto& t = y.pads[k];
      if (bad(s.center.x, t.center.x) || bad(s.center.y, t.center.y) || s.shape != t.shape || bad(s.width, t.width) ||
          bad(s.height, t.height) || bad(s.rotation, t.rotation) || s.footprint != t.footprint)
        return at + ".pads[" + std::to_string(k) + "]";
    }
  }
  if (a.vias.size() != b.vias.size()) return "vias.size";
  for (std::size_t i = 0; i < a.vias.size(); ++i) {
    const auto& x = a.vias[i];
    const auto& y = b.vias[i];
    if (bad(x.position.x, y.position.x) || bad(x.position.y, y.position.y) || bad(x.drill, y.drill) ||
        bad(x.diameter, y.diameter) || x.fromLayer != y.fromLayer || x.toLayer != y.toLayer)
      return "vias[" + std::to_string(i) + "]";
  }
  if (a.holes.size() != b.holes.size()) return "holes.size";
  for (std::size_t i = 0; i < a.holes.size(); ++i)
    if (bad(a.holes[i].position.x, b.holes[i].position.x) || bad(a.holes[i].position.y, b.holes[i].position.y) ||
        bad(a.holes[i].drill, b.holes[i].drill))
      return "holes[" + std::to_string(i) + "]";
  if (a.footprints.size() != b.footprints.size()) return "footprints.size";
  for (std::size_t i = 0; i < a.footprints.size(); ++i) {
    const auto& x = a.footprints[i];
    const auto& y = b.footprints[i];
    if (x.reference != y.reference || bad(x.center.x, y.center.x) || bad(x.center.y, y.center.y) ||
        x.padRefs != y.padRefs)
      return "footprints[" + std::to_string(i) + "]";
  }
  // Outline compared as the set of ring vertices in stored order.
  std::vector<Point> va, vb;
  for (const auto& poly : a.outline) {
    for (Point p : poly.outer()) va.push_back(p);
    for (const auto& h : poly.inners())
      for (Point p : h) va.push_back(p);
  }
  for (const auto& poly : b.outline) {
    for (Point p : poly.outer()) vb.push_back(p);
    for (const auto& h : poly.inners())
      for (Point p : h) vb.push_back(p);
  }
  if (va.size() != vb.size()) return "outline.size";
  for (std::size_t i = 0; i < va.size(); ++i)
    if (bad(va[i].x, vb[i].x) || bad(va[i].y, vb[i].y)) return "outline[" + std::to_string(i) + "]";
  return {};
}

inline std::string toJsonText(const Board& b) { return renew::serializeCanonicalJson(b); }

}  // namespace fixtures
