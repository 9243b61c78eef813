#pragma once

// Board data model. All lengths are millimetres, all angles degrees.

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "renew/error.hpp"
#include "renew/geometry.hpp"

namespace renew {

using LayerName = std::string;

inline constexpr double kMmPerMil = 0.0254;

constexpr double milsToMm(double mils) { return mils * kMmPerMil; }

struct Track {
  Point start;
  Point end;
  double width{0.0};

  friend bool operator==(const Track&, const Track&) = default;
};

enum class PadShape { Circle, Rect, Oval };

inline const char* to_string(PadShape s) {
  switch (s) {
    case PadShape::Circle: return "circle";
    case PadShape::Rect: return "rect";
    case PadShape::Oval: return "oval";
  }
  return "circle";
}

inline std::optional<PadShape> padShapeFromString(const std::string& s) {
  if (s == "circle") return PadShape::Circle;
  if (s == "rect") return PadShape::Rect;
  if (s == "oval") return PadShape::Oval;
  return std::nullopt;
}

struct Pad {
  Point center;
  PadShape shape{PadShape::Circle};
  double width{0.0};
  double height{0.0};
  double rotation{0.0};
  std::optional<std::string> footprint;

  friend bool operator==(const Pad&, const Pad&) = default;
};

struct Via {
  Point position;
  double drill{0.0};
  double diameter{0.0};
  LayerName fromLayer;
  LayerName toLayer;

  friend bool operator==(const Via&, const Via&) = default;
};

/// Non-plated (or otherwise bare) hole through the substrate.
struct Hole {
  Point position;
  double drill{0.0};

  friend bool operator==(const Hole&, const Hole&) = default;
};

struct Footprint {
  std::string reference;
  Point center;
  std::vector<std::string> padRefs;

  friend bool operator==(const Footprint&, const Footprint&) = default;
};

struct Net {
  int id{0};
  std::string name;
  LayerName layer;
  std::vector<Track> tracks;
  std::vector<Pad> pads;

  friend bool operator==(const Net&, const Net&) = default;
};

struct Board {
  std::string name;
  std::vector<LayerName> layers;
  std::vector<Net> nets;
  std::vector<Via> vias;
  std::vector<Hole> holes;
  std::vector<Footprint> footprints;
  PolygonSet outline;
  double drcMinIsolationWidth{0.0};
  int iterationIndex{1};
  double baseEngraveDepth{0.15};

  std::size_t padCount() const {
    std::size_t n = 0;
    for (const Net& net : nets) n += net.pads.size();
    return n;
  }

  const Footprint* findFootprint(const std::string& ref) const {
    for (const Footprint& f : footprints)
      if (f.reference == ref) return &f;
    return nullptr;
  }

  bool hasLayer(const LayerName& l) const {
    for (const LayerName& x : layers)
      if (x == l) return true;
    return false;
  }
};

/// Nets grouped by copper layer. Keys are exactly the layers selected when
/// the map was built; a selected layer without nets maps to an empty list.
using NetMap = std::map<LayerName, std::vector<Net>>;

inline std::size_t netCount(const NetMap& m) {
  std::size_t n = 0;
  for (const auto& [layer, nets] : m) n += nets.size();
  return n;
}

struct Violation {
  std::string field;
  std::string rule;

  friend bool operator==(const Violation&, const Violation&) = default;
};

namespace detail {

inline bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace detail

inline std::vector<Violation> validateBoard(const Board& b) {
  std::vector<Violation> out;
  auto fail = [&](std::string field, std::string rule) { out.push_back({std::move(field), std::move(rule)}); };

  if (b.layers.empty()) fail("layers", "at least one layer required");
  if (!(b.drcMinIsolationWidth > 0.0) || !std::isfinite(b.drcMinIsolationWidth))
    fail("drcMinIsolationWidth", "must be > 0");
  if (b.iterationIndex < 1) fail("iterationIndex", "must be >= 1");
  if (!(b.baseEngraveDepth > 0.0) || !std::isfinite(b.baseEngraveDepth))
    fail("baseEngraveDepth", "must be > 0");

  if (b.outline.empty()) {
    fail("outline", "must be non-empty");
  } else {
    bool finiteOutline = true;
    for (const auto& ring : openRings(b.outline))
      for (Point p : ring) finiteOutline = finiteOutline && detail::finite(p);
    std::string why;
    if (!finiteOutline)
      fail("outline", "coordinates must be finite");
    else if (!isValid(b.outline, &why))
      fail("outline", "must be closed and non-self-intersecting (" + why + ")");
  }

  std::set<int> ids;
  for (std::size_t i = 0; i < b.nets.size(); ++i) {
    const Net& n = b.nets[i];
    const std::string at = "nets[" + std::to_string(i) + "]";
    if (!ids.insert(n.id).second) fail(at + ".id", "net ids must be unique");
    if (!b.hasLayer(n.layer)) fail(at + ".layer", "layer '" + n.layer + "' not declared on board");
    if (n.tracks.empty() && n.pads.empty()) fail(at, "net must contain at least one track or pad");
    for (std::size_t k = 0; k < n.tracks.size(); ++k) {
      const Track& t = n.tracks[k];
      const std::string tat = at + ".tracks[" + std::to_string(k) + "]";
      if (!detail::finite(t.start) || !detail::finite(t.end)) fail(tat, "coordinates must be finite");
      else if (t.start == t.end) fail(tat, "start must differ from end");
      if (!(t.width > 0.0)) fail(tat + ".width", "must be > 0");
    }
    for (std::size_t k = 0; k < n.pads.size(); ++k) {
      const Pad& p = n.pads[k];
      const std::string pat = at + ".pads[" + std::to_string(k) + "]";
      if (!detail::finite(p.center)) fail(pat, "coordinates must be finite");
      if (!(p.width > 0.0) || !(p.height > 0.0)) fail(pat + ".size", "components must be > 0");
      if (!(p.rotation >= 0.0 && p.rotation < 360.0)) fail(pat + ".rotation", "must be in [0, 360)");
    }
  }

  for (std::size_t i = 0; i < b.vias.size(); ++i) {
    const Via& v = b.vias[i];
    const std::string at = "vias[" + std::to_string(i) + "]";
    if (!detail::finite(v.position)) fail(at, "coordinates must be finite");
    if (!(v.drill > 0.0) || !(v.diameter > v.drill)) fail(at, "requires diameter > drill > 0");
  }
  for (std::size_t i = 0; i < b.holes.size(); ++i) {
    const Hole& h = b.holes[i];
    const std::string at = "holes[" + std::to_string(i) + "]";
    if (!detail::finite(h.position)) fail(at, "coordinates must be finite");
    if (!(h.drill > 0.0)) fail(at + ".drill", "must be > 0");
  }
  std::set<std::string> refs;
  for (std::size_t i = 0; i < b.footprints.size(); ++i) {
    const Footprint& f = b.footprints[i];
    const std::string at = "footprints[" + std::to_string(i) + "]";
    if (!refs.insert(f.reference).second) fail(at + ".reference", "reference '" + f.reference + "' is not unique");
    if (!detail::finite(f.center)) fail(at, "coordinates must be finite");
  }
  return out;
}

/// Groups the board's nets on the selected layers.
inline NetMap buildNetMap(const Board& board, const std::vector<LayerName>& layers) {
  NetMap map;
  for (const LayerName& l : layers) {
    if (!board.hasLayer(l)) throw Error("unknown layer '" + l + "' on board '" + board.name + "'");
    map[l];
  }
  for (const Net& n : board.nets) {
    auto it = map.find(n.layer);
    if (it != map.end()) it->second.push_back(n);
  }
  return map;
}

/// Field-wise equality with coordinates and lengths compared to `tol` mm.
inline bool approxEqual(const Board& a, const Board& b, double tol) {
  auto near = [tol](double x, double y) { return std::abs(x - y) <= tol; };
  auto nearP = [&](Point p, Point q) { return near(p.x, q.x) && near(p.y, q.y); };

  if (a.name != b.name || a.layers != b.layers || a.iterationIndex != b.iterationIndex) return false;
  if (!near(a.drcMinIsolationWidth, b.drcMinIsolationWidth) || !near(a.baseEngraveDepth, b.baseEngraveDepth))
    return false;
  if (a.nets.size() != b.nets.size() || a.vias.size() != b.vias.size() || a.holes.size() != b.holes.size() ||
      a.footprints.size() != b.footprints.size())
    return false;
  for (std::size_t i = 0; i < a.nets.size(); ++i) {
    const Net& x = a.nets[i];
    const Net& y = b.nets[i];
    if (x.id != y.id || x.name != y.name || x.layer != y.layer) return false;
    if (x.tracks.size() != y.tracks.size() || x.pads.size() != y.pads.size()) return false;
    for (std::size_t k = 0; k < x.tracks.size(); ++k) {
      const Track& s = x.tracks[k];
      const Track& t = y.tracks[k];
      if (!nearP(s.start, t.start) || !nearP(s.end, t.end) || !near(s.width, t.width)) return false;
    }
    for (std::size_t k = 0; k < x.pads.size(); ++k) {
      const Pad& s = x.pads[k];
      const Pad& t = y.pads[k];
      if (!nearP(s.center, t.center) || s.shape != t.shape || !near(s.width, t.width) ||
          !near(s.height, t.height) || !near(s.rotation, t.rotation) || s.footprint != t.footprint)
        return false;
    }
  }
  for (std::size_t i = 0; i < a.vias.size(); ++i) {
    const Via& x = a.vias[i];
    const Via& y = b.vias[i];
    if (!nearP(x.position, y.position) || !near(x.drill, y.drill) || !near(x.diameter, y.diameter) ||
        x.fromLayer != y.fromLayer || x.toLayer != y.toLayer)
      return false;
  }
  for (std::size_t i = 0; i < a.holes.size(); ++i)
    if (!nearP(a.holes[i].position, b.holes[i].position) || !near(a.holes[i].drill, b.holes[i].drill)) return false;
  for (std::size_t i = 0; i < a.footprints.size(); ++i) {
    const Footprint& x = a.footprints[i];
    const Footprint& y = b.footprints[i];
    if (x.reference != y.reference || !nearP(x.center, y.center) || x.padRefs != y.padRefs) return false;
  }
  const auto ra = openRings(a.outline);
  const auto rb = openRings(b.outline);
  if (ra.size() != rb.size()) return false;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    if (ra[i].size() != rb[i].size()) return false;
    for (std::size_t k = 0; k < ra[i].size(); ++k)
      if (!nearP(ra[i][k], rb[i][k])) return false;
  }
  return true;
}

}  // namespace renew
