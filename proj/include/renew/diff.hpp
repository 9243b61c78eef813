#pragma once

// Geometric comparison of an old and a new board design: alignment, net-wise
// prefilter, isolation-path creation and subtraction, via and hole planning,
// conflict detection and outline comparison.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "renew/conductors.hpp"
#include "renew/detail/json_writer.hpp"
#include "renew/error.hpp"
#include "renew/geometry.hpp"
#include "renew/model.hpp"

namespace renew {

/// Position/size tolerance (mm) for deciding two nets or vias are the same.
inline constexpr double kMatchTolerance = 1e-3;

enum class Corner { BL, BR, TL, TR };

struct AlignmentSpec {
  enum class Mode { None, BBoxCorner, FootprintCenter, Explicit };

  Mode mode{Mode::None};
  Corner corner{Corner::BL};
  std::string refOld;
  std::string refNew;
  Transform transform;

  static AlignmentSpec none() { return {}; }
  static AlignmentSpec bboxCorner(Corner c) { return {Mode::BBoxCorner, c, {}, {}, {}}; }
  static AlignmentSpec footprintCenter(std::string oldRef, std::string newRef) {
    return {Mode::FootprintCenter, Corner::BL, std::move(oldRef), std::move(newRef), {}};
  }
  static AlignmentSpec explicitTransform(Transform t) { return {Mode::Explicit, Corner::BL, {}, {}, t}; }
};

struct ViaPlan {
  std::vector<Via> keep;
  std::vector<Hole> drillOut;
  std::vector<Via> addManual;
};

struct ConflictReport {
  std::map<LayerName, PolygonSet> conflictRegions;
  std::vector<std::string> messages;

  bool empty() const { return messages.empty(); }
};

struct RenewalMetrics {
  double A_g{0.0};       // groove area to fill with epoxy, mm^2
  double L_d{0.0};       // deposition path length, mm
  double L_t{0.0};       // trace engraving length of the new design on fresh stock, mm
  double L_tPrime{0.0};  // trace engraving length on the renewed board, mm
  double L_o{0.0};       // outline length of the new design on fresh stock, mm
  double L_oPrime{0.0};  // outline modification cut on the renewed board, mm
  double L_s{0.0};       // stencil contour length, mm
  int n_p{0};            // pads on the old board
  int n{2};              // renewal iteration

  friend bool operator==(const RenewalMetrics&, const RenewalMetrics&) = default;
};

using LayerRegions = std::map<LayerName, PolygonSet>;
using LayerLines = std::map<LayerName, PolylineSet>;

struct RenewalPlan {
  std::vector<LayerName> layers;
  Transform transform;
  double isolationWidth{0.0};
  LayerRegions depositRegions;
  LayerRegions engraveRegions;
  LayerLines depositMidlines;
  LayerLines engraveMidlines;
  ViaPlan viaPlan;
  PolygonSet trimRegion;
  PolylineSet outlineCut;
  ConflictReport conflicts;
  RenewalMetrics metrics;
};

// ---------------------------------------------------------------------------
// Alignment

inline Point bboxCorner(const BoundingBox& b, Corner c) {
  switch (c) {
    case Corner::BL: return b.min;
    case Corner::BR: return {b.max.x, b.min.y};
    case Corner::TL: return {b.min.x, b.max.y};
    case Corner::TR: return b.max;
  }
  return b.min;
}

/// Transform taking new-board coordinates into the old board's frame.
inline Transform computeAlignment(const Board& oldBoard, const Board& newBoard, const AlignmentSpec& spec) {
  switch (spec.mode) {
    case AlignmentSpec::Mode::None:
      return Transform::identity();
    case AlignmentSpec::Mode::Explicit:
      if (!spec.transform.isQuarterTurn()) throw Error("alignment rotation must be a quarter turn");
      return spec.transform;
    case AlignmentSpec::Mode::BBoxCorner: {
      const BoundingBox ob = boundingBox(oldBoard.outline);
      const BoundingBox nb = boundingBox(newBoard.outline);
      if (ob.empty() || nb.empty()) throw Error("bounding-box alignment needs both board outlines");
      const Point a = bboxCorner(ob, spec.corner);
      const Point b = bboxCorner(nb, spec.corner);
      return Transform::translation(a.x - b.x, a.y - b.y);
    }
    case AlignmentSpec::Mode::FootprintCenter: {
      const Footprint* fo = oldBoard.findFootprint(spec.refOld);
      if (!fo) throw Error("footprint '" + spec.refOld + "' not found on old board");
      const Footprint* fn = newBoard.findFootprint(spec.refNew);
      if (!fn) throw Error("footprint '" + spec.refNew + "' not found on new board");
      return Transform::translation(fo->center.x - fn->center.x, fo->center.y - fn->center.y);
    }
  }
  return Transform::identity();
}

// ---------------------------------------------------------------------------
// Net-wise comparison

namespace detail {

inline bool near(double a, double b, double eps) { return std::abs(a - b) <= eps; }
inline bool near(Point a, Point b, double eps) { return near(a.x, b.x, eps) && near(a.y, b.y, eps); }

inline bool sameTrack(const Track& a, const Track& b, double eps) {
  if (!near(a.width, b.width, eps)) return false;
  return (near(a.start, b.start, eps) && near(a.end, b.end, eps)) ||
         (near(a.start, b.end, eps) && near(a.end, b.start, eps));
}

/// Pad extent as (long side, short side, long-side direction mod 180). Rect and
/// oval pads look the same after a half turn; a circle has no direction.
struct PadExtent {
  double length;
  double breadth;
  double direction;
};

inline PadExtent padExtent(const Pad& p) {
  PadExtent e{p.width, p.height, p.rotation};
  if (e.length < e.breadth) {
    std::swap(e.length, e.breadth);
    e.direction += 90.0;
  }
  e.direction = std::fmod(e.direction, 180.0);
  if (e.direction < 0.0) e.direction += 180.0;
  return e;
}

inline bool samePad(const Pad& a, const Pad& b, double eps) {
  if (a.shape != b.shape || !near(a.center, b.center, eps)) return false;
  const PadExtent x = padExtent(a), y = padExtent(b);
  if (!near(x.length, y.length, eps) || !near(x.breadth, y.breadth, eps)) return false;
  if (a.shape == PadShape::Circle || near(x.length, x.breadth, eps)) {
    // Square rect pads repeat every quarter turn.
    if (a.shape == PadShape::Circle) return true;
    const double d = std::fmod(std::abs(x.direction - y.direction), 90.0);
    return std::min(d, 90.0 - d) <= eps;
  }
  const double d = std::abs(x.direction - y.direction);
  return std::min(d, 180.0 - d) <= eps;
}

/// One-to-one matching of two multisets under a tolerance predicate.
template <typename T, typename Eq>
bool sameMultiset(const std::vector<T>& a, const std::vector<T>& b, Eq eq) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const T& x : a) {
    bool found = false;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (!used[k] && eq(x, b[k])) {
        used[k] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace detail

/// Same layer, and the same tracks and pads (as multisets) within eps.
inline bool netsEqual(const Net& a, const Net& b, double eps = kMatchTolerance) {
  if (a.layer != b.layer) return false;
  return detail::sameMultiset(a.tracks, b.tracks, [eps](const Track& x, const Track& y) {
           return detail::sameTrack(x, y, eps);
         }) &&
         detail::sameMultiset(a.pads, b.pads, [eps](const Pad& x, const Pad& y) { return detail::samePad(x, y, eps); });
}

struct UniqueNets {
  NetMap oldUnique;
  NetMap newUnique;
};

/// Drops nets present with identical geometry on both boards. Each old net
/// consumes at most one equal new net, in map order.
inline UniqueNets compareNets(const NetMap& oldNets, const NetMap& newNets, const std::vector<LayerName>& layers) {
  UniqueNets out;
  for (const LayerName& layer : layers) {
    std::vector<Net>& oldUnique = out.oldUnique[layer];
    std::vector<Net>& newUnique = out.newUnique[layer];
    oldUnique.clear();
    if (auto it = newNets.find(layer); it != newNets.end()) newUnique = it->second;
    auto it = oldNets.find(layer);
    if (it == oldNets.end()) continue;
    for (const Net& oldNet : it->second) {
      bool matched = false;
      for (auto n = newUnique.begin(); n != newUnique.end(); ++n) {
        if (netsEqual(oldNet, *n)) {
          matched = true;
          newUnique.erase(n);
          break;
        }
      }
      if (!matched) oldUnique.push_back(oldNet);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Isolation paths

/// Per layer, the union of every net grown by half the isolation width.
inline LayerRegions createPaths(const NetMap& nets, const std::vector<LayerName>& layers, double minIsolationWidth) {
  if (!(minIsolationWidth > 0.0)) throw Error("minimum isolation width must be > 0");
  LayerRegions out;
  for (const LayerName& layer : layers) {
    std::vector<PolygonSet> pieces;
    if (auto it = nets.find(layer); it != nets.end())
      for (const Net& n : it->second) pieces.push_back(bufferShape(n, minIsolationWidth / 2.0));
    out[layer] = booleanUnion(pieces);
  }
  return out;
}

struct PathDiff {
  LayerRegions deposit;  // old paths not covered by new paths
  LayerRegions engrave;  // new paths not covered by old paths
};

inline PathDiff comparePaths(const NetMap& oldNets, const NetMap& newNets, const std::vector<LayerName>& layers,
                             double minIsolationWidth) {
  const LayerRegions oldPaths = createPaths(oldNets, layers, minIsolationWidth);
  const LayerRegions newPaths = createPaths(newNets, layers, minIsolationWidth);
  PathDiff out;
  for (const LayerName& layer : layers) {
    out.deposit[layer] = booleanSubtract(oldPaths.at(layer), newPaths.at(layer));
    out.engrave[layer] = booleanSubtract(newPaths.at(layer), oldPaths.at(layer));
  }
  return out;
}

/// Offset outlines of each net before union, as closed polylines.
inline LayerLines netMidlines(const NetMap& nets, const std::vector<LayerName>& layers, double minIsolationWidth) {
  LayerLines out;
  for (const LayerName& layer : layers) {
    PolylineSet& lines = out[layer];
    if (auto it = nets.find(layer); it != nets.end())
      for (const Net& n : it->second)
        for (auto& line : boundaryLines(bufferShape(n, minIsolationWidth / 2.0))) lines.push_back(std::move(line));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vias, holes, conflicts

inline ViaPlan diffVias(const Board& oldBoard, const Board& newBoard, const Transform& transform) {
  ViaPlan plan;
  std::vector<Via> fresh;
  for (Via v : newBoard.vias) {
    v.position = transform.apply(v.position);
    fresh.push_back(v);
  }
  std::vector<bool> used(fresh.size(), false);
  for (const Via& v : oldBoard.vias) {
    bool matched = false;
    for (std::size_t k = 0; k < fresh.size(); ++k) {
      if (!used[k] && detail::near(v.position, fresh[k].position, kMatchTolerance) &&
          detail::near(v.drill, fresh[k].drill, kMatchTolerance)) {
        used[k] = matched = true;
        break;
      }
    }
    if (matched)
      plan.keep.push_back(v);
    else
      plan.drillOut.push_back({v.position, v.drill});
  }
  for (std::size_t k = 0; k < fresh.size(); ++k)
    if (!used[k]) plan.addManual.push_back(fresh[k]);
  return plan;
}

/// Old-board holes the new design does not reuse at the same position and drill.
inline std::vector<Hole> unusedHoles(const Board& oldBoard, const Board& alignedNewBoard) {
  std::vector<Hole> out;
  for (const Hole& h : oldBoard.holes) {
    bool reused = false;
    for (const Hole& n : alignedNewBoard.holes)
      reused = reused || (detail::near(h.position, n.position, kMatchTolerance) &&
                          detail::near(h.drill, n.drill, kMatchTolerance));
    if (!reused) out.push_back(h);
  }
  return out;
}

inline std::string formatPoint(Point p) { return "(" + detail::fixed(p.x, 3) + ", " + detail::fixed(p.y, 3) + ")"; }

/// New conductors (unbuffered) overlapping holes that cannot carry copper.
inline ConflictReport detectConflicts(const NetMap& newUnique, const std::vector<Hole>& holes,
                                      const Transform& transform) {
  ConflictReport report;
  if (holes.empty()) return report;
  std::vector<PolygonSet> discs;
  discs.reserve(holes.size());
  for (const Hole& h : holes) discs.push_back(disc(h.position, h.drill / 2.0));

  for (const auto& [layer, nets] : newUnique) {
    std::vector<PolygonSet> hits;
    for (const Net& raw : nets) {
      const PolygonSet copper = conductorRegion(applyTransform(raw, transform));
      const BoundingBox cb = boundingBox(copper);
      std::string where;
      for (std::size_t k = 0; k < holes.size(); ++k) {
        const Hole& h = holes[k];
        const double r = h.drill / 2.0;
        if (h.position.x + r < cb.min.x || h.position.x - r > cb.max.x || h.position.y + r < cb.min.y ||
            h.position.y - r > cb.max.y)
          continue;
        PolygonSet overlap = booleanIntersect(copper, discs[k]);
        if (area(overlap) < kMinRegionArea) continue;
        if (!where.empty()) where += ", ";
        where += formatPoint(h.position) + " drill " + detail::fixed(h.drill, 3);
        hits.push_back(std::move(overlap));
      }
      if (!where.empty())
        report.messages.push_back("net '" + raw.name + "' on " + layer + " overlaps hole at " + where);
    }
    if (!hits.empty()) report.conflictRegions[layer] = booleanUnion(hits);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Outline

/// Region of the old substrate to trim away. Renewal can only shrink a board.
inline PolygonSet compareOutlines(const Board& oldBoard, const Board& newBoard, const Transform& transform) {
  const PolygonSet fresh = applyTransform(newBoard.outline, transform);
  if (area(booleanSubtract(fresh, oldBoard.outline)) >= kMinRegionArea)
    throw Error("new board exceeds old substrate");
  return booleanSubtract(oldBoard.outline, fresh);
}

namespace detail {

/// Parts of segment ab not lying on any edge of `edges` (within tol).
inline void uncoveredParts(Point a, Point b, const std::vector<std::pair<Point, Point>>& edges, double tol,
                           PolylineSet& out) {
  const double len = distance(a, b);
  if (len <= tol) return;
  const double ux = (b.x - a.x) / len;
  const double uy = (b.y - a.y) / len;
  std::vector<std::pair<double, double>> covered;
  for (const auto& [p, q] : edges) {
    // both ends of the edge must sit on the line through ab
    const double dp = (p.x - a.x) * uy - (p.y - a.y) * ux;
    const double dq = (q.x - a.x) * uy - (q.y - a.y) * ux;
    if (std::abs(dp) > tol || std::abs(dq) > tol) continue;
    double t0 = (p.x - a.x) * ux + (p.y - a.y) * uy;
    double t1 = (q.x - a.x) * ux + (q.y - a.y) * uy;
    if (t0 > t1) std::swap(t0, t1);
    t0 = std::max(t0, 0.0);
    t1 = std::min(t1, len);
    if (t1 - t0 > tol) covered.emplace_back(t0, t1);
  }
  std::sort(covered.begin(), covered.end());
  double cursor = 0.0;
  auto emit = [&](double s, double e) {
    if (e - s > tol) out.push_back(Polyline{{a.x + ux * s, a.y + uy * s}, {a.x + ux * e, a.y + uy * e}});
  };
  for (const auto& [s, e] : covered) {
    if (s > cursor) emit(cursor, s);
    cursor = std::max(cursor, e);
  }
  emit(cursor, len);
}

}  // namespace detail

/// New outline edges that do not run along an old outline edge: the path the
/// cutter follows to shrink the old substrate to the new shape.
inline PolylineSet outlineCutPath(const Board& oldBoard, const Board& newBoard, const Transform& transform) {
  std::vector<std::pair<Point, Point>> oldEdges;
  for (const auto& line : boundaryLines(oldBoard.outline))
    for (std::size_t i = 0; i + 1 < line.size(); ++i) oldEdges.emplace_back(line[i], line[i + 1]);
  PolylineSet out;
  for (const auto& line : boundaryLines(applyTransform(newBoard.outline, transform)))
    for (std::size_t i = 0; i + 1 < line.size(); ++i)
      detail::uncoveredParts(line[i], line[i + 1], oldEdges, kMatchTolerance, out);
  return out;
}

// ---------------------------------------------------------------------------
// Orchestration

struct RenewalOptions {
  /// Skip the net-wise prefilter and diff every net geometrically.
  bool prefilter{true};
};

/// Layers present on both boards, in old-board order.
inline std::vector<LayerName> sharedLayers(const Board& oldBoard, const Board& newBoard) {
  std::vector<LayerName> out;
  for (const LayerName& l : oldBoard.layers)
    if (newBoard.hasLayer(l)) out.push_back(l);
  return out;
}

inline RenewalPlan runRenewal(const Board& oldBoard, const Board& newBoard, const AlignmentSpec& spec,
                              const std::vector<LayerName>& layers, const RenewalOptions& options = {}) {
  for (const Board* b : {&oldBoard, &newBoard}) {
    const auto violations = validateBoard(*b);
    if (!violations.empty())
      throw Error("board '" + b->name + "' is invalid: " + violations.front().field + " " + violations.front().rule);
  }

  RenewalPlan plan;
  plan.layers = layers;
  plan.transform = computeAlignment(oldBoard, newBoard, spec);
  plan.isolationWidth = std::max(oldBoard.drcMinIsolationWidth, newBoard.drcMinIsolationWidth);
  const Board aligned = applyTransform(newBoard, plan.transform);

  const NetMap oldNets = buildNetMap(oldBoard, layers);
  const NetMap newNets = buildNetMap(aligned, layers);
  const UniqueNets unique = options.prefilter ? compareNets(oldNets, newNets, layers) : UniqueNets{oldNets, newNets};

  PathDiff paths = comparePaths(unique.oldUnique, unique.newUnique, layers, plan.isolationWidth);
  plan.depositRegions = std::move(paths.deposit);
  plan.engraveRegions = std::move(paths.engrave);
  plan.depositMidlines = netMidlines(unique.oldUnique, layers, plan.isolationWidth);
  plan.engraveMidlines = netMidlines(unique.newUnique, layers, plan.isolationWidth);

  plan.viaPlan = diffVias(oldBoard, newBoard, plan.transform);
  std::vector<Hole> blocked = unusedHoles(oldBoard, aligned);
  blocked.insert(blocked.end(), plan.viaPlan.drillOut.begin(), plan.viaPlan.drillOut.end());
  plan.conflicts = detectConflicts(unique.newUnique, blocked, Transform::identity());

  plan.trimRegion = compareOutlines(oldBoard, newBoard, plan.transform);
  plan.outlineCut = outlineCutPath(oldBoard, newBoard, plan.transform);

  RenewalMetrics& m = plan.metrics;
  for (const LayerName& layer : layers) {
    m.A_g += area(plan.depositRegions.at(layer));
    m.L_s += perimeter(plan.depositRegions.at(layer));
    m.L_d += pathLength(plan.depositMidlines.at(layer));
    m.L_tPrime += pathLength(plan.engraveMidlines.at(layer));
  }
  for (const auto& [layer, lines] : netMidlines(newNets, layers, plan.isolationWidth)) m.L_t += pathLength(lines);
  m.L_o = perimeter(aligned.outline);
  m.L_oPrime = pathLength(plan.outlineCut);
  m.n_p = static_cast<int>(oldBoard.padCount());
  m.n = oldBoard.iterationIndex + 1;
  return plan;
}

}  // namespace renew
