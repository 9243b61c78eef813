#pragma once

// Fabrication artifacts derived from a renewal plan: stencil, engraving
// profile with its depth schedule, deposition estimate, solder-mask removal
// regions and design lint for renewed boards.

#include <set>
#include <string>
#include <vector>

#include "renew/conductors.hpp"
#include "renew/diff.hpp"
#include "renew/error.hpp"
#include "renew/params.hpp"

namespace renew {

/// Each renewal engraves this much deeper than the previous iteration (mm).
inline constexpr double kDepthIncrementPerIteration = 0.05;
/// Iteration from which renewed substrates have been observed to fail.
inline constexpr int kFailureIteration = 7;
/// Epoxy traces narrower than 6 mil do not conduct reliably.
inline constexpr double kMinEpoxyTraceWidth = milsToMm(6.0);
/// Recommended minimum epoxy trace width for high-current nets (20 mil).
inline constexpr double kHighCurrentTraceWidth = milsToMm(20.0);

struct DepthSchedule {
  double depth{0.0};
  std::vector<std::string> warnings;
};

inline std::string iterationWarning(int iteration) {
  return "iteration " + std::to_string(iteration) + " reaches the renewal count (" +
         std::to_string(kFailureIteration) + ") at which renewed substrates have failed in testing";
}

/// Engraving depth for the given iteration: base + 0.05 (iteration - 1).
inline DepthSchedule depthSchedule(double baseDepth, int iteration) {
  if (iteration < 1) throw Error("iteration must be >= 1, got " + std::to_string(iteration));
  if (!(baseDepth > 0.0)) throw Error("base engraving depth must be > 0");
  DepthSchedule s;
  s.depth = baseDepth + kDepthIncrementPerIteration * (iteration - 1);
  if (iteration >= kFailureIteration) s.warnings.push_back(iterationWarning(iteration));
  return s;
}

struct StencilProfile {
  PolygonSet sheetOutline;
  LayerRegions openings;

  double sheetArea() const { return area(sheetOutline); }
};

inline StencilProfile stencilProfile(const RenewalPlan& plan, const Board& oldBoard) {
  StencilProfile s;
  s.sheetOutline = oldBoard.outline;
  for (const LayerName& layer : plan.layers) {
    auto it = plan.depositRegions.find(layer);
    s.openings[layer] = it == plan.depositRegions.end() ? PolygonSet{} : booleanIntersect(it->second, s.sheetOutline);
  }
  return s;
}

struct EngravingProfile {
  LayerRegions traceRegions;
  LayerLines traceMidlines;
  double traceDepth{0.0};
  std::vector<Hole> drillOuts;
  PolylineSet outlineCut;
  double outlineDepth{0.0};
  std::vector<std::string> warnings;
};

inline EngravingProfile engravingProfile(const RenewalPlan& plan, const Board& oldBoard, const Board& newBoard,
                                         double boardThickness = SustainParams{}.d_o) {
  (void)oldBoard;
  if (!(boardThickness > 0.0)) throw Error("board thickness must be > 0");
  EngravingProfile e;
  e.traceRegions = plan.engraveRegions;
  e.traceMidlines = plan.engraveMidlines;
  DepthSchedule depth = depthSchedule(newBoard.baseEngraveDepth, plan.metrics.n);
  e.traceDepth = depth.depth;
  e.warnings = std::move(depth.warnings);
  e.drillOuts = plan.viaPlan.drillOut;
  e.outlineCut = plan.outlineCut;
  e.outlineDepth = boardThickness;
  return e;
}

struct DepositionPlan {
  PolylineSet midlines;
  double L_d{0.0};
  double estTime{0.0};  // s
};

inline DepositionPlan depositionPlan(const RenewalPlan& plan, const SustainParams& params) {
  if (!(params.F_d > 0.0)) throw Error("deposition feed F_d must be > 0");
  DepositionPlan d;
  for (const auto& [layer, lines] : plan.depositMidlines)
    for (const auto& line : lines) d.midlines.push_back(line);
  d.L_d = plan.metrics.L_d;
  d.estTime = d.L_d / params.F_d;
  return d;
}

/// Copper to expose by removing solder mask before renewal (factory boards).
inline LayerRegions maskRemovalRegions(const RenewalPlan& plan, bool boardHasMask) {
  LayerRegions out;
  if (!boardHasMask) return out;
  for (const LayerName& layer : plan.layers) {
    const auto d = plan.depositRegions.find(layer);
    const auto e = plan.engraveRegions.find(layer);
    const PolygonSet dep = d == plan.depositRegions.end() ? PolygonSet{} : d->second;
    const PolygonSet eng = e == plan.engraveRegions.end() ? PolygonSet{} : e->second;
    PolygonSet u = booleanUnion(dep, eng);
    if (!u.empty()) out[layer] = std::move(u);
  }
  return out;
}

struct LintFinding {
  Severity severity{Severity::Warning};
  std::string rule;
  std::string location;
  std::string message;
};

struct LintReport {
  std::vector<LintFinding> findings;

  bool hasErrors() const {
    for (const auto& f : findings)
      if (f.severity == Severity::Error) return true;
    return false;
  }
};

/// Grooves of the removed nets once filled: deposition midlines widened to the
/// isolation width.
inline PolygonSet epoxyRegion(const RenewalPlan& plan, const LayerName& layer) {
  auto it = plan.depositMidlines.find(layer);
  if (it == plan.depositMidlines.end()) return {};
  return bufferLines(it->second, plan.isolationWidth / 2.0);
}

/// Checks the new design against limits of epoxy-renewed traces. `newBoard`
/// is in its own frame; the plan's transform maps it onto the old substrate.
inline LintReport lintRenewal(const RenewalPlan& plan, const Board& newBoard, const std::vector<int>& highCurrentNets) {
  LintReport report;
  const std::set<int> highCurrent(highCurrentNets.begin(), highCurrentNets.end());
  const Board aligned = applyTransform(newBoard, plan.transform);
  for (const Net& net : aligned.nets) {
    const PolygonSet epoxy = epoxyRegion(plan, net.layer);
    for (const Track& t : net.tracks) {
      const std::string where =
          net.layer + " net '" + net.name + "' " + formatPoint(t.start) + "-" + formatPoint(t.end);
      if (t.width < kMinEpoxyTraceWidth - 1e-9 && area(booleanIntersect(bufferShape(t, 0.0), epoxy)) >= kMinRegionArea) {
        report.findings.push_back({Severity::Error, "min-epoxy-trace-width", where,
                                   "track width " + detail::fixed(t.width, 4) +
                                       " mm crosses an epoxy region; traces narrower than 6 mil (0.1524 mm) fail"});
      }
      if (highCurrent.contains(net.id) && t.width < kHighCurrentTraceWidth - 1e-9) {
        report.findings.push_back({Severity::Warning, "high-current-trace-width", where,
                                   "high-current track width " + detail::fixed(t.width, 4) +
                                       " mm is below the recommended 20 mil (0.508 mm)"});
      }
    }
  }
  if (plan.metrics.n >= kFailureIteration)
    report.findings.push_back({Severity::Warning, "iteration-limit", "board", iterationWarning(plan.metrics.n)});
  return report;
}

}  // namespace renew
