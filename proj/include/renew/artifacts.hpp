#pragma once

// Byte-level rendering of every file the pipeline emits. The CLI and the HTTP
// service both go through these functions so their outputs stay identical.

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "renew/detail/json_writer.hpp"
#include "renew/diff.hpp"
#include "renew/export.hpp"
#include "renew/fabplan.hpp"
#include "renew/params.hpp"
#include "renew/sustain.hpp"

namespace renew {

using OrderedJson = nlohmann::ordered_json;

namespace detail {

inline OrderedJson pointsJson(const std::vector<Point>& pts) {
  OrderedJson a = OrderedJson::array();
  for (Point p : pts) a.push_back(OrderedJson::array({p.x, p.y}));
  return a;
}

}  // namespace detail

/// Polygons as arrays of rings (outer first), rings as open point lists.
inline OrderedJson regionJson(const PolygonSet& s) {
  OrderedJson polys = OrderedJson::array();
  for (const Polygon& p : s) {
    OrderedJson rings = OrderedJson::array();
    for (const auto& ring : openRings(PolygonSet{p})) rings.push_back(detail::pointsJson(ring));
    polys.push_back(std::move(rings));
  }
  return polys;
}

inline OrderedJson linesJson(const PolylineSet& s) {
  OrderedJson a = OrderedJson::array();
  for (const Polyline& l : s) a.push_back(detail::pointsJson(std::vector<Point>(l.begin(), l.end())));
  return a;
}

inline OrderedJson transformJson(const Transform& t) {
  OrderedJson j;
  j["dx"] = t.dx;
  j["dy"] = t.dy;
  j["rotation"] = t.rotation;
  return j;
}

inline OrderedJson metricsJson(const RenewalMetrics& m) {
  OrderedJson j;
  j["A_g"] = m.A_g;
  j["L_d"] = m.L_d;
  j["L_t"] = m.L_t;
  j["L_tPrime"] = m.L_tPrime;
  j["L_o"] = m.L_o;
  j["L_oPrime"] = m.L_oPrime;
  j["L_s"] = m.L_s;
  j["n_p"] = m.n_p;
  j["n"] = m.n;
  return j;
}

inline OrderedJson viaJson(const Via& v) {
  OrderedJson j;
  j["position"] = OrderedJson::array({v.position.x, v.position.y});
  j["drill"] = v.drill;
  j["diameter"] = v.diameter;
  j["fromLayer"] = v.fromLayer;
  j["toLayer"] = v.toLayer;
  return j;
}

inline OrderedJson holeJson(const Hole& h) {
  OrderedJson j;
  j["position"] = OrderedJson::array({h.position.x, h.position.y});
  j["drill"] = h.drill;
  return j;
}

inline OrderedJson planToJson(const RenewalPlan& plan) {
  OrderedJson j;
  j["layers"] = plan.layers;
  j["transform"] = transformJson(plan.transform);
  j["isolationWidth"] = plan.isolationWidth;
  OrderedJson layers = OrderedJson::object();
  for (const LayerName& layer : plan.layers) {
    OrderedJson l;
    auto region = [&](const LayerRegions& m) {
      auto it = m.find(layer);
      return it == m.end() ? OrderedJson::array() : regionJson(it->second);
    };
    auto lines = [&](const LayerLines& m) {
      auto it = m.find(layer);
      return it == m.end() ? OrderedJson::array() : linesJson(it->second);
    };
    l["deposit"] = region(plan.depositRegions);
    l["engrave"] = region(plan.engraveRegions);
    l["depositMidlines"] = lines(plan.depositMidlines);
    l["engraveMidlines"] = lines(plan.engraveMidlines);
    l["conflicts"] = region(plan.conflicts.conflictRegions);
    layers[layer] = std::move(l);
  }
  j["perLayer"] = std::move(layers);
  OrderedJson vias;
  vias["keep"] = OrderedJson::array();
  for (const auto& v : plan.viaPlan.keep) vias["keep"].push_back(viaJson(v));
  vias["drillOut"] = OrderedJson::array();
  for (const auto& h : plan.viaPlan.drillOut) vias["drillOut"].push_back(holeJson(h));
  vias["addManual"] = OrderedJson::array();
  for (const auto& v : plan.viaPlan.addManual) vias["addManual"].push_back(viaJson(v));
  j["viaPlan"] = std::move(vias);
  j["trimRegion"] = regionJson(plan.trimRegion);
  j["outlineCut"] = linesJson(plan.outlineCut);
  j["conflictMessages"] = plan.conflicts.messages;
  j["metrics"] = metricsJson(plan.metrics);
  return j;
}

/// plan.json: every length at 6 decimals so repeated runs match byte for byte.
inline std::string renderPlanJson(const RenewalPlan& plan) { return detail::FixedJsonWriter(6).write(planToJson(plan)); }

inline OrderedJson stagesJson(const StageBreakdown& s) {
  OrderedJson j;
  j["desolder"] = s.desolder;
  j["clean"] = s.clean;
  j["deposit"] = s.deposit;
  j["cure"] = s.cure;
  j["stencilCut"] = s.stencilCut;
  j["engraveDelta"] = s.engraveDelta;
  j["total"] = s.total();
  return j;
}

inline OrderedJson reportToJson(const SustainabilityReport& r) {
  OrderedJson j;
  j["epoxyMass"] = r.epoxyMass;
  j["stencilArea"] = r.stencilArea;
  j["fr4AreaSaved"] = r.fr4AreaSaved;
  j["costDelta"] = r.costDelta;
  j["timeNew"] = r.timeNew;
  j["timeDelta"] = r.timeDelta;
  j["energyDelta"] = r.energyDelta;
  OrderedJson cost;
  cost["epoxy"] = r.cost.epoxyCost;
  cost["stencil"] = r.cost.stencilCost;
  cost["fr4"] = r.cost.fr4Cost;
  cost["total"] = r.cost.P_delta;
  j["cost"] = std::move(cost);
  j["time"] = stagesJson(r.time);
  j["energy"] = stagesJson(r.energy);
  j["estimatedDefaults"] = r.estimatedDefaults;
  j["warnings"] = r.warnings;
  return j;
}

/// report.json keeps full double precision (shortest round-trip form) so the
/// file reads back to exactly the library values.
inline std::string renderReportJson(const SustainabilityReport& r) { return reportToJson(r).dump(2) + "\n"; }

inline MachineParams machineFor(const SustainParams& params) { return {params.F_t, params.dz_t, 2.0, params.F_o, params.dz_o}; }

/// The diff artifacts keyed by file name.
inline std::map<std::string, std::string> renderDiffArtifacts(const RenewalPlan& plan, const Board& oldBoard,
                                                              const Board& newBoard, const SustainParams& params) {
  std::map<std::string, std::string> files;
  const EngravingProfile engraving = engravingProfile(plan, oldBoard, newBoard, params.d_o);
  files["plan.json"] = renderPlanJson(plan);
  files["stencil.svg"] = exportSvg(stencilProfile(plan, oldBoard));
  files["engrave.svg"] = exportSvg(engraving);
  files["engrave.gcode"] = exportGcode(engraving, machineFor(params));
  files["overlay.svg"] = exportOverlaySvg(plan, oldBoard, newBoard);
  return files;
}

/// Names accepted by renderArtifact.
inline const std::vector<std::string>& artifactKinds() {
  static const std::vector<std::string> kinds{"plan.json",     "stencil.svg", "engrave.svg",
                                              "engrave.gcode", "overlay.svg", "report.json"};
  return kinds;
}

/// One artifact by name; throws for an unknown kind.
inline std::string renderArtifact(const std::string& kind, const RenewalPlan& plan, const Board& oldBoard,
                                  const Board& newBoard, const SustainParams& params) {
  if (kind == "report.json") return renderReportJson(analyze(plan, oldBoard, newBoard, params));
  if (kind == "plan.json") return renderPlanJson(plan);
  if (kind == "stencil.svg") return exportSvg(stencilProfile(plan, oldBoard));
  if (kind == "overlay.svg") return exportOverlaySvg(plan, oldBoard, newBoard);
  if (kind == "engrave.svg" || kind == "engrave.gcode") {
    const EngravingProfile e = engravingProfile(plan, oldBoard, newBoard, params.d_o);
    return kind == "engrave.svg" ? exportSvg(e) : exportGcode(e, machineFor(params));
  }
  throw Error("unknown artifact '" + kind + "'");
}

}  // namespace renew
