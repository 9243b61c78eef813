#pragma once

// SVG and G-code writers for fabrication profiles. SVG documents use a
// millimetre viewBox with Y negated so board coordinates read Y-up.

#include <string>
#include <vector>

#include "renew/detail/json_writer.hpp"
#include "renew/diff.hpp"
#include "renew/fabplan.hpp"
#include "renew/geometry.hpp"
#include "renew/model.hpp"

namespace renew {

namespace svg {

inline constexpr const char* kConflictColor = "#ffd700";  // yellow
inline constexpr const char* kDepositColor = "#2e9e44";
inline constexpr const char* kEngraveColor = "#d62728";
inline constexpr const char* kOldCopperColor = "#8c8c8c";
inline constexpr const char* kNewCopperColor = "#1f63d6";
inline constexpr double kMargin = 1.0;

inline std::string num(double v) { return detail::fixed(v, 4); }

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Path data for a region: every ring as M..L..Z without the closing vertex.
inline std::string regionPathData(const PolygonSet& s) {
  std::string d;
  for (const auto& ring : openRings(s)) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      d += i == 0 ? (d.empty() ? "M " : " M ") : " L ";
      d += num(ring[i].x) + " " + num(-ring[i].y);
    }
    d += " Z";
  }
  return d;
}

inline std::string polylinePathData(const Polyline& line) {
  std::string d;
  for (std::size_t i = 0; i < line.size(); ++i) {
    d += i == 0 ? "M " : " L ";
    d += num(line[i].x) + " " + num(-line[i].y);
  }
  return d;
}

class Document {
public:
  explicit Document(const BoundingBox& extent) {
    BoundingBox b = extent;
    if (b.empty()) b.extend(Point{0.0, 0.0});
    minX_ = b.min.x - kMargin;
    maxY_ = b.max.y + kMargin;
    width_ = b.width() + 2 * kMargin;
    height_ = b.height() + 2 * kMargin;
  }

  void open(const std::string& id, const std::string& attrs) {
    body_ += "  <g id=\"" + escape(id) + "\" " + attrs + ">\n";
  }
  void close() { body_ += "  </g>\n"; }

  /// Filled region, one path per polygon so holes stay with their outer.
  void region(const PolygonSet& s, const std::string& attrs = {}) {
    for (const Polygon& p : s)
      body_ += "    <path d=\"" + regionPathData(PolygonSet{p}) + "\" fill-rule=\"evenodd\"" +
               (attrs.empty() ? "" : " " + attrs) + "/>\n";
  }
  void lines(const PolylineSet& s) {
    for (const Polyline& l : s)
      if (l.size() >= 2) body_ += "    <path d=\"" + polylinePathData(l) + "\"/>\n";
  }
  /// Board edges as polygon elements, keeping them apart from profile paths.
  void outline(const PolygonSet& s) {
    for (const auto& ring : openRings(s)) {
      std::string pts;
      for (Point p : ring) pts += (pts.empty() ? "" : " ") + num(p.x) + "," + num(-p.y);
      body_ += "    <polygon points=\"" + pts + "\"/>\n";
    }
  }
  void circle(Point c, double r) {
    body_ += "    <circle cx=\"" + num(c.x) + "\" cy=\"" + num(-c.y) + "\" r=\"" + num(r) + "\"/>\n";
  }
  void comment(const std::string& text) { body_ += "  <!-- " + escape(text) + " -->\n"; }

  std::string str(const std::string& title) const {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width_) + "mm\" height=\"" +
           num(height_) + "mm\" viewBox=\"" + num(minX_) + " " + num(-maxY_) + " " + num(width_) + " " +
           num(height_) + "\">\n";
    out += "  <title>" + escape(title) + "</title>\n";
    out += body_;
    out += "</svg>\n";
    return out;
  }

private:
  double minX_{0}, maxY_{0}, width_{0}, height_{0};
  std::string body_;
};

}  // namespace svg

/// Stencil sheet with one filled opening path per deposit polygon.
inline std::string exportSvg(const StencilProfile& profile) {
  BoundingBox box = boundingBox(profile.sheetOutline);
  for (const auto& [layer, s] : profile.openings) box.extend(boundingBox(s));
  svg::Document doc(box);
  doc.open("sheet", "fill=\"none\" stroke=\"#000000\" stroke-width=\"0.1\"");
  doc.outline(profile.sheetOutline);
  doc.close();
  for (const auto& [layer, s] : profile.openings) {
    doc.open("openings-" + layer, "fill=\"#000000\" stroke=\"none\"");
    doc.region(s);
    doc.close();
  }
  return doc.str("stencil profile");
}

/// Engraving midlines as stroked paths, drill-outs as circles, outline cut as
/// stroked paths.
inline std::string exportSvg(const EngravingProfile& profile) {
  BoundingBox box;
  for (const auto& [layer, s] : profile.traceRegions) box.extend(boundingBox(s));
  for (const auto& [layer, lines] : profile.traceMidlines)
    for (const auto& l : lines)
      for (Point p : l) box.extend(p);
  for (const auto& h : profile.drillOuts) {
    box.extend(Point{h.position.x - h.drill / 2, h.position.y - h.drill / 2});
    box.extend(Point{h.position.x + h.drill / 2, h.position.y + h.drill / 2});
  }
  for (const auto& l : profile.outlineCut)
    for (Point p : l) box.extend(p);
  svg::Document doc(box);
  doc.comment("trace depth " + svg::num(profile.traceDepth) + " mm, outline depth " + svg::num(profile.outlineDepth) +
              " mm");
  for (const auto& [layer, lines] : profile.traceMidlines) {
    doc.open("engrave-" + layer, "fill=\"none\" stroke=\"#d62728\" stroke-width=\"0.1\"");
    doc.lines(lines);
    doc.close();
  }
  if (!profile.drillOuts.empty()) {
    doc.open("drill-outs", "fill=\"none\" stroke=\"#000000\" stroke-width=\"0.05\"");
    for (const auto& h : profile.drillOuts) doc.circle(h.position, h.drill / 2.0);
    doc.close();
  }
  if (!profile.outlineCut.empty()) {
    doc.open("outline-cut", "fill=\"none\" stroke=\"#000000\" stroke-width=\"0.2\"");
    doc.lines(profile.outlineCut);
    doc.close();
  }
  return doc.str("engraving profile");
}

/// Color-coded comparison view: old copper gray, new copper blue, deposit
/// green, engrave red, trim hatched, conflicts yellow.
inline std::string exportOverlaySvg(const RenewalPlan& plan, const Board& oldBoard, const Board& newBoard) {
  const Board aligned = applyTransform(newBoard, plan.transform);
  BoundingBox box = boundingBox(oldBoard.outline);
  box.extend(boundingBox(aligned.outline));
  svg::Document doc(box);
  doc.open("outline-old", "fill=\"none\" stroke=\"#000000\" stroke-width=\"0.1\"");
  doc.outline(oldBoard.outline);
  doc.close();
  doc.open("outline-new", "fill=\"none\" stroke=\"#1f63d6\" stroke-width=\"0.1\" stroke-dasharray=\"0.5,0.5\"");
  doc.outline(aligned.outline);
  doc.close();
  auto copper = [&](const Board& b, const char* id, const char* color) {
    doc.open(id, std::string("fill=\"") + color + "\" fill-opacity=\"0.5\" stroke=\"none\"");
    for (const LayerName& layer : plan.layers)
      for (const Net& n : b.nets)
        if (n.layer == layer) doc.region(conductorRegion(n));
    doc.close();
  };
  copper(oldBoard, "copper-old", svg::kOldCopperColor);
  copper(aligned, "copper-new", svg::kNewCopperColor);
  for (const auto& [layer, s] : plan.depositRegions) {
    doc.open("deposit-" + layer, std::string("fill=\"") + svg::kDepositColor + "\" fill-opacity=\"0.6\" stroke=\"none\"");
    doc.region(s);
    doc.close();
  }
  for (const auto& [layer, s] : plan.engraveRegions) {
    doc.open("engrave-" + layer, std::string("fill=\"") + svg::kEngraveColor + "\" fill-opacity=\"0.6\" stroke=\"none\"");
    doc.region(s);
    doc.close();
  }
  doc.open("trim", "fill=\"none\" stroke=\"#000000\" stroke-width=\"0.1\" stroke-dasharray=\"1,1\"");
  doc.region(plan.trimRegion);
  doc.close();
  if (!plan.conflicts.empty()) {
    doc.open("conflicts", std::string("fill=\"") + svg::kConflictColor + "\" stroke=\"" + svg::kConflictColor +
                              "\" stroke-width=\"0.1\"");
    for (const auto& [layer, s] : plan.conflicts.conflictRegions) doc.region(s);
    for (const auto& h : plan.viaPlan.drillOut) doc.comment("drill-out " + formatPoint(h.position));
    for (const auto& m : plan.conflicts.messages) doc.comment(m);
    doc.close();
  }
  return doc.str("renewal overlay");
}

struct MachineParams {
  double feedXY{300.0};  // mm/min
  double stepdown{0.15};  // mm
  double safeZ{2.0};      // mm
  double outlineFeedXY{180.0};   // mm/min
  double outlineStepdown{0.4};  // mm
};

/// Linear-move G-code: every trace midline cut in ceil(depth/stepdown)
/// passes, drill-outs as plunges, then the outline modification cut at its
/// own feed and step-down.
inline std::string exportGcode(const EngravingProfile& profile, const MachineParams& machine) {
  if (!(machine.feedXY > 0.0) || !(machine.stepdown > 0.0) || !(machine.safeZ > 0.0) ||
      !(machine.outlineFeedXY > 0.0) || !(machine.outlineStepdown > 0.0))
    throw Error("machine feed, step-down and safe height must be > 0");
  auto n = [](double v) { return detail::fixed(v, 4); };
  const std::string plunge = n(machine.feedXY / 4.0);
  std::string g;
  g += "(renewal engraving program)\n";
  g += "(trace depth " + n(profile.traceDepth) + " mm, " +
       std::to_string(passCount(profile.traceDepth, machine.stepdown)) + " passes of " + n(machine.stepdown) +
       " mm)\n";
  g += "G21\nG90\n";
  g += "G0 Z" + n(machine.safeZ) + "\n";

  auto cut = [&](const Polyline& line, double depth, double stepdown, double feed) {
    const int passes = passCount(depth, stepdown);
    for (int k = 1; k <= passes; ++k) {
      const double z = -std::min(k * stepdown, depth);
      g += "G0 X" + n(line.front().x) + " Y" + n(line.front().y) + "\n";
      g += "G1 Z" + n(z) + " F" + plunge + "\n";
      for (std::size_t i = 1; i < line.size(); ++i)
        g += "G1 X" + n(line[i].x) + " Y" + n(line[i].y) + " F" + n(feed) + "\n";
      g += "G0 Z" + n(machine.safeZ) + "\n";
    }
  };

  for (const auto& [layer, lines] : profile.traceMidlines) {
    if (lines.empty()) continue;
    g += "(layer " + layer + ")\n";
    for (const auto& line : lines)
      if (line.size() >= 2) cut(line, profile.traceDepth, machine.stepdown, machine.feedXY);
  }
  if (!profile.drillOuts.empty()) {
    g += "(drill-outs)\n";
    for (const auto& h : profile.drillOuts) {
      g += "(drill " + n(h.drill) + " mm)\n";
      g += "G0 X" + n(h.position.x) + " Y" + n(h.position.y) + "\n";
      g += "G1 Z" + n(-profile.outlineDepth) + " F" + plunge + "\n";
      g += "G0 Z" + n(machine.safeZ) + "\n";
    }
  }
  if (!profile.outlineCut.empty()) {
    g += "(outline cut)\n";
    for (const auto& line : profile.outlineCut)
      if (line.size() >= 2) cut(line, profile.outlineDepth, machine.outlineStepdown, machine.outlineFeedXY);
  }
  g += "G0 Z" + n(machine.safeZ) + "\n";
  g += "M2\n";
  return g;
}

}  // namespace renew
