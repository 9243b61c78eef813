#pragma once

// Import of the s-expression PCB subset used by common EDA board files
// (kicad_pcb style). Recognized: layer table, net declarations, track
// segments, vias, footprints with pads and reference designator, Edge.Cuts
// outline graphics (line, rect, circle, poly) and a clearance value from the
// setup block or the default net class. Board files use a Y-down frame; the
// importer flips Y so the model is Y-up.

#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "renew/conductors.hpp"
#include "renew/error.hpp"
#include "renew/ingest_json.hpp"
#include "renew/model.hpp"

namespace renew {

/// Isolation width assumed when a board file carries no clearance rule (15 mil).
inline constexpr double kDefaultIsolationWidth = 0.381;

namespace sexpr {

struct Node {
  std::string atom;  // empty for lists
  bool list{false};
  bool quoted{false};
  int line{1};
  std::vector<Node> items;

  const std::string& head() const {
    static const std::string none;
    return list && !items.empty() && !items.front().list ? items.front().atom : none;
  }
  const Node* child(std::string_view name) const {
    for (const Node& n : items)
      if (n.head() == name) return &n;
    return nullptr;
  }
  std::vector<const Node*> children(std::string_view name) const {
    std::vector<const Node*> out;
    for (const Node& n : items)
      if (n.head() == name) out.push_back(&n);
    return out;
  }
};

/// Tokenizes and builds the expression tree; throws ParseError on unbalanced
/// parentheses or unterminated strings.
inline Node parse(std::string_view text) {
  std::vector<Node> stack;
  std::vector<std::pair<int, int>> open;  // line, column of each open paren
  std::optional<Node> root;
  int line = 1;
  int col = 0;
  std::size_t i = 0;
  auto push = [&](Node n) {
    if (stack.empty()) {
      if (root || n.list == false) throw ParseError(n.line, "unexpected content outside the top-level form");
      root = std::move(n);
    } else {
      stack.back().items.push_back(std::move(n));
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      col = 0;
      ++i;
      continue;
    }
    ++col;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      Node n;
      n.list = true;
      n.line = line;
      stack.push_back(std::move(n));
      open.emplace_back(line, col);
      ++i;
    } else if (c == ')') {
      if (stack.empty())
        throw ParseError(line, "unbalanced parentheses: unexpected ')' at line " + std::to_string(line) + " column " +
                                   std::to_string(col));
      Node n = std::move(stack.back());
      stack.pop_back();
      open.pop_back();
      push(std::move(n));
      ++i;
    } else if (c == '"') {
      Node n;
      n.quoted = true;
      n.line = line;
      ++i;
      bool closed = false;
      while (i < text.size()) {
        const char d = text[i++];
        if (d == '\\' && i < text.size()) {
          n.atom += text[i++];
        } else if (d == '"') {
          closed = true;
          break;
        } else {
          if (d == '\n') ++line;
          n.atom += d;
        }
      }
      if (!closed) throw ParseError(n.line, "unterminated string");
      if (stack.empty()) throw ParseError(n.line, "unexpected content outside the top-level form");
      stack.back().items.push_back(std::move(n));
    } else {
      Node n;
      n.line = line;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '(' &&
             text[i] != ')' && text[i] != '"') {
        n.atom += text[i++];
        ++col;
      }
      --col;
      if (stack.empty()) throw ParseError(n.line, "unexpected content outside the top-level form");
      stack.back().items.push_back(std::move(n));
    }
  }
  if (!stack.empty())
    throw ParseError(open.back().first, "unbalanced parentheses: '(' at line " + std::to_string(open.back().first) +
                                            " column " + std::to_string(open.back().second) + " is never closed");
  if (!root) throw ParseError(1, "empty document");
  return std::move(*root);
}

}  // namespace sexpr

namespace detail {

class SExprBoardReader {
public:
  ParseResult read(std::string_view text) {
    const sexpr::Node root = sexpr::parse(text);
    if (root.head() != "kicad_pcb") throw ParseError(root.line, "top-level form must be (kicad_pcb ...)");

    // Layer table and nets first so later forms can be resolved in one pass.
    if (const auto* layers = root.child("layers")) {
      for (std::size_t i = 1; i < layers->items.size(); ++i) {
        const auto& entry = layers->items[i];
        if (entry.list && entry.items.size() >= 2) {
          const std::string& name = entry.items[1].atom;
          if (name.size() > 3 && name.ends_with(".Cu")) board_.layers.push_back(name);
        }
      }
    }
    if (board_.layers.empty()) throw ParseError(root.line, "no copper layers declared");
    for (const auto* n : root.children("net"))
      if (n->items.size() >= 3) netNames_[toInt(n->items[1])] = n->items[2].atom;

    std::optional<double> clearance;
    std::optional<double> defaultClassClearance;

    for (std::size_t i = 1; i < root.items.size(); ++i) {
      const sexpr::Node& form = root.items[i];
      if (!form.list) continue;
      const std::string& h = form.head();
      if (h == "segment") {
        readSegment(form);
      } else if (h == "arc") {
        throw ParseError(form.line, "arcs unsupported", diags_);
      } else if (h == "via") {
        readVia(form);
      } else if (h == "footprint" || h == "module") {
        readFootprint(form);
      } else if (h == "gr_line" || h == "gr_rect" || h == "gr_circle" || h == "gr_poly" || h == "gr_arc" ||
                 h == "gr_curve") {
        readGraphic(form);
      } else if (h == "setup") {
        if (const auto* c = findDeep(form, "clearance")) clearance = number(*c, 1);
      } else if (h == "net_class") {
        const auto* c = form.child("clearance");
        if (c && (!defaultClassClearance || (form.items.size() > 1 && form.items[1].atom == "Default")))
          defaultClassClearance = number(*c, 1);
      } else if (h == "title_block") {
        if (const auto* t = form.child("title"); t && t->items.size() > 1) board_.name = t->items[1].atom;
      } else if (h == "zone") {
        warnOnce("zone", form.line, "zones and copper pours are not imported");
      } else if (silentTopLevel(h)) {
        continue;
      } else {
        warnOnce(h, form.line, "unrecognized form '(" + h + "' ignored");
      }
    }

    if (clearance && *clearance > 0.0) {
      board_.drcMinIsolationWidth = *clearance;
    } else if (defaultClassClearance && *defaultClassClearance > 0.0) {
      board_.drcMinIsolationWidth = *defaultClassClearance;
    } else {
      board_.drcMinIsolationWidth = kDefaultIsolationWidth;
      diags_.push_back({Severity::Warning, root.line,
                        "no clearance rule found; minimum isolation width defaults to 0.381 mm (15 mil)"});
    }

    buildOutline(root.line);

    const auto violations = validateBoard(board_);
    if (!violations.empty()) {
      std::string msg = "invalid board:";
      for (const auto& v : violations) msg += " " + v.field + " " + v.rule + ";";
      throw ParseError(root.line, msg, diags_);
    }
    return {std::move(board_), std::move(diags_)};
  }

private:
  static bool silentTopLevel(const std::string& h) {
    static const std::set<std::string> known{"version", "generator", "generator_version", "host", "general",
                                             "paper", "page", "layers", "net", "gr_text", "gr_text_box",
                                             "dimension", "target", "group", "image", "embedded_fonts",
                                             "property", "tstamp", "uuid"};
    return known.contains(h);
  }
  static bool silentFootprintChild(const std::string& h) {
    static const std::set<std::string> known{
        "layer", "at", "descr", "tags", "attr", "path", "tstamp", "uuid", "property", "fp_text", "fp_text_box",
        "model", "fp_line", "fp_rect", "fp_circle", "fp_arc", "fp_poly", "fp_curve", "locked", "placed",
        "sheetname", "sheetfile", "zone_connect", "solder_mask_margin", "solder_paste_margin",
        "solder_paste_ratio", "clearance", "thermal_width", "thermal_gap", "autoplace_cost90",
        "autoplace_cost180", "embedded_fonts", "version", "generator", "generator_version", "pad", "net_tie_pad_groups",
        "private_layers", "dimension", "group", "zone"};
    return known.contains(h);
  }

  void warnOnce(const std::string& key, int line, const std::string& msg) {
    if (warned_.insert(key).second) diags_.push_back({Severity::Warning, line, msg});
  }

  static const sexpr::Node* findDeep(const sexpr::Node& n, std::string_view name) {
    for (const auto& c : n.items) {
      if (c.head() == name) return &c;
      if (c.list)
        if (const auto* d = findDeep(c, name)) return d;
    }
    return nullptr;
  }

  double number(const sexpr::Node& form, std::size_t index) const {
    if (index >= form.items.size() || form.items[index].list)
      throw ParseError(form.line, "(" + form.head() + " ...) is missing a numeric value", diags_);
    const std::string& s = form.items[index].atom;
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ParseError(form.line, "expected a number in (" + form.head() + " ...), got '" + s + "'", diags_);
    }
  }

  int toInt(const sexpr::Node& n) const {
    try {
      return std::stoi(n.atom);
    } catch (const std::exception&) {
      throw ParseError(n.line, "expected an integer, got '" + n.atom + "'", diags_);
    }
  }

  const sexpr::Node& need(const sexpr::Node& form, std::string_view name) const {
    const auto* c = form.child(name);
    if (!c) throw ParseError(form.line, "(" + form.head() + " ...) is missing (" + std::string(name) + " ...)", diags_);
    return *c;
  }

  // Board files are Y-down.
  Point xy(const sexpr::Node& form, std::size_t first = 1) const { return {number(form, first), -number(form, first + 1)}; }

  std::vector<LayerName> copperLayers(const sexpr::Node& layersForm) const {
    std::vector<LayerName> out;
    for (std::size_t i = 1; i < layersForm.items.size(); ++i) {
      const std::string& l = layersForm.items[i].atom;
      if (l == "*.Cu" || l == "F&B.Cu") {
        for (const auto& b : board_.layers)
          if (l == "*.Cu" || b == "F.Cu" || b == "B.Cu") out.push_back(b);
      } else if (board_.hasLayer(l)) {
        out.push_back(l);
      }
    }
    return out;
  }

  std::string netName(int kicadNet) const {
    auto it = netNames_.find(kicadNet);
    return it == netNames_.end() ? "net-" + std::to_string(kicadNet) : it->second;
  }

  Net& netFor(int kicadNet, const LayerName& layer) {
    const auto key = std::make_pair(kicadNet, layer);
    auto it = netIndex_.find(key);
    if (it != netIndex_.end()) return board_.nets[it->second];
    Net n;
    n.id = static_cast<int>(board_.nets.size()) + 1;
    n.name = netName(kicadNet);
    n.layer = layer;
    board_.nets.push_back(std::move(n));
    netIndex_[key] = board_.nets.size() - 1;
    return board_.nets.back();
  }

  Net& isolatedNet(const std::string& name, const LayerName& layer) {
    Net n;
    n.id = static_cast<int>(board_.nets.size()) + 1;
    n.name = name;
    n.layer = layer;
    board_.nets.push_back(std::move(n));
    return board_.nets.back();
  }

  void readSegment(const sexpr::Node& form) {
    Track t{xy(need(form, "start")), xy(need(form, "end")), number(need(form, "width"), 1)};
    const auto& layerForm = need(form, "layer");
    if (layerForm.items.size() < 2) throw ParseError(form.line, "(segment ...) has an empty layer", diags_);
    const LayerName layer = layerForm.items[1].atom;
    if (!board_.hasLayer(layer)) {
      warnOnce("segment-layer:" + layer, form.line, "segment on non-copper layer '" + layer + "' ignored");
      return;
    }
    const int net = form.child("net") ? toInt(form.child("net")->items.at(1)) : 0;
    if (t.start == t.end) {
      diags_.push_back({Severity::Warning, form.line, "zero-length segment ignored"});
      return;
    }
    if (net == 0)
      isolatedNet("unconnected-track-" + std::to_string(form.line), layer).tracks.push_back(t);
    else
      netFor(net, layer).tracks.push_back(t);
  }

  void readVia(const sexpr::Node& form) {
    Via v;
    v.position = xy(need(form, "at"));
    v.diameter = number(need(form, "size"), 1);
    v.drill = number(need(form, "drill"), 1);
    std::vector<LayerName> span;
    if (const auto* l = form.child("layers"))
      for (std::size_t i = 1; i < l->items.size(); ++i) span.push_back(l->items[i].atom);
    v.fromLayer = span.empty() ? board_.layers.front() : span.front();
    v.toLayer = span.empty() ? board_.layers.back() : span.back();
    board_.vias.push_back(std::move(v));
  }

  void readFootprint(const sexpr::Node& form) {
    const auto& at = need(form, "at");
    const Point origin = xy(at);
    const double fpRot = at.items.size() > 3 ? number(at, 3) : 0.0;

    Footprint fp;
    fp.center = origin;
    for (const auto* prop : form.children("property"))
      if (prop->items.size() > 2 && prop->items[1].atom == "Reference") fp.reference = prop->items[2].atom;
    for (const auto* text : form.children("fp_text"))
      if (fp.reference.empty() && text->items.size() > 2 && text->items[1].atom == "reference")
        fp.reference = text->items[2].atom;
    if (fp.reference.empty()) fp.reference = "FP" + std::to_string(form.line);

    for (const auto& child : form.items) {
      if (!child.list) continue;
      const std::string& h = child.head();
      if ((h == "fp_arc" || h == "arc") && layerOf(child).ends_with(".Cu"))
        throw ParseError(child.line, "arcs unsupported", diags_);
      if ((h == "fp_line" || h == "fp_rect" || h == "fp_circle" || h == "fp_poly" || h == "fp_arc") &&
          layerOf(child) == "Edge.Cuts")
        warnOnce("fp-edge", child.line, "footprint graphics on Edge.Cuts are not part of the imported outline");
      if (!silentFootprintChild(h)) warnOnce("fp:" + h, child.line, "unrecognized footprint form '(" + h + "' ignored");
    }

    for (const auto* pad : form.children("pad")) {
      if (pad->items.size() < 4) throw ParseError(pad->line, "(pad ...) is incomplete", diags_);
      const std::string number_ = pad->items[1].atom;
      const std::string kind = pad->items[2].atom;
      const std::string shapeName = pad->items[3].atom;
      const auto& pat = need(*pad, "at");
      const Point rel = xy(pat);
      const double padRot = pat.items.size() > 3 ? number(pat, 3) : fpRot;
      const Point center = detail::rotateAbout({origin.x + rel.x, origin.y + rel.y}, origin, fpRot);
      fp.padRefs.push_back(number_);

      if (const auto* drill = pad->child("drill"); drill && (kind == "thru_hole" || kind == "np_thru_hole")) {
        double d = 0.0;
        for (std::size_t i = 1; i < drill->items.size() && d == 0.0; ++i)
          if (!drill->items[i].list && drill->items[i].atom != "oval") d = number(*drill, i);
        if (d > 0.0) board_.holes.push_back({center, d});
      }
      if (kind == "np_thru_hole") continue;

      const auto shape = padShapeFromString(shapeName);
      if (!shape) throw ParseError(pad->line, "unsupported pad shape '" + shapeName + "'", diags_);
      const auto& size = need(*pad, "size");
      Pad p;
      p.center = center;
      p.shape = *shape;
      p.width = number(size, 1);
      p.height = size.items.size() > 2 ? number(size, 2) : p.width;
      p.rotation = normalizeDegrees(padRot);
      p.footprint = fp.reference;

      const auto* layersForm = pad->child("layers");
      const auto layers = layersForm ? copperLayers(*layersForm) : std::vector<LayerName>{};
      int net = 0;
      if (const auto* n = pad->child("net"); n && n->items.size() > 1) net = toInt(n->items[1]);
      for (const auto& layer : layers) {
        if (net == 0)
          isolatedNet("unconnected-(" + fp.reference + "-" + number_ + ")", layer).pads.push_back(p);
        else
          netFor(net, layer).pads.push_back(p);
      }
    }
    board_.footprints.push_back(std::move(fp));
  }

  static std::string layerOf(const sexpr::Node& form) {
    const auto* l = form.child("layer");
    return l && l->items.size() > 1 ? l->items[1].atom : std::string{};
  }

  void readGraphic(const sexpr::Node& form) {
    if (layerOf(form) != "Edge.Cuts") return;
    const std::string& h = form.head();
    if (h == "gr_arc" || h == "gr_curve") throw ParseError(form.line, "arcs unsupported", diags_);
    if (h == "gr_line") {
      edges_.emplace_back(xy(need(form, "start")), xy(need(form, "end")));
      edgeLines_.push_back(form.line);
    } else if (h == "gr_rect") {
      const Point a = xy(need(form, "start"));
      const Point b = xy(need(form, "end"));
      rings_.push_back({{a.x, a.y}, {b.x, a.y}, {b.x, b.y}, {a.x, b.y}});
    } else if (h == "gr_circle") {
      const Point c = xy(need(form, "center"));
      const Point e = xy(need(form, "end"));
      const auto d = openRings(disc(c, distance(c, e)));
      if (!d.empty()) rings_.push_back(d.front());
    } else if (h == "gr_poly") {
      std::vector<Point> ring;
      for (const auto* xyForm : need(form, "pts").children("xy")) ring.push_back(xy(*xyForm));
      rings_.push_back(std::move(ring));
    }
  }

  void buildOutline(int rootLine) {
    // Chain loose Edge.Cuts line segments into closed rings.
    constexpr double tol = 1e-6;
    std::vector<bool> used(edges_.size(), false);
    for (std::size_t s = 0; s < edges_.size(); ++s) {
      if (used[s]) continue;
      used[s] = true;
      std::vector<Point> ring{edges_[s].first, edges_[s].second};
      bool extended = true;
      while (extended && distance(ring.front(), ring.back()) > tol) {
        extended = false;
        for (std::size_t k = 0; k < edges_.size(); ++k) {
          if (used[k]) continue;
          if (distance(edges_[k].first, ring.back()) <= tol) {
            ring.push_back(edges_[k].second);
          } else if (distance(edges_[k].second, ring.back()) <= tol) {
            ring.push_back(edges_[k].first);
          } else {
            continue;
          }
          used[k] = true;
          extended = true;
          break;
        }
      }
      if (distance(ring.front(), ring.back()) > tol)
        throw ParseError(edgeLines_[s], "board outline is not closed", diags_);
      ring.pop_back();
      rings_.push_back(std::move(ring));
    }
    if (rings_.empty()) throw ParseError(rootLine, "missing outline: no Edge.Cuts graphics found", diags_);
    // Largest rings first so cut-outs land inside their outer boundary.
    auto shoelace = [](const std::vector<Point>& r) {
      double a = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        const Point& p = r[i];
        const Point& q = r[(i + 1) % r.size()];
        a += p.x * q.y - q.x * p.y;
      }
      return std::abs(a) / 2.0;
    };
    std::stable_sort(rings_.begin(), rings_.end(),
                     [&](const auto& a, const auto& b) { return shoelace(a) > shoelace(b); });
    board_.outline = assembleRings(rings_);
  }

  Board board_;
  std::vector<ParseDiagnostic> diags_;
  std::set<std::string> warned_;
  std::map<int, std::string> netNames_;
  std::map<std::pair<int, LayerName>, std::size_t> netIndex_;
  std::vector<std::pair<Point, Point>> edges_;
  std::vector<int> edgeLines_;
  std::vector<std::vector<Point>> rings_;
};

}  // namespace detail

/// Imports an s-expression board file. Forms outside the supported subset
/// produce warnings; arcs and unsupported pad shapes are errors.
inline ParseResult parseSExprBoard(std::string_view text) { return detail::SExprBoardReader{}.read(text); }

/// Dispatches on the first significant character: '{' canonical JSON, '(' s-expression.
inline ParseResult parseBoard(std::string_view text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '(') return parseSExprBoard(text);
    break;
  }
  return parseCanonicalJson(text);
}

}  // namespace renew
