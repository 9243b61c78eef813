#pragma once

// Canonical board JSON: the stable on-disk form of a Board.
//
//   {name, units, layers[], drcMinIsolationWidth, iterationIndex,
//    baseEngraveDepth, outline: [[[x,y],...], ...],
//    nets: [{id, name, layer, tracks: [{x1,y1,x2,y2,w}],
//            pads: [{x,y,shape,w,h,rot,footprint}]}],
//    vias: [{x,y,drill,dia,from,to}], holes: [{x,y,drill}],
//    footprints: [{ref,x,y,pads}]}
//
// Writers always emit "units": "mm"; readers also accept "mil".

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "renew/conductors.hpp"
#include "renew/detail/json_writer.hpp"
#include "renew/error.hpp"
#include "renew/model.hpp"

namespace renew {

struct ParseResult {
  Board board;
  std::vector<ParseDiagnostic> diagnostics;
};

namespace detail {

inline int lineAtOffset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  int line = 1;
  for (std::size_t i = 0; i < offset; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

inline int lineOfKey(std::string_view text, const std::string& key) {
  const std::size_t pos = text.find("\"" + key + "\"");
  return pos == std::string_view::npos ? 1 : lineAtOffset(text, pos);
}

class JsonBoardReader {
public:
  explicit JsonBoardReader(std::string_view text) : text_(text) {}

  ParseResult read() {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text_);
    } catch (const nlohmann::json::parse_error& e) {
      const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
      throw ParseError(lineAtOffset(text_, at), "syntax error: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw ParseError(1, "top-level value must be an object");

    ParseResult r;
    Board& b = r.board;
    checkKeys(doc, {"name", "units", "layers", "drcMinIsolationWidth", "iterationIndex", "baseEngraveDepth",
                    "outline", "nets", "vias", "holes", "footprints"},
              "board");

    const std::string units = get<std::string>(doc, "units");
    if (units == "mm")
      scale_ = 1.0;
    else if (units == "mil")
      scale_ = kMmPerMil;
    else
      throw ParseError(lineOfKey(text_, "units"), "unsupported units '" + units + "' (expected mm or mil)");

    b.name = get<std::string>(doc, "name");
    b.layers = get<std::vector<std::string>>(doc, "layers");
    b.drcMinIsolationWidth = length(doc, "drcMinIsolationWidth");
    b.iterationIndex = doc.contains("iterationIndex") ? get<int>(doc, "iterationIndex") : 1;
    b.baseEngraveDepth = doc.contains("baseEngraveDepth") ? length(doc, "baseEngraveDepth") : 0.15;

    std::vector<std::vector<Point>> rings;
    const nlohmann::json& outline = array(doc, "outline");
    // A bare ring [[x, y], ...] is accepted as shorthand for [[[x, y], ...]].
    const bool bare = !outline.empty() && outline[0].is_array() && !outline[0].empty() && outline[0][0].is_number();
    for (const auto& ring : bare ? nlohmann::json::array({outline}) : outline) {
      std::vector<Point> pts;
      for (const auto& xy : ring) {
        if (!xy.is_array() || xy.size() != 2 || !xy[0].is_number() || !xy[1].is_number())
          throw ParseError(lineOfKey(text_, "outline"), "outline points must be [x, y] pairs");
        pts.push_back({xy[0].get<double>() * scale_, xy[1].get<double>() * scale_});
      }
      rings.push_back(std::move(pts));
    }
    b.outline = assembleRings(rings);

    if (doc.contains("nets")) {
      for (const auto& jn : array(doc, "nets")) {
        checkKeys(jn, {"id", "name", "layer", "tracks", "pads"}, "net");
        Net n;
        n.id = get<int>(jn, "id");
        n.name = get<std::string>(jn, "name");
        n.layer = get<std::string>(jn, "layer");
        if (jn.contains("tracks")) {
          for (const auto& jt : array(jn, "tracks")) {
            checkKeys(jt, {"x1", "y1", "x2", "y2", "w"}, "track");
            n.tracks.push_back({{length(jt, "x1"), length(jt, "y1")}, {length(jt, "x2"), length(jt, "y2")},
                                length(jt, "w")});
          }
        }
        if (jn.contains("pads")) {
          for (const auto& jp : array(jn, "pads")) {
            checkKeys(jp, {"x", "y", "shape", "w", "h", "rot", "footprint"}, "pad");
            Pad p;
            p.center = {length(jp, "x"), length(jp, "y")};
            const std::string shape = get<std::string>(jp, "shape");
            const auto parsed = padShapeFromString(shape);
            if (!parsed)
              throw ParseError(lineOfKey(text_, "shape"),
                               "unsupported pad shape '" + shape + "' (expected circle, rect or oval)");
            p.shape = *parsed;
            p.width = length(jp, "w");
            p.height = length(jp, "h");
            p.rotation = jp.contains("rot") ? normalizeDegrees(get<double>(jp, "rot")) : 0.0;
            if (jp.contains("footprint") && !jp.at("footprint").is_null())
              p.footprint = get<std::string>(jp, "footprint");
            n.pads.push_back(std::move(p));
          }
        }
        b.nets.push_back(std::move(n));
      }
    }
    if (doc.contains("vias")) {
      for (const auto& jv : array(doc, "vias")) {
        checkKeys(jv, {"x", "y", "drill", "dia", "from", "to"}, "via");
        b.vias.push_back({{length(jv, "x"), length(jv, "y")}, length(jv, "drill"), length(jv, "dia"),
                          get<std::string>(jv, "from"), get<std::string>(jv, "to")});
      }
    }
    if (doc.contains("holes")) {
      for (const auto& jh : array(doc, "holes")) {
        checkKeys(jh, {"x", "y", "drill"}, "hole");
        b.holes.push_back({{length(jh, "x"), length(jh, "y")}, length(jh, "drill")});
      }
    }
    if (doc.contains("footprints")) {
      for (const auto& jf : array(doc, "footprints")) {
        checkKeys(jf, {"ref", "x", "y", "pads"}, "footprint");
        Footprint f;
        f.reference = get<std::string>(jf, "ref");
        f.center = {length(jf, "x"), length(jf, "y")};
        if (jf.contains("pads")) f.padRefs = get<std::vector<std::string>>(jf, "pads");
        b.footprints.push_back(std::move(f));
      }
    }

    const auto violations = validateBoard(b);
    if (!violations.empty()) {
      std::string msg = "invalid board:";
      for (const auto& v : violations) msg += " " + v.field + " " + v.rule + ";";
      throw ParseError(1, msg, diagnostics_);
    }
    r.diagnostics = std::move(diagnostics_);
    return r;
  }

private:
  void checkKeys(const nlohmann::json& j, std::initializer_list<const char*> known, const char* what) {
    if (!j.is_object()) throw ParseError(1, std::string(what) + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool ok = false;
      for (const char* k : known) ok = ok || it.key() == k;
      if (!ok && warned_.insert(std::string(what) + "." + it.key()).second)
        diagnostics_.push_back(
            {Severity::Warning, lineOfKey(text_, it.key()), "unknown key '" + it.key() + "' in " + what + " ignored"});
    }
  }

  const nlohmann::json& require(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key)) throw ParseError(1, "missing required key '" + key + "'", diagnostics_);
    return j.at(key);
  }

  template <typename T>
  T get(const nlohmann::json& j, const std::string& key) {
    const auto& v = require(j, key);
    try {
      return v.get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ParseError(lineOfKey(text_, key), "key '" + key + "' has the wrong type", diagnostics_);
    }
  }

  double length(const nlohmann::json& j, const std::string& key) {
    const auto& v = require(j, key);
    if (!v.is_number()) throw ParseError(lineOfKey(text_, key), "key '" + key + "' must be a number", diagnostics_);
    return v.get<double>() * scale_;
  }

  const nlohmann::json& array(const nlohmann::json& j, const std::string& key) {
    const auto& v = require(j, key);
    if (!v.is_array()) throw ParseError(lineOfKey(text_, key), "key '" + key + "' must be an array", diagnostics_);
    return v;
  }

  std::string_view text_;
  double scale_{1.0};
  std::vector<ParseDiagnostic> diagnostics_;
  std::set<std::string> warned_;
};

inline nlohmann::ordered_json pointJson(Point p) { return nlohmann::ordered_json::array({p.x, p.y}); }

inline nlohmann::ordered_json ringsJson(const PolygonSet& s) {
  nlohmann::ordered_json rings = nlohmann::ordered_json::array();
  for (const auto& ring : openRings(s)) {
    nlohmann::ordered_json jr = nlohmann::ordered_json::array();
    for (Point p : ring) jr.push_back(pointJson(p));
    rings.push_back(std::move(jr));
  }
  return rings;
}

}  // namespace detail

/// Parses canonical board JSON. Unknown keys are reported as warnings.
inline ParseResult parseCanonicalJson(std::string_view text) { return detail::JsonBoardReader(text).read(); }

/// Deterministic canonical JSON: schema key order, every length at 6 decimals.
inline std::string serializeCanonicalJson(const Board& b) {
  const auto violations = validateBoard(b);
  if (!violations.empty())
    throw Error("cannot serialize invalid board: " + violations.front().field + " " + violations.front().rule);

  using J = nlohmann::ordered_json;
  J doc;
  doc["name"] = b.name;
  doc["units"] = "mm";
  doc["layers"] = b.layers;
  doc["drcMinIsolationWidth"] = b.drcMinIsolationWidth;
  doc["iterationIndex"] = b.iterationIndex;
  doc["baseEngraveDepth"] = b.baseEngraveDepth;
  doc["outline"] = detail::ringsJson(b.outline);
  J nets = J::array();
  for (const Net& n : b.nets) {
    J jn;
    jn["id"] = n.id;
    jn["name"] = n.name;
    jn["layer"] = n.layer;
    J tracks = J::array();
    for (const Track& t : n.tracks)
      tracks.push_back({{"x1", t.start.x}, {"y1", t.start.y}, {"x2", t.end.x}, {"y2", t.end.y}, {"w", t.width}});
    jn["tracks"] = std::move(tracks);
    J pads = J::array();
    for (const Pad& p : n.pads) {
      J jp;
      jp["x"] = p.center.x;
      jp["y"] = p.center.y;
      jp["shape"] = to_string(p.shape);
      jp["w"] = p.width;
      jp["h"] = p.height;
      jp["rot"] = p.rotation;
      jp["footprint"] = p.footprint ? J(*p.footprint) : J(nullptr);
      pads.push_back(std::move(jp));
    }
    jn["pads"] = std::move(pads);
    nets.push_back(std::move(jn));
  }
  doc["nets"] = std::move(nets);
  J vias = J::array();
  for (const Via& v : b.vias)
    vias.push_back({{"x", v.position.x}, {"y", v.position.y}, {"drill", v.drill}, {"dia", v.diameter},
                    {"from", v.fromLayer}, {"to", v.toLayer}});
  doc["vias"] = std::move(vias);
  J holes = J::array();
  for (const Hole& h : b.holes) holes.push_back({{"x", h.position.x}, {"y", h.position.y}, {"drill", h.drill}});
  doc["holes"] = std::move(holes);
  J fps = J::array();
  for (const Footprint& f : b.footprints)
    fps.push_back({{"ref", f.reference}, {"x", f.center.x}, {"y", f.center.y}, {"pads", f.padRefs}});
  doc["footprints"] = std::move(fps);
  return detail::FixedJsonWriter(6).write(doc);
}

}  // namespace renew
