#pragma once

// HTTP+JSON API over the library with an in-memory session store. Routing is
// done by Service::handle so it can be exercised without a socket; serve()
// only adapts it to cpp-httplib.

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "renew/artifacts.hpp"
#include "renew/diff.hpp"
#include "renew/ingest_sexpr.hpp"
#include "renew/params.hpp"
#include "renew/sustain.hpp"

namespace renew::service {

struct Request {
  std::string method;
  std::string path;
  std::string body;
};

struct Response {
  int status{200};
  std::string contentType{"application/json"};
  std::string body;
};

struct Session {
  std::optional<Board> oldBoard;
  std::optional<Board> newBoard;
  AlignmentSpec alignment;
  std::optional<Transform> transform;
  std::optional<RenewalPlan> plan;
  SustainParams params;
  std::shared_mutex mutex;  // writers exclusive, readers shared
};

inline constexpr double kPayloadResolution = 1e-4;

namespace detail {

inline Response json(int status, const nlohmann::ordered_json& body) {
  return {status, "application/json", body.dump(2) + "\n"};
}

inline Response error(int status, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = message;
  return json(status, j);
}

inline std::vector<std::string> splitPath(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path.substr(0, path.find('?'))) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

/// Rounds every floating-point value in place to the transport resolution.
inline void roundPayload(nlohmann::ordered_json& j) {
  if (j.is_number_float()) {
    double v = std::round(j.get<double>() / kPayloadResolution) * kPayloadResolution;
    if (v == 0.0) v = 0.0;  // drop negative zero
    j = v;
  } else if (j.is_structured()) {
    for (auto& e : j) roundPayload(e);
  }
}

inline nlohmann::json parseBody(const std::string& body) {
  if (body.find_first_not_of(" \t\r\n") == std::string::npos) return nlohmann::json::object();
  nlohmann::json j = nlohmann::json::parse(body);
  if (!j.is_object()) throw Error("request body must be a JSON object");
  return j;
}

inline Corner cornerFromString(const std::string& s) {
  if (s == "BL" || s == "bl") return Corner::BL;
  if (s == "BR" || s == "br") return Corner::BR;
  if (s == "TL" || s == "tl") return Corner::TL;
  if (s == "TR" || s == "tr") return Corner::TR;
  throw Error("unknown corner '" + s + "'");
}

inline std::string contentTypeFor(const std::string& name) {
  const auto ext = std::filesystem::path(name).extension().string();
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".json") return "application/json";
  if (ext == ".html") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".png") return "image/png";
  return "text/plain";
}

}  // namespace detail

/// Summary returned after a board upload, enough to populate pickers.
inline nlohmann::ordered_json boardSummary(const Board& b, const std::vector<ParseDiagnostic>& diags) {
  nlohmann::ordered_json j;
  j["name"] = b.name;
  j["layers"] = b.layers;
  const BoundingBox box = boundingBox(b.outline);
  j["bbox"] = nlohmann::ordered_json::array({box.min.x, box.min.y, box.max.x, box.max.y});
  j["netCount"] = b.nets.size();
  std::vector<std::string> refs;
  for (const auto& f : b.footprints) refs.push_back(f.reference);
  j["footprintRefs"] = refs;
  nlohmann::ordered_json d = nlohmann::ordered_json::array();
  for (const auto& diag : diags) {
    nlohmann::ordered_json e;
    e["severity"] = to_string(diag.severity);
    e["line"] = diag.line;
    e["message"] = diag.message;
    d.push_back(std::move(e));
  }
  j["diagnostics"] = std::move(d);
  return j;
}

/// Geometry payload for rendering a comparison.
inline nlohmann::ordered_json comparePayload(const RenewalPlan& plan) {
  nlohmann::ordered_json j;
  j["layers"] = plan.layers;
  j["transform"] = transformJson(plan.transform);
  j["isolationWidth"] = plan.isolationWidth;
  nlohmann::ordered_json geometry = nlohmann::ordered_json::object();
  for (const LayerName& layer : plan.layers) {
    auto region = [&](const LayerRegions& m) {
      auto it = m.find(layer);
      return it == m.end() ? nlohmann::ordered_json::array() : regionJson(it->second);
    };
    nlohmann::ordered_json l;
    l["deposit"] = region(plan.depositRegions);
    l["engrave"] = region(plan.engraveRegions);
    l["conflicts"] = region(plan.conflicts.conflictRegions);
    geometry[layer] = std::move(l);
  }
  j["geometry"] = std::move(geometry);
  j["trim"] = regionJson(plan.trimRegion);
  j["outlineCut"] = linesJson(plan.outlineCut);
  nlohmann::ordered_json drill = nlohmann::ordered_json::array();
  for (const auto& h : plan.viaPlan.drillOut) drill.push_back(holeJson(h));
  j["drillOut"] = std::move(drill);
  j["conflicts"] = plan.conflicts.messages;
  detail::roundPayload(j);
  j["metrics"] = metricsJson(plan.metrics);
  return j;
}

class Service {
public:
  explicit Service(SustainParams defaults = {}, std::filesystem::path uiDir = {})
      : defaults_(defaults), uiDir_(std::move(uiDir)), rng_(std::random_device{}()) {
    validateParams(defaults_);
  }

  Response handle(const Request& req) {
    try {
      return route(req);
    } catch (const nlohmann::json::exception& e) {
      return detail::error(400, std::string("malformed JSON: ") + e.what());
    } catch (const Error& e) {
      return detail::error(400, e.what());
    } catch (const std::exception& e) {
      return detail::error(500, e.what());
    }
  }

  std::size_t sessionCount() const {
    std::shared_lock lock(storeMutex_);
    return sessions_.size();
  }

private:
  Response route(const Request& req) {
    const auto parts = detail::splitPath(req.path);
    if (parts.empty() || parts[0] != "session") return staticFile(req);
    if (parts.size() == 1) {
      if (req.method != "POST") return detail::error(405, "method not allowed");
      return createSession();
    }
    std::shared_ptr<Session> s = find(parts[1]);
    if (!s) return detail::error(404, "unknown session '" + parts[1] + "'");
    const std::string op = parts.size() > 2 ? parts[2] : "";
    if (op == "board" && parts.size() == 4 && req.method == "POST") return postBoard(*s, parts[3], req.body);
    if (op == "align" && parts.size() == 3 && req.method == "POST") return postAlign(*s, req.body);
    if (op == "compare" && parts.size() == 3 && req.method == "POST") return postCompare(*s, req.body);
    if (op == "analyze" && parts.size() == 3 && req.method == "POST") return postAnalyze(*s, req.body);
    if (op == "export" && parts.size() == 4 && req.method == "GET") return getExport(*s, parts[3]);
    return detail::error(404, "no route for " + req.method + " " + req.path);
  }

  Response createSession() {
    std::unique_lock lock(storeMutex_);
    std::string id;
    do {
      std::ostringstream os;
      os << std::hex << rng_() << rng_();
      id = os.str();
    } while (sessions_.contains(id));
    auto s = std::make_shared<Session>();
    s->params = defaults_;
    sessions_.emplace(id, std::move(s));
    nlohmann::ordered_json j;
    j["id"] = id;
    return detail::json(201, j);
  }

  std::shared_ptr<Session> find(const std::string& id) const {
    std::shared_lock lock(storeMutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  Response postBoard(Session& s, const std::string& role, const std::string& body) {
    if (role != "old" && role != "new") return detail::error(404, "board role must be 'old' or 'new'");
    ParseResult parsed;
    try {
      parsed = parseBoard(body);
    } catch (const ParseError& e) {
      nlohmann::ordered_json j;
      j["error"] = e.what();
      j["line"] = e.line();
      nlohmann::ordered_json d = nlohmann::ordered_json::array();
      for (const auto& diag : e.diagnostics()) {
        nlohmann::ordered_json x;
        x["severity"] = to_string(diag.severity);
        x["line"] = diag.line;
        x["message"] = diag.message;
        d.push_back(std::move(x));
      }
      j["diagnostics"] = std::move(d);
      return detail::json(422, j);
    } catch (const Error& e) {
      return detail::error(422, e.what());
    }
    std::unique_lock lock(s.mutex);
    (role == "old" ? s.oldBoard : s.newBoard) = parsed.board;
    s.plan.reset();
    s.transform.reset();
    return detail::json(200, boardSummary(parsed.board, parsed.diagnostics));
  }

  Response postAlign(Session& s, const std::string& body) {
    const nlohmann::json j = detail::parseBody(body);
    const std::string mode = j.value("mode", "none");
    AlignmentSpec spec;
    if (mode == "none") {
      spec = AlignmentSpec::none();
    } else if (mode == "bbox") {
      spec = AlignmentSpec::bboxCorner(detail::cornerFromString(j.value("corner", "BL")));
    } else if (mode == "footprint") {
      const std::string refOld = j.value("refOld", j.value("ref", ""));
      const std::string refNew = j.value("refNew", refOld);
      spec = AlignmentSpec::footprintCenter(refOld, refNew);
    } else if (mode == "explicit") {
      spec = AlignmentSpec::explicitTransform({j.value("dx", 0.0), j.value("dy", 0.0), j.value("rotation", 0)});
    } else {
      return detail::error(400, "unknown alignment mode '" + mode + "'");
    }
    std::unique_lock lock(s.mutex);
    if (!s.oldBoard || !s.newBoard) return detail::error(409, "both boards must be uploaded before aligning");
    const Transform t = computeAlignment(*s.oldBoard, *s.newBoard, spec);  // Error -> 400
    s.alignment = spec;
    s.transform = t;
    s.plan.reset();
    return detail::json(200, transformJson(t));
  }

  Response postCompare(Session& s, const std::string& body) {
    const nlohmann::json j = detail::parseBody(body);
    std::unique_lock lock(s.mutex);
    if (!s.oldBoard || !s.newBoard) return detail::error(409, "both boards must be uploaded before comparing");
    std::vector<LayerName> layers;
    if (j.contains("layers") && !j["layers"].empty())
      layers = j["layers"].get<std::vector<LayerName>>();
    else
      layers = sharedLayers(*s.oldBoard, *s.newBoard);
    s.plan = runRenewal(*s.oldBoard, *s.newBoard, s.alignment, layers);
    s.transform = s.plan->transform;
    return detail::json(200, comparePayload(*s.plan));
  }

  Response postAnalyze(Session& s, const std::string& body) {
    const nlohmann::json j = detail::parseBody(body);
    const bool persist = j.value("persist", false);
    auto compute = [&](const SustainParams& base) {
      const SustainParams p = j.contains("overrides") ? paramsFromJson(j["overrides"], base) : base;
      return std::pair{p, analyze(*s.plan, *s.oldBoard, *s.newBoard, p)};
    };
    if (persist) {
      std::unique_lock lock(s.mutex);
      if (!s.plan) return detail::error(409, "no comparison has been run");
      auto [p, report] = compute(s.params);
      s.params = p;
      return {200, "application/json", renderReportJson(report)};
    }
    std::shared_lock lock(s.mutex);
    if (!s.plan) return detail::error(409, "no comparison has been run");
    return {200, "application/json", renderReportJson(compute(s.params).second)};
  }

  Response getExport(Session& s, const std::string& kind) {
    const auto& kinds = artifactKinds();
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
      return detail::error(404, "unknown export '" + kind + "'");
    std::shared_lock lock(s.mutex);
    if (!s.plan) return detail::error(409, "no comparison has been run");
    return {200, detail::contentTypeFor(kind), renderArtifact(kind, *s.plan, *s.oldBoard, *s.newBoard, s.params)};
  }

  Response staticFile(const Request& req) {
    if (req.method != "GET") return detail::error(404, "not found");
    if (uiDir_.empty() || !std::filesystem::is_directory(uiDir_)) return detail::error(404, "no UI build present");
    std::string rel = req.path.substr(0, req.path.find('?'));
    if (rel.empty() || rel == "/") rel = "/index.html";
    if (rel.find("..") != std::string::npos) return detail::error(404, "not found");
    const std::filesystem::path file = uiDir_ / rel.substr(1);
    if (!std::filesystem::is_regular_file(file)) return detail::error(404, "not found");
    std::ifstream in(file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return {200, detail::contentTypeFor(file.string()), ss.str()};
  }

  SustainParams defaults_;
  std::filesystem::path uiDir_;
  mutable std::shared_mutex storeMutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mt19937_64 rng_;
};

}  // namespace renew::service
