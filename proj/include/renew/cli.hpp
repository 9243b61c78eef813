#pragma once

// Command implementations behind the `renew` tool. Each returns the process
// exit code: 0 success, 2 completed with conflicts, 1 error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "renew/artifacts.hpp"
#include "renew/diff.hpp"
#include "renew/fabplan.hpp"
#include "renew/ingest_sexpr.hpp"
#include "renew/params.hpp"
#include "renew/sustain.hpp"

namespace renew::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConflicts = 2;

inline constexpr const char* kParamsEnv = "RENEW_PARAMS";

struct CliConfig {
  std::string subcommand;
  std::string oldPath;
  std::string newPath;
  std::vector<LayerName> layers;  // empty: layers shared by both boards
  std::string align{"none"};
  std::string paramsPath;
  std::vector<std::string> assignments;  // key=value overrides
  std::vector<int> highCurrentNets;
  std::string outDir{"."};
};

inline std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a temporary sibling and renames it into place so a partial
/// file never appears under the final name.
inline void writeFileAtomic(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

inline ParseResult loadBoard(const std::string& path) { return parseBoard(readFile(path)); }

/// bbox-bl|bbox-br|bbox-tl|bbox-tr, footprint:REF or footprint:OLD:NEW, none.
inline AlignmentSpec parseAlignment(const std::string& text) {
  if (text.empty() || text == "none") return AlignmentSpec::none();
  if (text == "bbox-bl") return AlignmentSpec::bboxCorner(Corner::BL);
  if (text == "bbox-br") return AlignmentSpec::bboxCorner(Corner::BR);
  if (text == "bbox-tl") return AlignmentSpec::bboxCorner(Corner::TL);
  if (text == "bbox-tr") return AlignmentSpec::bboxCorner(Corner::TR);
  const std::string prefix = "footprint:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string refs = text.substr(prefix.size());
    const auto colon = refs.find(':');
    const std::string a = refs.substr(0, colon);
    const std::string b = colon == std::string::npos ? a : refs.substr(colon + 1);
    if (a.empty() || b.empty()) throw Error("footprint alignment needs a reference, e.g. footprint:U1");
    return AlignmentSpec::footprintCenter(a, b);
  }
  throw Error("unknown alignment '" + text + "'");
}

/// Parameters from RENEW_PARAMS, then the --params file, then --set flags.
inline SustainParams resolveParams(const CliConfig& cfg) {
  SustainParams p;
  auto overlay = [&p](const std::string& path) {
    try {
      p = paramsFromJson(nlohmann::json::parse(readFile(path)), p);
    } catch (const nlohmann::json::exception& e) {
      throw Error("parameters file '" + path + "': " + e.what());
    }
  };
  if (const char* env = std::getenv(kParamsEnv); env && *env) overlay(env);
  if (!cfg.paramsPath.empty()) overlay(cfg.paramsPath);
  for (const auto& a : cfg.assignments) applyAssignment(p, a);
  validateParams(p);
  return p;
}

inline void printDiagnostics(const std::vector<ParseDiagnostic>& diags, const std::string& path, std::ostream& err) {
  for (const auto& d : diags) err << path << ":" << d.line << ": " << to_string(d.severity) << ": " << d.message << "\n";
}

struct Loaded {
  Board oldBoard;
  Board newBoard;
  RenewalPlan plan;
  SustainParams params;
};

inline Loaded loadAndPlan(const CliConfig& cfg, std::ostream& err) {
  Loaded l;
  l.params = resolveParams(cfg);
  ParseResult o = loadBoard(cfg.oldPath);
  printDiagnostics(o.diagnostics, cfg.oldPath, err);
  ParseResult n = loadBoard(cfg.newPath);
  printDiagnostics(n.diagnostics, cfg.newPath, err);
  l.oldBoard = std::move(o.board);
  l.newBoard = std::move(n.board);
  const auto layers = cfg.layers.empty() ? sharedLayers(l.oldBoard, l.newBoard) : cfg.layers;
  l.plan = runRenewal(l.oldBoard, l.newBoard, parseAlignment(cfg.align), layers);
  return l;
}

inline void printConflicts(const RenewalPlan& plan, std::ostream& err) {
  for (const auto& m : plan.conflicts.messages) err << "conflict: " << m << "\n";
}

inline int cmdDiff(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Loaded l = loadAndPlan(cfg, err);
    const auto files = renderDiffArtifacts(l.plan, l.oldBoard, l.newBoard, l.params);
    for (const auto& [name, bytes] : files) writeFileAtomic(std::filesystem::path(cfg.outDir) / name, bytes);

    const LintReport lint = lintRenewal(l.plan, l.newBoard, cfg.highCurrentNets);
    for (const auto& f : lint.findings)
      err << to_string(f.severity) << " [" << f.rule << "] " << f.location << ": " << f.message << "\n";
    printConflicts(l.plan, err);

    const RenewalMetrics& m = l.plan.metrics;
    out << "renewal iteration " << m.n << ", layers:";
    for (const auto& layer : l.plan.layers) out << " " << layer;
    out << "\n";
    out << "groove area to fill  " << detail::fixed(m.A_g, 3) << " mm^2\n";
    out << "deposition path      " << detail::fixed(m.L_d, 3) << " mm\n";
    out << "engraving path       " << detail::fixed(m.L_tPrime, 3) << " mm\n";
    out << "outline cut          " << detail::fixed(m.L_oPrime, 3) << " mm\n";
    out << "vias kept/drill/add  " << l.plan.viaPlan.keep.size() << "/" << l.plan.viaPlan.drillOut.size() << "/"
        << l.plan.viaPlan.addManual.size() << "\n";
    out << "wrote " << files.size() << " files to " << cfg.outDir << "\n";
    return l.plan.conflicts.empty() ? kExitOk : kExitConflicts;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

/// Human-readable report table. Display rounding only; report.json keeps the
/// exact values.
inline void printReport(const SustainabilityReport& r, std::ostream& out) {
  auto row = [&out](const std::string& label, double v, const std::string& unit) {
    out << std::left << std::setw(24) << label << std::right << std::setw(14) << detail::fixed(v, 3) << " " << unit
        << "\n";
  };
  row("epoxy mass", r.epoxyMass, "mg");
  row("stencil area", r.stencilArea, "mm^2");
  row("FR-4 area saved", r.fr4AreaSaved, "mm^2");
  row("cost delta", r.costDelta, "");
  row("new board time", r.timeNew, "s");
  row("time delta", r.timeDelta, "s");
  row("energy delta", r.energyDelta, "J");
  out << "\n" << std::left << std::setw(16) << "stage" << std::right << std::setw(14) << "time [s]" << std::setw(16)
      << "energy [J]" << "\n";
  auto stage = [&out](const std::string& name, double t, double e) {
    out << std::left << std::setw(16) << name << std::right << std::setw(14) << detail::fixed(t, 3) << std::setw(16)
        << detail::fixed(e, 3) << "\n";
  };
  stage("desolder", r.time.desolder, r.energy.desolder);
  stage("clean pads", r.time.clean, r.energy.clean);
  stage("deposit", r.time.deposit, r.energy.deposit);
  stage("cure", r.time.cure, r.energy.cure);
  stage("stencil cut", r.time.stencilCut, r.energy.stencilCut);
  stage("engrave delta", r.time.engraveDelta, r.energy.engraveDelta);
  stage("total", r.time.total(), r.energy.total());
  if (!r.estimatedDefaults.empty()) {
    out << "\nunconfirmed defaults:";
    for (const auto& n : r.estimatedDefaults) out << " " << n;
    out << "\n";
  }
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
}

inline int cmdAnalyze(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Loaded l = loadAndPlan(cfg, err);
    const SustainabilityReport report = analyze(l.plan, l.oldBoard, l.newBoard, l.params);
    writeFileAtomic(std::filesystem::path(cfg.outDir) / "report.json", renderReportJson(report));
    printConflicts(l.plan, err);
    printReport(report, out);
    return l.plan.conflicts.empty() ? kExitOk : kExitConflicts;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

inline int cmdValidate(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    const ParseResult r = loadBoard(path);
    printDiagnostics(r.diagnostics, path, err);
    out << path << ": valid board '" << r.board.name << "' (" << r.board.layers.size() << " layers, "
        << r.board.nets.size() << " nets, " << r.board.footprints.size() << " footprints)\n";
    return kExitOk;
  } catch (const ParseError& e) {
    printDiagnostics(e.diagnostics(), path, err);
    err << path << ":" << e.line() << ": error: " << e.detail() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << path << ": error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace renew::cli
