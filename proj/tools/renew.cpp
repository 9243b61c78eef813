// renew: compare two board revisions and plan a substrate renewal.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "renew/cli.hpp"
#include "renew/service_http.hpp"

namespace {

void addPairOptions(CLI::App* cmd, renew::cli::CliConfig& cfg) {
  cmd->add_option("--old", cfg.oldPath, "board currently on the substrate")->required()->check(CLI::ExistingFile);
  cmd->add_option("--new", cfg.newPath, "revised design")->required()->check(CLI::ExistingFile);
  cmd->add_option("--layers", cfg.layers, "copper layers to compare (default: shared layers)")->delimiter(',');
  cmd->add_option("--align", cfg.align, "bbox-bl|bbox-br|bbox-tl|bbox-tr|footprint:REF[:REF]|none");
  cmd->add_option("--params", cfg.paramsPath, "JSON parameter file")->check(CLI::ExistingFile);
  cmd->add_option("--set", cfg.assignments, "parameter override key=value (repeatable)");
  cmd->add_option("--out", cfg.outDir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plan the renewal of an engraved PCB substrate for a revised design"};
  app.require_subcommand(1);
  renew::cli::CliConfig cfg;

  auto* diff = app.add_subcommand("diff", "write plan, stencil, engraving and overlay files");
  addPairOptions(diff, cfg);
  diff->add_option("--high-current", cfg.highCurrentNets, "net ids carrying high current")->delimiter(',');

  auto* analyze = app.add_subcommand("analyze", "write report.json and print the renew-vs-new comparison");
  addPairOptions(analyze, cfg);

  std::string validatePath;
  auto* validate = app.add_subcommand("validate", "parse a board file and report problems");
  validate->add_option("path", validatePath, "board file")->required();

  int port = 8080;
  std::string uiDir = "ui/dist";
  auto* serve = app.add_subcommand("serve", "start the HTTP service");
  serve->add_option("--port", port, "listen port")->check(CLI::Range(1, 65535));
  serve->add_option("--ui", uiDir, "directory with the built UI");
  serve->add_option("--params", cfg.paramsPath, "JSON parameter file")->check(CLI::ExistingFile);
  serve->add_option("--set", cfg.assignments, "parameter override key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : renew::cli::kExitError;
  }

  if (*diff) return renew::cli::cmdDiff(cfg, std::cout, std::cerr);
  if (*analyze) return renew::cli::cmdAnalyze(cfg, std::cout, std::cerr);
  if (*validate) return renew::cli::cmdValidate(validatePath, std::cout, std::cerr);
  try {
    renew::service::Service svc(renew::cli::resolveParams(cfg), uiDir);
    return renew::service::serve(svc, port) ? 0 : renew::cli::kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return renew::cli::kExitError;
  }
}
