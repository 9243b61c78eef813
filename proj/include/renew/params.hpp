#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "renew/error.hpp"

namespace renew {

/// Inputs of the renew-vs-new sustainability model. Feeds F_t and F_o are
/// mm/min, F_d and F_l mm/s, powers W, times s, lengths mm.
struct SustainParams {
  double rho_e{4.0};                  // epoxy density, mg/mm^3
  double depositionDepthOffset{0.1};  // extra deposition depth, mm
  double p_u_e{0.0005};               // epoxy price per mg
  double p_u_s{1e-5};                 // stencil sheet price per mm^2
  double p_u_fr4{8e-4};               // FR-4 price per mm^2
  double F_t{300.0};                  // trace engraving feed, mm/min
  double F_o{180.0};                  // outline cutting feed, mm/min
  double dz_t{0.15};                  // trace step-down, mm
  double dz_o{0.4};                   // outline step-down, mm
  double d_o{1.6};                    // board thickness, mm
  double F_d{3.0};                    // deposition feed, mm/s
  double F_l{20.0};                   // laser feed, mm/s
  double T_de{60.0};                  // desoldering time, s
  double t_p{6.0};                    // cleaning time per pad, s
  double T_c{900.0};                  // cure time, s
  double P_de{22.0};                  // desoldering hotplate, W
  double P_i{21.5};                   // soldering iron, W
  double P_d{0.0};                    // deposition device, W
  double P_c{22.0};                   // curing heater, W
  double P_l{8.0};                    // laser cutter, W
  double P_e{47.0};                   // CNC engraver, W

  friend bool operator==(const SustainParams&, const SustainParams&) = default;
};

namespace detail {

struct ParamField {
  const char* name;
  double SustainParams::*member;
  bool positive;    // rates and step-downs must be > 0, everything else >= 0
  bool measured;    // shipped default taken from measured setups
};

inline const std::vector<ParamField>& paramFields() {
  static const std::vector<ParamField> fields{
      {"rho_e", &SustainParams::rho_e, true, false},
      {"depositionDepthOffset", &SustainParams::depositionDepthOffset, false, true},
      {"p_u_e", &SustainParams::p_u_e, false, false},
      {"p_u_s", &SustainParams::p_u_s, false, false},
      {"p_u_fr4", &SustainParams::p_u_fr4, false, false},
      {"F_t", &SustainParams::F_t, true, false},
      {"F_o", &SustainParams::F_o, true, false},
      {"dz_t", &SustainParams::dz_t, true, false},
      {"dz_o", &SustainParams::dz_o, true, false},
      {"d_o", &SustainParams::d_o, true, false},
      {"F_d", &SustainParams::F_d, true, true},
      {"F_l", &SustainParams::F_l, true, false},
      {"T_de", &SustainParams::T_de, false, true},
      {"t_p", &SustainParams::t_p, false, true},
      {"T_c", &SustainParams::T_c, false, true},
      {"P_de", &SustainParams::P_de, false, true},
      {"P_i", &SustainParams::P_i, false, true},
      {"P_d", &SustainParams::P_d, false, true},
      {"P_c", &SustainParams::P_c, false, true},
      {"P_l", &SustainParams::P_l, false, true},
      {"P_e", &SustainParams::P_e, false, true},
  };
  return fields;
}

inline const ParamField* findParam(const std::string& key) {
  for (const auto& f : paramFields())
    if (key == f.name) return &f;
  return nullptr;
}

}  // namespace detail

inline void validateParams(const SustainParams& p) {
  for (const auto& f : detail::paramFields()) {
    const double v = p.*f.member;
    if (!std::isfinite(v)) throw Error(std::string("parameter ") + f.name + " must be finite");
    if (f.positive && !(v > 0.0)) throw Error(std::string("parameter ") + f.name + " must be > 0");
    if (!f.positive && v < 0.0) throw Error(std::string("parameter ") + f.name + " must be >= 0");
  }
}

/// Sets one parameter by its field name; unknown names are an error.
inline void setParam(SustainParams& p, const std::string& key, double value) {
  const auto* f = detail::findParam(key);
  if (!f) throw Error("unknown parameter '" + key + "'");
  p.*f->member = value;
}

/// Parses "key=value".
inline void applyAssignment(SustainParams& p, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw Error("expected key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw Error("parameter '" + key + "' needs a numeric value, got '" + text + "'");
  }
  setParam(p, key, value);
}

/// Overlays the fields present in `j` onto `base`.
inline SustainParams paramsFromJson(const nlohmann::json& j, SustainParams base = {}) {
  if (!j.is_object()) throw Error("parameters must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number()) throw Error("parameter '" + it.key() + "' must be a number");
    setParam(base, it.key(), it.value().get<double>());
  }
  validateParams(base);
  return base;
}

inline nlohmann::ordered_json paramsToJson(const SustainParams& p) {
  nlohmann::ordered_json j;
  for (const auto& f : detail::paramFields()) j[f.name] = p.*f.member;
  return j;
}

/// Names of parameters still holding a shipped default that has no measured
/// basis and should be confirmed by the user.
inline std::vector<std::string> estimatedDefaults(const SustainParams& p) {
  const SustainParams defaults;
  std::vector<std::string> out;
  for (const auto& f : detail::paramFields())
    if (!f.measured && p.*f.member == defaults.*f.member) out.push_back(f.name);
  return out;
}

/// Passes needed to reach `depth` in steps of `stepdown`, ceil(depth/stepdown),
/// with ratios within 1e-9 of an integer treated as that integer.
inline int passCount(double depth, double stepdown) {
  if (!(stepdown > 0.0)) throw Error("step-down must be > 0");
  if (depth <= 0.0) return 0;
  const double ratio = depth / stepdown;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(ratio));
}

}  // namespace renew
