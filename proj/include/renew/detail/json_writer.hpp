#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

namespace renew::detail {

/// Fixed-point decimal text; negative zero and sub-resolution values print as zero.
inline std::string fixed(double v, int places = 6) {
  const double half = 0.5 * std::pow(10.0, -places);
  if (std::abs(v) < half) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", places, v);
  return buf;
}

/// Pretty-prints JSON with every floating-point number at a fixed number of
/// decimals. Arrays holding only scalars stay on one line. Key order is the
/// insertion order of the ordered_json value.
class FixedJsonWriter {
public:
  explicit FixedJsonWriter(int places = 6) : places_(places) {}

  std::string write(const nlohmann::ordered_json& j) const {
    std::string out;
    emit(j, out, 0);
    out += '\n';
    return out;
  }

private:
  static bool scalar(const nlohmann::ordered_json& j) { return !j.is_array() && !j.is_object(); }

  void emit(const nlohmann::ordered_json& j, std::string& out, int depth) const {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
    if (j.is_number_float()) {
      out += fixed(j.get<double>(), places_);
    } else if (j.is_object()) {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + nlohmann::ordered_json(it.key()).dump() + ": ";
        emit(it.value(), out, depth + 1);
      }
      out += "\n" + pad + "}";
    } else if (j.is_array()) {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool flat = true;
      for (const auto& e : j) flat = flat && scalar(e);
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(j[i], out, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        emit(j[i], out, depth + 1);
      }
      out += "\n" + pad + "]";
    } else {
      out += j.dump();
    }
  }

  int places_;
};

}  // namespace renew::detail
