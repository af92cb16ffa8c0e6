/**
 * @file io.hpp
 * @brief JSON and CSV records for diagrams, invariant values, and fit reports.
 */

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "kashaev/asymptotics.hpp"
#include "kashaev/diagram.hpp"
#include "kashaev/gluing.hpp"

namespace kashaev {

inline nlohmann::json to_json(const TangleDiagram& d) {
  nlohmann::json events = nlohmann::json::array();
  for (const Event& e : d.events()) events.push_back({{"op", op_code(e.kind)}, {"at", e.at}});
  return {{"name", d.name()}, {"events", events}};
}

/// Throws DiagramError on any malformed or invalid input.
inline TangleDiagram diagram_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("events") || !j.at("events").is_array()) {
      throw DiagramError("diagram JSON needs an \"events\" array");
    }
    std::vector<Event> events;
    for (const auto& je : j.at("events")) {
      const std::string op = je.at("op").get<std::string>();
      const auto kind = parse_op_code(op);
      if (!kind) throw DiagramError("unknown event op '" + op + "'");
      events.push_back({*kind, je.at("at").get<int>()});
    }
    return TangleDiagram(j.value("name", std::string("unnamed")), std::move(events));
  } catch (const nlohmann::json::exception& e) {
    throw DiagramError(std::string("diagram JSON: ") + e.what());
  }
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return nlohmann::json::parse(in);
}

struct InvariantRecord {
  int N = 0;
  cplx value;
  double modulus = 0.0;
  double log_modulus = 0.0;

  bool operator==(const InvariantRecord&) const = default;
};

inline InvariantRecord make_record(int n, cplx value) {
  const double m = std::abs(value);
  return {n, value, m, std::log(m)};
}

inline nlohmann::json to_json(const InvariantRecord& r) {
  return {{"N", r.N},
          {"value", {{"re", r.value.real()}, {"im", r.value.imag()}}},
          {"modulus", r.modulus},
          {"log_modulus", r.log_modulus}};
}

inline InvariantRecord record_from_json(const nlohmann::json& j) {
  InvariantRecord r;
  r.N = j.at("N").get<int>();
  r.value = cplx(j.at("value").at("re").get<double>(), j.at("value").at("im").get<double>());
  r.modulus = j.at("modulus").get<double>();
  r.log_modulus = j.at("log_modulus").get<double>();
  return r;
}

/// Shortest text that parses back to the same double.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_header_invariant() { return "N,re,im,modulus,log_modulus"; }

inline std::string to_csv(const InvariantRecord& r) {
  return std::to_string(r.N) + "," + format_double(r.value.real()) + "," +
         format_double(r.value.imag()) + "," + format_double(r.modulus) + "," +
         format_double(r.log_modulus);
}

inline nlohmann::json to_json(const GrowthFit& f) {
  return {{"vol_estimate", f.vol_estimate}, {"slope", f.slope},
          {"log_exponent", f.log_exponent}, {"constant", f.constant},
          {"residual_norm", f.residual_norm}, {"N_range", {f.n_min, f.n_max}},
          {"samples", f.samples}, {"with_log_term", f.with_log_term}};
}

inline nlohmann::json to_json(const ConjectureReport& r) {
  nlohmann::json j{{"fit", to_json(r.fit)},
                   {"geometric_vol", r.geometric_vol},
                   {"gap", r.gap},
                   {"hyperbolic", r.hyperbolic},
                   {"note", r.note}};
  j["saddle_prediction"] = r.saddle_prediction ? nlohmann::json(*r.saddle_prediction) : nlohmann::json();
  return j;
}

}  // namespace kashaev
