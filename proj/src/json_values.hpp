#pragma once

// JSON mapping for parameter values and flight states, shared by the
// snapshot format and the wire protocol.

#include <json.hpp>

#include "ocsis/error.hpp"
#include "ocsis/model.hpp"

namespace ocsis::detail {

using Json = nlohmann::json;

inline Json value_to_json(const ParamValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  return std::get<EnumLabel>(v).label;
}

// Throws Error(code) for a JSON value that is not a number, bool or string.
inline ParamValue value_from_json(const Json& j, ErrorCode code) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return EnumLabel{j.get<std::string>()};
  throw Error(code, "parameter value must be a number, bool or label");
}

inline FlightPhase phase_from_json(const Json& j, ErrorCode code) {
  if (!j.is_string()) throw Error(code, "phase must be a string");
  auto p = parse_phase(j.get<std::string>());
  if (!p) throw Error(code, "unknown phase " + j.get<std::string>());
  return *p;
}

inline Json state_to_json(const FlightState& s) {
  Json values = Json::object();
  for (const auto& [k, v] : s.values) values[k] = value_to_json(v);
  return Json{{"tick", s.tick}, {"phase", std::string(to_string(s.phase))}, {"values", values}};
}

inline FlightState state_from_json(const Json& j, ErrorCode code) {
  FlightState s;
  s.tick = j.at("tick").get<std::int64_t>();
  s.phase = phase_from_json(j.at("phase"), code);
  for (const auto& [k, v] : j.at("values").items()) s.values[k] = value_from_json(v, code);
  return s;
}

}  // namespace ocsis::detail
