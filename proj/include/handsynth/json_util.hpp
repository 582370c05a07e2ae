#pragma once

#include <nlohmann/json.hpp>

#include "handsynth/errors.hpp"
#include "handsynth/geometry.hpp"

namespace handsynth {

using json = nlohmann::ordered_json;

inline void to_json(json& j, const Vec3& v) { j = json::array({v.x, v.y, v.z}); }
inline void from_json(const json& j, Vec3& v) {
  if (!j.is_array() || j.size() != 3) throw SchemaError("expected [x, y, z] array");
  v = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline void to_json(json& j, const Quat& q) { j = json::array({q.w, q.x, q.y, q.z}); }
inline void from_json(const json& j, Quat& q) {
  if (!j.is_array() || j.size() != 4) throw SchemaError("expected [w, x, y, z] array");
  q = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

// Fetch a required field, converting nlohmann's exceptions into SchemaError
// so callers surface one consistent failure type.
template <typename T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw SchemaError(std::string("missing field: ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("bad field '") + key + "': " + e.what());
  }
}

template <typename T>
T value_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("bad field '") + key + "': " + e.what());
  }
}

inline void check_schema_version(const json& j, int expected, const char* what) {
  const int got = require<int>(j, "schema_version");
  if (got != expected) {
    throw SchemaError(std::string(what) + ": unsupported schema_version " + std::to_string(got) +
                      " (expected " + std::to_string(expected) + ")");
  }
}

}  // namespace handsynth
