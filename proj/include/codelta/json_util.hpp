#pragma once

#include <json.hpp>

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace codelta {

using Json = nlohmann::json;

// Parses JSON while rejecting duplicate object keys, which the default parser
// would silently collapse.
inline Json parse_json_strict(const std::string& text) {
  std::vector<std::set<std::string>> seen;
  auto cb = [&](int /*depth*/, Json::parse_event_t event, Json& parsed) -> bool {
    switch (event) {
      case Json::parse_event_t::object_start:
        seen.emplace_back();
        break;
      case Json::parse_event_t::key: {
        const std::string key = parsed.get<std::string>();
        if (!seen.back().insert(key).second) throw std::invalid_argument("duplicate JSON key: " + key);
        break;
      }
      case Json::parse_event_t::object_end:
        seen.pop_back();
        break;
      default:
        break;
    }
    return true;
  };
  try {
    return Json::parse(text, cb);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

inline const Json& expect_field(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument("missing field \"" + key + "\"");
  return j.at(key);
}

}  // namespace codelta
