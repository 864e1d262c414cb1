#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmf/core/errors.hpp"

namespace mmf {

// {"time": t, "order": p, "fields": {name: [[element 0 nodal values], ...]}}
// Nodal values follow the GLL tensor ordering j*(p+1)+i.
inline nlohmann::json fields_to_json(double time, int order, int npe,
                                     const std::map<std::string, std::span<const double>>& fields) {
  nlohmann::json j;
  j["time"] = time;
  j["order"] = order;
  j["fields"] = nlohmann::json::object();
  for (const auto& [name, v] : fields) {
    if (npe <= 0 || v.size() % npe != 0) throw InvalidField("field '" + name + "' is not a whole number of elements");
    nlohmann::json arr = nlohmann::json::array();
    for (size_t e = 0; e < v.size() / npe; ++e) arr.push_back(std::vector<double>(v.begin() + e * npe, v.begin() + (e + 1) * npe));
    j["fields"][name] = std::move(arr);
  }
  return j;
}

inline std::vector<double> field_from_json(const nlohmann::json& j, const std::string& name) {
  if (!j.contains("fields") || !j["fields"].contains(name)) throw SchemaMismatch("no field '" + name + "'");
  std::vector<double> out;
  for (const auto& el : j["fields"][name])
    for (const auto& v : el) out.push_back(v.get<double>());
  return out;
}

}  // namespace mmf
