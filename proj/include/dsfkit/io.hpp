// Copyright 2026 The dsfkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON model files and JSON Lines datasets.
//
// Model file:
//   {"ground": ["a", ...],
//    "nodes": [{"id": "u", "unit": {"kind": "sqrt", "params": [], "shift":
//    "0"},
//               "parents": [{"element": "a", "weight": "0.5"},
//                           {"node": "w", "weight": "1"}]}, ...],
//    "root": "u", "final_modular": ["0", ...],
//    "layers": {"u": 1}, "frozen": ["w"]}
// Reals are written as decimal strings with 17 significant digits, which
// reparse to the identical double; plain JSON numbers are accepted on read.

#ifndef DSFKIT_IO_HPP_
#define DSFKIT_IO_HPP_

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dsfkit/dsf.hpp"
#include "dsfkit/learn.hpp"
#include "json.hpp"

namespace dsfkit {

using Json = nlohmann::json;

inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Twelve significant digits, the precision of all CLI output.
inline std::string format_short(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline double parse_real(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) {
    throw Error(where + ": expected a number or a decimal string");
  }
  const std::string s = j.get<std::string>();
  if (s.empty()) throw Error(where + ": empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) {
    throw Error(where + ": cannot parse '" + s + "' as a real");
  }
  return v;
}

namespace detail {

inline const Json& field(const Json& j, const char* key,
                         const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

inline std::string string_field(const Json& j, const char* key,
                                const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_string()) throw Error(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

inline Json reals(std::span<const double> xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(format_real(x));
  return out;
}

inline std::vector<double> parse_reals(const Json& j,
                                       const std::string& where) {
  if (!j.is_array()) throw Error(where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(parse_real(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace detail

inline Json unit_to_json(const ConcaveUnit& u) {
  return Json{{"kind", std::string(unit_kind_name(u.kind()))},
              {"params", detail::reals(u.params())},
              {"shift", format_real(u.shift())}};
}

inline ConcaveUnit unit_from_json(const Json& j, const std::string& where) {
  const std::string kind = detail::string_field(j, "kind", where);
  std::vector<double> params;
  if (j.contains("params")) {
    params = detail::parse_reals(j.at("params"), where + ".params");
  }
  const double shift =
      j.contains("shift") ? parse_real(j.at("shift"), where + ".shift") : 0.0;
  return ConcaveUnit(unit_kind_from_name(kind), std::move(params), shift);
}

inline Json model_to_json(const DsfModel& f) {
  Json j;
  j["ground"] = f.ground().labels();
  Json nodes = Json::array();
  for (const auto& spec : f.node_specs()) {
    Json parents = Json::array();
    for (const auto& p : spec.parents) {
      const char* key = p.kind == ParentSpec::Kind::kNode ? "node" : "element";
      parents.push_back(Json{{key, p.name}, {"weight", format_real(p.weight)}});
    }
    nodes.push_back(Json{{"id", spec.id},
                         {"unit", unit_to_json(spec.unit)},
                         {"parents", parents}});
  }
  j["nodes"] = nodes;
  j["root"] = f.root_name();
  j["final_modular"] = detail::reals(f.final_modular().weights());
  if (!f.layer_of().empty()) {
    Json layers = Json::object();
    for (const auto& [id, l] : f.layer_of()) layers[id] = l;
    j["layers"] = layers;
  }
  if (!f.frozen().empty()) {
    j["frozen"] =
        std::vector<std::string>(f.frozen().begin(), f.frozen().end());
  }
  return j;
}

// Builds the model and runs validate_model; any structural problem throws.
inline DsfModel model_from_json(const Json& j) {
  const std::string w = "model";
  if (!j.is_object()) throw Error("model: expected a JSON object");
  const Json& gj = detail::field(j, "ground", w);
  if (!gj.is_array()) throw Error("model: 'ground' must be an array");
  std::vector<std::string> labels;
  for (const auto& l : gj) {
    if (!l.is_string()) throw Error("model: ground labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  GroundSet g(std::move(labels));
  std::vector<NodeSpec> specs;
  const Json& nj = detail::field(j, "nodes", w);
  if (!nj.is_array()) throw Error("model: 'nodes' must be an array");
  for (std::size_t i = 0; i < nj.size(); ++i) {
    const std::string where = "model.nodes[" + std::to_string(i) + "]";
    NodeSpec s;
    s.id = detail::string_field(nj[i], "id", where);
    s.unit =
        unit_from_json(detail::field(nj[i], "unit", where), where + ".unit");
    const Json& pj = detail::field(nj[i], "parents", where);
    if (!pj.is_array()) throw Error(where + ": 'parents' must be an array");
    for (std::size_t k = 0; k < pj.size(); ++k) {
      const std::string pw = where + ".parents[" + std::to_string(k) + "]";
      const Json& p = pj[k];
      const bool is_node = p.is_object() && p.contains("node");
      const bool is_elem = p.is_object() && p.contains("element");
      if (is_node == is_elem) {
        throw Error(pw + ": needs exactly one of 'node' or 'element'");
      }
      const std::string name =
          detail::string_field(p, is_node ? "node" : "element", pw);
      const double weight = p.contains("weight")
                                ? parse_real(p.at("weight"), pw + ".weight")
                                : 1.0;
      s.parents.push_back(is_node ? from_node(name, weight)
                                  : from_element(name, weight));
    }
    specs.push_back(std::move(s));
  }
  std::string root;
  if (j.contains("root")) {
    if (!j.at("root").is_string())
      throw Error("model: 'root' must be a string");
    root = j.at("root").get<std::string>();
  }
  std::optional<ModularFunction> m;
  if (j.contains("final_modular")) {
    auto ws = detail::parse_reals(j.at("final_modular"), "model.final_modular");
    if (ws.size() != g.size()) {
      throw Error("model: final_modular needs " + std::to_string(g.size()) +
                  " entries, got " + std::to_string(ws.size()));
    }
    m = ModularFunction(g, std::move(ws));
  }
  std::map<std::string, int> layers;
  if (j.contains("layers")) {
    const Json& lj = j.at("layers");
    if (!lj.is_object()) throw Error("model: 'layers' must be an object");
    for (const auto& [id, l] : lj.items()) {
      if (!l.is_number_integer()) {
        throw Error("model: layer of '" + id + "' must be an integer");
      }
      layers[id] = l.get<int>();
    }
  }
  std::set<std::string> frozen;
  if (j.contains("frozen")) {
    for (const auto& id : j.at("frozen")) {
      if (!id.is_string()) throw Error("model: frozen ids must be strings");
      frozen.insert(id.get<std::string>());
    }
  }
  DsfModel f(g, std::move(specs), root, m, std::move(layers),
             std::move(frozen));
  const auto report = validate_model(f);
  if (!report.pass) {
    throw Error("model: validation failed\n" + report.to_string());
  }
  return f;
}

inline void save_model(const DsfModel& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << model_to_json(f).dump(2) << "\n";
  if (!out) throw Error("write to '" + path + "' failed");
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error("'" + path + "': malformed JSON: " + e.what());
  }
}

inline DsfModel load_model(const std::string& path) {
  return model_from_json(read_json_file(path));
}

// Parses "a,b,c" against g; the empty string is the empty set.
inline Subset parse_label_list(const GroundSet& g, const std::string& csv) {
  Subset s(g);
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (!g.contains_label(item)) {
      throw Error("unknown element '" + item + "'");
    }
    s.insert(g.id(item));
  }
  return s;
}

// One record per line: {"set": [labels], "value": real} for regression or
// {"set": [labels]} for summaries. Blank lines are ignored.
inline Dataset read_dataset(std::istream& in, const GroundSet& g) {
  Dataset d{g, {}, {}};
  std::string line;
  std::size_t lineno = 0, with_value = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "dataset line " + std::to_string(lineno);
    Json r;
    try {
      r = Json::parse(line);
    } catch (const Json::exception& e) {
      throw Error(where + ": malformed JSON: " + e.what());
    }
    const Json& sj = detail::field(r, "set", where);
    if (!sj.is_array()) throw Error(where + ": 'set' must be an array");
    Subset s(g);
    for (const auto& l : sj) {
      if (!l.is_string() || !g.contains_label(l.get<std::string>())) {
        throw Error(where + ": unknown element " + l.dump());
      }
      s.insert(g.id(l.get<std::string>()));
    }
    d.sets.push_back(std::move(s));
    if (r.contains("value")) {
      d.values.push_back(parse_real(r.at("value"), where + ".value"));
      ++with_value;
    }
  }
  if (with_value != 0 && with_value != d.sets.size()) {
    throw Error("dataset: either every record or none carries a value");
  }
  d.validate();
  return d;
}

inline Dataset load_dataset(const std::string& path, const GroundSet& g) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_dataset(in, g);
}

inline void write_dataset(std::ostream& out, const Dataset& d) {
  for (std::size_t i = 0; i < d.sets.size(); ++i) {
    Json r;
    std::vector<std::string> labels;
    d.sets[i].for_each(
        [&](std::size_t e) { labels.push_back(d.ground.label(e)); });
    r["set"] = labels;
    if (d.is_regression()) r["value"] = format_real(d.values[i]);
    out << r.dump() << "\n";
  }
}

}  // namespace dsfkit

#endif  // DSFKIT_IO_HPP_
