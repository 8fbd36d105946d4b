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

// The DSF engine. A model is a DAG of concave units over a ground set:
//
//   psi_v(x) = phi_v( sum_u w_vu psi_u(x) + sum_a m_v(a) x_a )
//   f(A)     = psi_root(1_A) + m_pm(A)
//
// Evaluation on a subset and the concave extension on a real vector run the
// same forward pass, so the two agree exactly on hypercube vertices.

#ifndef DSFKIT_DSF_HPP_
#define DSFKIT_DSF_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsfkit/concave.hpp"
#include "dsfkit/core.hpp"
#include "dsfkit/report.hpp"

namespace dsfkit {

inline constexpr double kDefaultSlopeCap = 1e12;

struct ParentSpec {
  enum class Kind { kNode, kElement };
  Kind kind = Kind::kElement;
  std::string name;
  double weight = 1.0;
};

inline ParentSpec from_node(std::string id, double weight = 1.0) {
  return {ParentSpec::Kind::kNode, std::move(id), weight};
}
inline ParentSpec from_element(std::string label, double weight = 1.0) {
  return {ParentSpec::Kind::kElement, std::move(label), weight};
}

struct NodeSpec {
  std::string id;
  ConcaveUnit unit;
  std::vector<ParentSpec> parents;
};

struct DsfNode {
  std::string id;
  ConcaveUnit unit;
  std::vector<std::pair<std::size_t, double>> internal;  // (node index, w)
  std::vector<std::pair<std::size_t, double>> ground;    // (element id, m)
};

enum class ModelFamily { kModular, kSubmodular, kSupermodular, kMixed };

enum class ParamKind {
  kInternalWeight,
  kGroundWeight,
  kUnitParam,
  kShift,
  kFinalModular
};

struct ParamInfo {
  ParamKind kind;
  std::size_t node = 0;  // node index (unused for kFinalModular)
  std::size_t slot = 0;  // parent slot, unit-param index, or element id
};

// Forward values and adjoints for one input.
struct GradientTape {
  std::vector<double> pre_activation;  // phi-bar_v
  std::vector<double> activation;      // psi_v
  std::vector<double> adjoint;         // d output / d psi_v
  std::vector<double> weights;         // aligned with parameter_layout()
  std::vector<double> input;           // d output / d x
  double value = 0.0;
  bool capped = false;  // an infinite slope was capped
  std::size_t capped_count = 0;
};

struct MultivariateAssignment {
  // Layer index per argument; sigma[0] == 0 (the ground set).
  std::vector<int> sigma;
  // Optional modular terms for arguments 2..k over their layer sets. Entry
  // j-1 applies to argument j; missing entries are zero.
  std::vector<ModularFunction> modular;
};

class DsfModel {
 public:
  DsfModel() = default;

  DsfModel(GroundSet ground, std::vector<NodeSpec> nodes, std::string root,
           std::optional<ModularFunction> final_modular = std::nullopt,
           std::map<std::string, int> layer_of = {},
           std::set<std::string> frozen = {})
      : ground_(std::move(ground)),
        root_name_(std::move(root)),
        layer_of_(std::move(layer_of)),
        frozen_(std::move(frozen)) {
    final_ = final_modular ? *final_modular : ModularFunction::zero(ground_);
    if (!(final_.ground() == ground_)) {
      throw Error(
          "DsfModel: final modular function over a different ground "
          "set");
    }
    specs_ = std::move(nodes);
    build();
  }

  // A model with no units: f = m_pm.
  static DsfModel modular_only(const ModularFunction& m) {
    return DsfModel(m.ground(), {}, "", m);
  }

  const GroundSet& ground() const { return ground_; }
  const std::vector<DsfNode>& nodes() const { return nodes_; }
  const std::vector<std::size_t>& topological_order() const { return topo_; }
  const ModularFunction& final_modular() const { return final_; }
  const std::string& root_name() const { return root_name_; }
  std::optional<std::size_t> root() const { return root_; }
  const std::map<std::string, int>& layer_of() const { return layer_of_; }
  const std::set<std::string>& frozen() const { return frozen_; }
  bool is_frozen(std::size_t node) const {
    return frozen_.count(nodes_[node].id) > 0;
  }
  const std::vector<std::string>& problems() const { return problems_; }
  bool structurally_valid() const { return problems_.empty(); }

  std::size_t node_index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error("DsfModel: unknown node '" + id + "'");
    return it->second;
  }

  ModelFamily family() const {
    bool concave = false, convex = false;
    for (const auto& n : nodes_) {
      const Curvature c = n.unit.curvature();
      if (c == Curvature::kConcave) concave = true;
      if (c == Curvature::kConvex) convex = true;
    }
    if (concave && convex) return ModelFamily::kMixed;
    if (concave) return ModelFamily::kSubmodular;
    if (convex) return ModelFamily::kSupermodular;
    return ModelFamily::kModular;
  }

  // Layered view: layer l >= 1 as a ground set of node ids (in node order).
  bool layered() const { return !layer_of_.empty(); }
  int num_layers() const {
    int top = 0;
    for (const auto& [id, l] : layer_of_) top = std::max(top, l);
    return top;
  }
  GroundSet layer(int l) const {
    if (l == 0) return ground_;
    std::vector<std::string> ids;
    for (const auto& n : nodes_) {
      auto it = layer_of_.find(n.id);
      if (it != layer_of_.end() && it->second == l) ids.push_back(n.id);
    }
    if (ids.empty()) {
      throw Error("DsfModel: layer " + std::to_string(l) + " is empty");
    }
    return GroundSet(std::move(ids));
  }

  // ---- trainable parameters (frozen nodes excluded) ----

  const std::vector<ParamInfo>& parameter_layout() const { return layout_; }
  std::size_t num_parameters() const { return layout_.size(); }

  std::vector<double> parameters() const {
    std::vector<double> out;
    out.reserve(layout_.size());
    for (const auto& p : layout_) out.push_back(parameter(p));
    return out;
  }

  double parameter(const ParamInfo& p) const {
    switch (p.kind) {
      case ParamKind::kInternalWeight:
        return nodes_[p.node].internal[p.slot].second;
      case ParamKind::kGroundWeight:
        return nodes_[p.node].ground[p.slot].second;
      case ParamKind::kUnitParam:
        return nodes_[p.node].unit.params()[p.slot];
      case ParamKind::kShift:
        return nodes_[p.node].unit.shift();
      case ParamKind::kFinalModular:
        return final_.weight(p.slot);
    }
    return 0.0;
  }

  std::string parameter_name(const ParamInfo& p) const {
    switch (p.kind) {
      case ParamKind::kInternalWeight:
        return "w[" + nodes_[p.node].id + "<-" +
               nodes_[nodes_[p.node].internal[p.slot].first].id + "]";
      case ParamKind::kGroundWeight:
        return "m[" + nodes_[p.node].id + "<-" +
               ground_.label(nodes_[p.node].ground[p.slot].first) + "]";
      case ParamKind::kUnitParam:
        return "param[" + nodes_[p.node].id + "][" + std::to_string(p.slot) +
               "]";
      case ParamKind::kShift:
        return "shift[" + nodes_[p.node].id + "]";
      case ParamKind::kFinalModular:
        return "m_pm[" + ground_.label(p.slot) + "]";
    }
    return "?";
  }

  // Replaces all trainable parameters. Throws if a unit parameter is
  // outside its domain; negative weights make the model invalid.
  void set_parameters(std::span<const double> values) {
    if (values.size() != layout_.size()) {
      throw Error("DsfModel::set_parameters: expected " +
                  std::to_string(layout_.size()) + " values");
    }
    std::vector<double> fm(final_.weights().begin(), final_.weights().end());
    // Unit params are collected per node and applied together.
    std::vector<std::vector<double>> unit_params(nodes_.size());
    std::vector<double> shifts(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      unit_params[i] = nodes_[i].unit.params();
      shifts[i] = nodes_[i].unit.shift();
    }
    for (std::size_t i = 0; i < layout_.size(); ++i) {
      const auto& p = layout_[i];
      const double v = values[i];
      switch (p.kind) {
        case ParamKind::kInternalWeight:
          nodes_[p.node].internal[p.slot].second = v;
          break;
        case ParamKind::kGroundWeight:
          nodes_[p.node].ground[p.slot].second = v;
          break;
        case ParamKind::kUnitParam:
          unit_params[p.node][p.slot] = v;
          break;
        case ParamKind::kShift:
          shifts[p.node] = v;
          break;
        case ParamKind::kFinalModular:
          fm[p.slot] = v;
          break;
      }
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (unit_params[i] != nodes_[i].unit.params() ||
          shifts[i] != nodes_[i].unit.shift()) {
        nodes_[i].unit =
            ConcaveUnit(nodes_[i].unit.kind(), unit_params[i], shifts[i]);
      }
    }
    final_ = ModularFunction(ground_, std::move(fm), false);
    sync_specs();
    check_weights();
  }

  // Rebuilds the model around new units or weights in node specs form.
  std::vector<NodeSpec> node_specs() const { return specs_; }

  // ---- evaluation ----

  double evaluate(const Subset& a) const {
    require_ground(a.ground());
    const auto x = indicator_vector(a);
    return forward(x, nullptr, nullptr, nullptr) + final_(a);
  }

  double concave_extension(std::span<const double> x) const {
    require_input(x);
    return forward(x, nullptr, nullptr, nullptr) + final_.dot(x);
  }

  // psi_root alone, without the final modular term.
  double root_value(std::span<const double> x) const {
    require_input(x);
    return forward(x, nullptr, nullptr, nullptr);
  }

  // Forward pass with per-node values and optional gating (gate[v] == 0
  // forces psi_v = 0). Returns psi_root.
  double forward(std::span<const double> x, std::vector<double>* pre,
                 std::vector<double>* act,
                 const std::vector<char>* gate) const {
    require_valid();
    std::vector<double> local;
    std::vector<double>& psi = act ? *act : local;
    psi.assign(nodes_.size(), 0.0);
    if (pre) pre->assign(nodes_.size(), 0.0);
    for (std::size_t v : topo_) {
      if (gate && !(*gate)[v]) continue;
      const DsfNode& n = nodes_[v];
      double z = 0.0;
      for (const auto& [u, w] : n.internal) z += w * psi[u];
      for (const auto& [e, m] : n.ground) z += m * x[e];
      if (z < 0.0) z = 0.0;  // guards -0.0 and rounding below zero
      if (pre) (*pre)[v] = z;
      psi[v] = n.unit.value(z);
    }
    return root_ ? psi[*root_] : 0.0;
  }

  // Reverse-mode pass. Unit slopes use the supergradient midpoint; an
  // infinite slope is replaced by `slope_cap` and flagged in the tape.
  GradientTape gradient(std::span<const double> x,
                        double slope_cap = kDefaultSlopeCap) const {
    require_input(x);
    GradientTape t;
    t.value =
        forward(x, &t.pre_activation, &t.activation, nullptr) + final_.dot(x);
    const std::size_t nn = nodes_.size();
    t.adjoint.assign(nn, 0.0);
    t.input.assign(ground_.size(), 0.0);
    std::vector<double> local_grad(nn, 0.0);  // adjoint * phi'(z)
    if (root_) t.adjoint[*root_] = 1.0;
    for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
      const std::size_t v = *it;
      const double adj = t.adjoint[v];
      if (adj == 0.0) continue;
      double slope =
          nodes_[v].unit.supergradient(t.pre_activation[v]).midpoint();
      if (!std::isfinite(slope) || slope > slope_cap) {
        slope = slope_cap;
        t.capped = true;
        ++t.capped_count;
      }
      const double g = adj * slope;
      local_grad[v] = g;
      for (const auto& [u, w] : nodes_[v].internal) t.adjoint[u] += g * w;
      for (const auto& [e, m] : nodes_[v].ground) t.input[e] += g * m;
    }
    for (std::size_t e = 0; e < ground_.size(); ++e) {
      t.input[e] += final_.weight(e);
    }
    t.weights.assign(layout_.size(), 0.0);
    for (std::size_t i = 0; i < layout_.size(); ++i) {
      const auto& p = layout_[i];
      const DsfNode& n = nodes_[p.node];
      switch (p.kind) {
        case ParamKind::kInternalWeight:
          t.weights[i] =
              local_grad[p.node] * t.activation[n.internal[p.slot].first];
          break;
        case ParamKind::kGroundWeight:
          t.weights[i] = local_grad[p.node] * x[n.ground[p.slot].first];
          break;
        case ParamKind::kUnitParam:
          if (t.adjoint[p.node] != 0.0) {
            t.weights[i] =
                t.adjoint[p.node] *
                n.unit.param_derivative(t.pre_activation[p.node], p.slot);
          }
          break;
        case ParamKind::kShift:
          if (t.adjoint[p.node] != 0.0) {
            double d = n.unit.shift_derivative(t.pre_activation[p.node]);
            if (!std::isfinite(d)) {
              d = d > 0 ? slope_cap : -slope_cap;
              t.capped = true;
              ++t.capped_count;
            }
            t.weights[i] = t.adjoint[p.node] * d;
          }
          break;
        case ParamKind::kFinalModular:
          t.weights[i] = x[p.slot];
          break;
      }
    }
    return t;
  }

  // Gated evaluation for k-argument models.
  double evaluate_multivariate(const MultivariateAssignment& asg,
                               const std::vector<Subset>& args) const {
    require_valid();
    if (!layered()) throw Error("evaluate_multivariate: model is not layered");
    const std::size_t k = asg.sigma.size();
    if (k == 0 || asg.sigma[0] != 0) {
      throw Error("evaluate_multivariate: sigma must start at layer 0");
    }
    if (args.size() != k) {
      throw Error("evaluate_multivariate: expected " + std::to_string(k) +
                  " arguments");
    }
    for (std::size_t j = 1; j < k; ++j) {
      if (asg.sigma[j] <= asg.sigma[j - 1] || asg.sigma[j] > num_layers()) {
        throw Error(
            "evaluate_multivariate: sigma must be strictly "
            "increasing valid layers");
      }
    }
    require_ground(args[0].ground());
    std::vector<char> gate(nodes_.size(), 1);
    double extra = 0.0;
    for (std::size_t j = 1; j < k; ++j) {
      const GroundSet lay = layer(asg.sigma[j]);
      if (!(args[j].ground() == lay)) {
        throw Error("evaluate_multivariate: argument " + std::to_string(j + 1) +
                    " is not a subset of layer " +
                    std::to_string(asg.sigma[j]));
      }
      for (std::size_t i = 0; i < lay.size(); ++i) {
        if (!args[j].contains(i)) gate[node_index(lay.label(i))] = 0;
      }
      if (j - 1 < asg.modular.size()) extra += asg.modular[j - 1](args[j]);
    }
    const auto x = indicator_vector(args[0]);
    return forward(x, nullptr, nullptr, &gate) + final_(args[0]) + extra;
  }

 private:
  void require_ground(const GroundSet& g) const {
    if (!(g == ground_)) throw Error("DsfModel: ground set mismatch");
  }
  void require_input(std::span<const double> x) const {
    if (x.size() != ground_.size()) {
      throw Error("DsfModel: input has length " + std::to_string(x.size()) +
                  ", expected " + std::to_string(ground_.size()));
    }
    for (double v : x) {
      if (!(v >= 0.0)) throw Error("DsfModel: negative input coordinate");
    }
  }
  void require_valid() const {
    if (!problems_.empty()) {
      throw Error("DsfModel: invalid model: " + problems_.front());
    }
  }

  void build() {
    problems_.clear();
    nodes_.clear();
    index_.clear();
    for (const auto& s : specs_) {
      if (!index_.emplace(s.id, nodes_.size()).second) {
        problems_.push_back("duplicate node id '" + s.id + "'");
        continue;
      }
      nodes_.push_back(DsfNode{s.id, s.unit, {}, {}});
    }
    for (const auto& s : specs_) {
      auto it = index_.find(s.id);
      DsfNode& n = nodes_[it->second];
      if (!n.internal.empty() || !n.ground.empty()) continue;
      for (const auto& p : s.parents) {
        if (p.kind == ParentSpec::Kind::kNode) {
          auto pit = index_.find(p.name);
          if (pit == index_.end()) {
            problems_.push_back("node '" + s.id + "' has unknown parent '" +
                                p.name + "'");
            continue;
          }
          n.internal.emplace_back(pit->second, p.weight);
        } else {
          if (!ground_.contains_label(p.name)) {
            problems_.push_back("node '" + s.id +
                                "' has unknown element parent '" + p.name +
                                "'");
            continue;
          }
          n.ground.emplace_back(ground_.id(p.name), p.weight);
        }
      }
      if (s.parents.empty()) {
        problems_.push_back("node '" + s.id + "' has no parents");
      }
    }
    root_.reset();
    if (!root_name_.empty()) {
      auto it = index_.find(root_name_);
      if (it == index_.end()) {
        problems_.push_back("root '" + root_name_ + "' is not a node");
      } else {
        root_ = it->second;
      }
    } else if (!nodes_.empty()) {
      problems_.push_back("model has nodes but no root");
    }
    for (const auto& f : frozen_) {
      if (!index_.count(f))
        problems_.push_back("unknown frozen node '" + f + "'");
    }
    for (const auto& [id, l] : layer_of_) {
      if (!index_.count(id)) {
        problems_.push_back("layer given for unknown node '" + id + "'");
      } else if (l < 1) {
        problems_.push_back("node '" + id + "' has layer < 1");
      }
    }
    compute_topology();
    check_weights();
    build_layout();
  }

  void compute_topology() {
    topo_.clear();
    const std::size_t nn = nodes_.size();
    std::vector<std::vector<std::size_t>> children(nn);
    std::vector<std::size_t> indeg(nn, 0);
    for (std::size_t v = 0; v < nn; ++v) {
      for (const auto& [u, w] : nodes_[v].internal) {
        children[u].push_back(v);
        ++indeg[v];
      }
    }
    // Kahn's algorithm, smallest index first for a stable order.
    std::set<std::size_t> ready;
    for (std::size_t v = 0; v < nn; ++v) {
      if (indeg[v] == 0) ready.insert(v);
    }
    while (!ready.empty()) {
      const std::size_t v = *ready.begin();
      ready.erase(ready.begin());
      topo_.push_back(v);
      for (std::size_t c : children[v]) {
        if (--indeg[c] == 0) ready.insert(c);
      }
    }
    if (topo_.size() != nn) {
      std::string names;
      for (std::size_t v = 0; v < nn; ++v) {
        if (indeg[v] > 0) names += (names.empty() ? "" : ",") + nodes_[v].id;
      }
      problems_.push_back("cycle among nodes {" + names + "}");
      topo_.clear();
      return;
    }
    if (root_) {
      // Every node must feed the root.
      std::vector<char> reaches(nn, 0);
      reaches[*root_] = 1;
      for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
        for (std::size_t c : children[*it]) {
          if (reaches[c]) reaches[*it] = 1;
        }
      }
      for (std::size_t v = 0; v < nn; ++v) {
        if (!reaches[v]) {
          problems_.push_back("node '" + nodes_[v].id +
                              "' does not reach the root");
        }
      }
      // Keep the root last in the order.
      auto rit = std::find(topo_.begin(), topo_.end(), *root_);
      if (rit + 1 != topo_.end()) {
        topo_.erase(rit);
        topo_.push_back(*root_);
      }
    }
    for (const auto& [id, l] : layer_of_) {
      auto it = index_.find(id);
      if (it == index_.end()) continue;
      for (const auto& [u, w] : nodes_[it->second].internal) {
        auto lu = layer_of_.find(nodes_[u].id);
        if (lu == layer_of_.end() || lu->second >= l) {
          problems_.push_back("layer order violated on edge '" + nodes_[u].id +
                              "' -> '" + id + "'");
        }
      }
    }
    if (!layer_of_.empty() && layer_of_.size() != nodes_.size()) {
      problems_.push_back("layer_of must cover every node");
    }
  }

  void check_weights() {
    std::erase_if(problems_, [](const std::string& p) {
      return p.rfind("negative weight", 0) == 0;
    });
    for (const auto& n : nodes_) {
      for (const auto& [u, w] : n.internal) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
          problems_.push_back("negative weight " + std::to_string(w) +
                              " on edge '" + nodes_[u].id + "' -> '" + n.id +
                              "'");
        }
      }
      for (const auto& [e, m] : n.ground) {
        if (!(m >= 0.0) || !std::isfinite(m)) {
          problems_.push_back("negative weight " + std::to_string(m) +
                              " on element '" + ground_.label(e) + "' -> '" +
                              n.id + "'");
        }
      }
    }
  }

  void build_layout() {
    layout_.clear();
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
      if (frozen_.count(nodes_[v].id)) continue;
      const DsfNode& n = nodes_[v];
      for (std::size_t s = 0; s < n.internal.size(); ++s) {
        layout_.push_back({ParamKind::kInternalWeight, v, s});
      }
      for (std::size_t s = 0; s < n.ground.size(); ++s) {
        layout_.push_back({ParamKind::kGroundWeight, v, s});
      }
      for (std::size_t s : n.unit.differentiable_params()) {
        layout_.push_back({ParamKind::kUnitParam, v, s});
      }
      layout_.push_back({ParamKind::kShift, v, 0});
    }
    for (std::size_t e = 0; e < ground_.size(); ++e) {
      layout_.push_back({ParamKind::kFinalModular, 0, e});
    }
  }

  // Mirrors the node state back into specs_ so node_specs() stays current.
  void sync_specs() {
    for (auto& s : specs_) {
      auto it = index_.find(s.id);
      if (it == index_.end()) continue;
      const DsfNode& n = nodes_[it->second];
      s.unit = n.unit;
      std::size_t ni = 0, gi = 0;
      for (auto& p : s.parents) {
        if (p.kind == ParentSpec::Kind::kNode) {
          if (ni < n.internal.size()) p.weight = n.internal[ni++].second;
        } else {
          if (gi < n.ground.size()) p.weight = n.ground[gi++].second;
        }
      }
    }
  }

  GroundSet ground_;
  std::vector<NodeSpec> specs_;
  std::vector<DsfNode> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> topo_;
  std::string root_name_;
  std::optional<std::size_t> root_;
  ModularFunction final_;
  std::map<std::string, int> layer_of_;
  std::set<std::string> frozen_;
  std::vector<std::string> problems_;
  std::vector<ParamInfo> layout_;
};

inline double evaluate(const DsfModel& f, const Subset& a) {
  return f.evaluate(a);
}

inline double concave_extension(const DsfModel& f, std::span<const double> x) {
  return f.concave_extension(x);
}
inline double concave_extension(const DsfModel& f,
                                const std::vector<double>& x) {
  return f.concave_extension(std::span<const double>(x));
}

inline GradientTape gradient_weights(const DsfModel& f, const Subset& a) {
  if (!(a.ground() == f.ground())) throw Error("gradient: ground mismatch");
  const auto x = indicator_vector(a);
  return f.gradient(x);
}

struct InputGradient {
  std::vector<double> values;
  bool capped = false;
};

inline InputGradient gradient_input(const DsfModel& f,
                                    std::span<const double> x,
                                    double slope_cap = kDefaultSlopeCap) {
  auto t = f.gradient(x, slope_cap);
  return {std::move(t.input), t.capped};
}
inline InputGradient gradient_input(const DsfModel& f,
                                    const std::vector<double>& x,
                                    double slope_cap = kDefaultSlopeCap) {
  return gradient_input(f, std::span<const double>(x), slope_cap);
}

inline double evaluate_multivariate(const DsfModel& f,
                                    const MultivariateAssignment& asg,
                                    const std::vector<Subset>& args) {
  return f.evaluate_multivariate(asg, args);
}

inline double evaluate_difference(const DsfModel& f1, const DsfModel& f2,
                                  const Subset& a) {
  if (!(f1.ground() == f2.ground())) {
    throw Error("evaluate_difference: ground set mismatch");
  }
  return f1.evaluate(a) - f2.evaluate(a);
}

inline VerificationReport validate_model(const DsfModel& f) {
  VerificationReport r("valid_model");
  r.subsets_checked = 0;
  std::uint64_t order = 0;
  for (const auto& p : f.problems()) {
    Witness w;
    w.detail = p;
    w.violation = 1.0;
    w.order = order++;
    r.add(std::move(w));
  }
  for (const auto& n : f.nodes()) {
    if (n.unit.value(0.0) != 0.0) {
      Witness w;
      w.detail = "unit of node '" + n.id + "' is not normalized";
      w.violation = std::fabs(n.unit.value(0.0));
      w.order = order++;
      r.add(std::move(w));
    }
  }
  if (f.family() == ModelFamily::kMixed) {
    Witness w;
    w.detail = "mixed concave and convex units";
    w.violation = 1.0;
    w.order = order++;
    r.add(std::move(w));
  }
  return r;
}

// The model as a plain set-function handle (shares a copy of the model).
inline SetFunction as_set_function(const DsfModel& f, std::string name = {}) {
  auto m = std::make_shared<const DsfModel>(f);
  return SetFunction(
      f.ground(), [m](const Subset& s) { return m->evaluate(s); }, {},
      name.empty() ? std::string("dsf") : std::move(name));
}

}  // namespace dsfkit

#endif  // DSFKIT_DSF_HPP_
