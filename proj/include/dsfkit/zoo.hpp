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

// Constructors for named set functions: SCMMs, feature-based functions,
// graph functions, coverage and divergence objectives, matroid ranks, the
// F_k family and a few fixed presets.

#ifndef DSFKIT_ZOO_HPP_
#define DSFKIT_ZOO_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dsfkit/concave.hpp"
#include "dsfkit/core.hpp"
#include "dsfkit/dsf.hpp"

namespace dsfkit {

// ---------------------------------------------------------------------------
// SCMMs and feature-based functions

struct ScmmTerm {
  ConcaveUnit unit;
  ModularFunction modular;  // non-negative
  double weight = 1.0;
  std::string name;  // optional node id
};

// sum_i w_i phi_i(m_i(A)) + m_pm(A). Terms become layer-1 nodes feeding an
// identity root. Zero modular entries are dropped unless `dense` is set, in
// which case every element gets an edge (useful as a training topology).
inline DsfModel make_scmm(const std::vector<ScmmTerm>& terms,
                          const ModularFunction& m_pm, bool dense = false) {
  const GroundSet& g = m_pm.ground();
  if (terms.empty()) return DsfModel::modular_only(m_pm);
  std::vector<NodeSpec> nodes;
  std::map<std::string, int> layers;
  NodeSpec root{"root", units::identity(), {}};
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    if (!(t.modular.ground() == g)) throw Error("make_scmm: ground mismatch");
    if (!(t.weight >= 0.0)) throw Error("make_scmm: negative term weight");
    NodeSpec n;
    n.id = t.name.empty() ? "t" + std::to_string(i) : t.name;
    n.unit = t.unit;
    for (std::size_t e = 0; e < g.size(); ++e) {
      const double w = t.modular.weight(e);
      if (w < 0.0) throw Error("make_scmm: negative modular entry");
      if (w > 0.0 || dense) n.parents.push_back(from_element(g.label(e), w));
    }
    if (n.parents.empty()) {
      // An all-zero modular term is identically zero; keep it wired.
      n.parents.push_back(from_element(g.label(0), 0.0));
    }
    root.parents.push_back(from_node(n.id, t.weight));
    layers[n.id] = 1;
    nodes.push_back(std::move(n));
  }
  layers["root"] = 2;
  nodes.push_back(std::move(root));
  return DsfModel(g, std::move(nodes), "root", m_pm, std::move(layers));
}

struct FeatureMatrix {
  GroundSet ground;
  std::vector<std::string> features;
  std::vector<std::vector<double>> scores;  // scores[u][v] = m_u(v) >= 0
  std::vector<double> weights;              // w_u >= 0
  std::vector<ConcaveUnit> units;           // phi_u

  void validate() const {
    const std::size_t k = features.size();
    if (scores.size() != k || weights.size() != k || units.size() != k) {
      throw Error(
          "FeatureMatrix: features, scores, weights and units must "
          "have equal length");
    }
    for (std::size_t u = 0; u < k; ++u) {
      if (scores[u].size() != ground.size()) {
        throw Error("FeatureMatrix: score row '" + features[u] +
                    "' has wrong length");
      }
      for (double s : scores[u]) {
        if (!(s >= 0.0)) throw Error("FeatureMatrix: negative score");
      }
      if (!(weights[u] >= 0.0)) throw Error("FeatureMatrix: negative weight");
    }
  }
};

inline DsfModel make_feature_based(const FeatureMatrix& f,
                                   const ModularFunction& m_pm,
                                   bool dense = false) {
  f.validate();
  if (!(m_pm.ground() == f.ground)) {
    throw Error("make_feature_based: ground mismatch");
  }
  std::vector<ScmmTerm> terms;
  for (std::size_t u = 0; u < f.features.size(); ++u) {
    terms.push_back({f.units[u], ModularFunction(f.ground, f.scores[u], true),
                     f.weights[u], f.features[u]});
  }
  return make_scmm(terms, m_pm, dense);
}

// ---------------------------------------------------------------------------
// Matroid ranks

struct PartitionSpec {
  std::vector<Subset> blocks;
  std::vector<int> caps;
};

inline void validate_partition(const PartitionSpec& p) {
  if (p.blocks.empty() || p.blocks.size() != p.caps.size()) {
    throw Error("PartitionSpec: need one cap per block");
  }
  const GroundSet& g = p.blocks.front().ground();
  Subset seen(g);
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    if (!(p.blocks[i].ground() == g))
      throw Error("PartitionSpec: mixed grounds");
    if (!p.blocks[i].disjoint(seen)) {
      throw Error("PartitionSpec: blocks overlap");
    }
    if (p.caps[i] < 0) throw Error("PartitionSpec: negative cap");
    seen = seen | p.blocks[i];
  }
  if (seen.count() != g.size()) {
    throw Error("PartitionSpec: blocks do not cover the ground set");
  }
}

inline SetFunction make_partition_rank(const PartitionSpec& p) {
  validate_partition(p);
  return SetFunction::integer(
      p.blocks.front().ground(),
      [p](const Subset& x) {
        std::int64_t r = 0;
        for (std::size_t i = 0; i < p.blocks.size(); ++i) {
          r += std::min<std::int64_t>((x & p.blocks[i]).count(), p.caps[i]);
        }
        return r;
      },
      "partition_rank");
}

struct LaminarNode {
  Subset set;
  int capacity = 0;
  std::vector<std::size_t> children;
};

struct LaminarTree {
  GroundSet ground;
  std::vector<LaminarNode> nodes;
  std::size_t root = 0;
};

inline void validate_laminar(const LaminarTree& t) {
  if (t.nodes.empty() || t.root >= t.nodes.size()) {
    throw Error("LaminarTree: missing root");
  }
  if (t.nodes[t.root].set.count() != t.ground.size()) {
    throw Error("LaminarTree: root set must be the whole ground set");
  }
  std::vector<int> parents(t.nodes.size(), 0);
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    if (!(n.set.ground() == t.ground))
      throw Error("LaminarTree: ground mismatch");
    if (n.capacity < 0) throw Error("LaminarTree: negative capacity");
    Subset seen(t.ground);
    for (std::size_t c : n.children) {
      if (c >= t.nodes.size() || c == i) {
        throw Error("LaminarTree: bad child index");
      }
      ++parents[c];
      const Subset& cs = t.nodes[c].set;
      if (!cs.is_subset_of(n.set)) {
        throw Error("LaminarTree: child set not contained in its parent");
      }
      if (!cs.disjoint(seen)) {
        throw Error("LaminarTree: sibling sets are not disjoint");
      }
      seen = seen | cs;
    }
  }
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const int want = i == t.root ? 0 : 1;
    if (parents[i] != want) {
      throw Error("LaminarTree: node " + std::to_string(i) +
                  " must have exactly " + std::to_string(want) + " parent(s)");
    }
  }
}

struct LaminarRank {
  DsfModel model;
  SetFunction oracle;
};

namespace detail {
inline std::int64_t laminar_rank_at(const LaminarTree& t, std::size_t v,
                                    const Subset& a) {
  const auto& n = t.nodes[v];
  Subset covered(t.ground);
  std::int64_t sum = 0;
  for (std::size_t c : n.children) {
    sum += laminar_rank_at(t, c, a);
    covered = covered | t.nodes[c].set;
  }
  sum += static_cast<std::int64_t>(((a & n.set) - covered).count());
  return std::min<std::int64_t>(sum, n.capacity);
}
}  // namespace detail

// Recursive rank r_F(A) = min(sum_children r_F'(A) + |A cap F \ children|,
// k_F), both as an exact oracle and as a tree DSF of truncation units.
inline LaminarRank make_laminar_rank(const LaminarTree& t) {
  validate_laminar(t);
  auto oracle = SetFunction::integer(
      t.ground,
      [t](const Subset& a) { return detail::laminar_rank_at(t, t.root, a); },
      "laminar_rank");
  // Depth gives the layer: leaves of the tree are deepest.
  std::vector<int> height(t.nodes.size(), 1);
  std::function<int(std::size_t)> h = [&](std::size_t v) {
    int best = 0;
    for (std::size_t c : t.nodes[v].children) best = std::max(best, h(c));
    return height[v] = best + 1;
  };
  h(t.root);
  std::vector<NodeSpec> nodes;
  std::map<std::string, int> layers;
  for (std::size_t v = 0; v < t.nodes.size(); ++v) {
    const auto& n = t.nodes[v];
    NodeSpec s;
    s.id = "F" + std::to_string(v);
    // A zero capacity node is identically zero: zero inputs, unit cap 1.
    const double w = n.capacity == 0 ? 0.0 : 1.0;
    s.unit = units::truncate(n.capacity == 0 ? 1.0 : n.capacity);
    Subset covered(t.ground);
    for (std::size_t c : n.children) {
      s.parents.push_back(from_node("F" + std::to_string(c), w));
      covered = covered | t.nodes[c].set;
    }
    (n.set - covered).for_each([&](std::size_t e) {
      s.parents.push_back(from_element(t.ground.label(e), w));
    });
    layers[s.id] = height[v];
    nodes.push_back(std::move(s));
  }
  DsfModel model(t.ground, std::move(nodes), "F" + std::to_string(t.root),
                 std::nullopt, std::move(layers));
  return {std::move(model), std::move(oracle)};
}

// A random laminar tree over `ground`: recursive random splits with random
// capacities in [0, |F|].
inline LaminarTree random_laminar_tree(const GroundSet& ground,
                                       std::mt19937_64& rng,
                                       int max_depth = 3) {
  LaminarTree t;
  t.ground = ground;
  std::function<std::size_t(std::vector<std::size_t>, int)> grow =
      [&](std::vector<std::size_t> elems, int depth) -> std::size_t {
    const std::size_t idx = t.nodes.size();
    t.nodes.push_back({});
    Subset s(ground);
    for (auto e : elems) s.insert(e);
    std::uniform_int_distribution<int> cap(0, static_cast<int>(elems.size()));
    t.nodes[idx].set = s;
    t.nodes[idx].capacity = cap(rng);
    if (idx == 0 && t.nodes[idx].capacity == 0) t.nodes[idx].capacity = 1;
    if (depth >= max_depth || elems.size() < 2) return idx;
    std::shuffle(elems.begin(), elems.end(), rng);
    std::uniform_int_distribution<int> nkids(0, 3);
    const int kids = nkids(rng);
    std::size_t pos = 0;
    std::vector<std::size_t> children;
    for (int k = 0; k < kids && pos < elems.size(); ++k) {
      std::uniform_int_distribution<std::size_t> len(1, elems.size() - pos);
      const std::size_t l = len(rng);
      std::vector<std::size_t> part(elems.begin() + pos,
                                    elems.begin() + pos + l);
      pos += l;
      if (part.size() == elems.size()) break;  // keep children proper
      children.push_back(grow(part, depth + 1));
    }
    t.nodes[idx].children = children;
    return idx;
  };
  std::vector<std::size_t> all(ground.size());
  std::iota(all.begin(), all.end(), 0);
  grow(all, 0);
  return t;
}

// f_R(A) = min(|A|, a + |A \ R|, b).
inline SetFunction make_truncated_partition_rank(const Subset& r, int a,
                                                 int b) {
  if (a >= b) throw Error("truncated rank: need a < b");
  if (a < 0 || static_cast<std::size_t>(a) > r.count()) {
    throw Error("truncated rank: need 0 <= a <= |R|");
  }
  return SetFunction::integer(
      r.ground(),
      [r, a, b](const Subset& x) {
        const auto sz = static_cast<std::int64_t>(x.count());
        const auto out = static_cast<std::int64_t>((x - r).count());
        return std::min({sz, a + out, static_cast<std::int64_t>(b)});
      },
      "truncated_rank");
}

struct Graph {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::string> vertex_names;  // optional
};

// Edge ground set labeled by endpoint names ("ab") or "e<i>".
inline GroundSet edge_ground(const Graph& g) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (g.vertex_names.size() == static_cast<std::size_t>(g.num_vertices)) {
      labels.push_back(g.vertex_names[g.edges[i].first] +
                       g.vertex_names[g.edges[i].second]);
    } else {
      labels.push_back("e" + std::to_string(i));
    }
  }
  return GroundSet(std::move(labels));
}

// Size of a maximum spanning forest of the edge subset A.
inline int cycle_matroid_rank(const Graph& g, const Subset& a) {
  std::vector<int> parent(g.num_vertices);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  int rank = 0;
  bool bad = false;
  a.for_each([&](std::size_t e) {
    if (e >= g.edges.size()) {
      bad = true;
      return;
    }
    const int u = find(g.edges[e].first), v = find(g.edges[e].second);
    if (u != v) {
      parent[u] = v;
      ++rank;
    }
  });
  if (bad) throw Error("cycle_matroid_rank: edge index out of range");
  return rank;
}

inline SetFunction make_cycle_matroid_rank(const Graph& g) {
  for (const auto& [u, v] : g.edges) {
    if (u < 0 || v < 0 || u >= g.num_vertices || v >= g.num_vertices) {
      throw Error("cycle matroid: vertex out of range");
    }
  }
  return SetFunction::integer(
      edge_ground(g), [g](const Subset& a) { return cycle_matroid_rank(g, a); },
      "cycle_rank");
}

inline Graph k4_graph() {
  Graph g;
  g.num_vertices = 4;
  g.vertex_names = {"a", "b", "c", "d"};
  g.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  return g;
}

inline SetFunction k4_rank() { return make_cycle_matroid_rank(k4_graph()); }

// ---------------------------------------------------------------------------
// The F_k family

inline constexpr int kMaxFk = 4;

// Labels are k base-3 digits, most significant first; the leading digit
// names the top-level block.
inline GroundSet fk_ground(int k) {
  if (k < 1) throw Error("fk: k must be positive");
  std::size_t n = 1;
  for (int i = 0; i < k; ++i) n *= 3;
  if (n > kMaxGroundSize) throw Error("fk: 3^k exceeds the ground-set cap");
  std::vector<std::string> labels;
  for (std::size_t id = 0; id < n; ++id) {
    std::string s(k, '0');
    std::size_t v = id;
    for (int d = k - 1; d >= 0; --d) {
      s[d] = static_cast<char>('0' + v % 3);
      v /= 3;
    }
    labels.push_back(s);
  }
  return GroundSet(std::move(labels));
}

// f1(X) = min(|X|, 2) / 2 and fk(X) = min(sum_i f_{k-1}(X cap V_ki), 2) / 2,
// as a k-layer tree of piecewise-linear units.
inline DsfModel make_fk_hat(int k, int max_k = kMaxFk) {
  if (k < 1 || k > max_k) {
    throw Error("make_fk_hat: k must be in [1, " + std::to_string(max_k) + "]");
  }
  const GroundSet g = fk_ground(k);
  const ConcaveUnit half_cap = units::piecewise_linear({0.5, 0.0}, {2.0});
  std::vector<NodeSpec> nodes;
  std::map<std::string, int> layers;
  // Node "n<prefix>" covers the labels starting with prefix; depth = len.
  std::function<std::string(const std::string&)> build =
      [&](const std::string& prefix) -> std::string {
    NodeSpec s;
    s.id = "n" + prefix;
    s.unit = half_cap;
    const int depth = static_cast<int>(prefix.size());
    for (char d = '0'; d <= '2'; ++d) {
      const std::string p = prefix + d;
      if (depth + 1 == k) {
        s.parents.push_back(from_element(p, 1.0));
      } else {
        s.parents.push_back(from_node(build(p), 1.0));
      }
    }
    layers[s.id] = k - depth;
    nodes.push_back(std::move(s));
    return "n" + prefix;
  };
  const std::string root = build("");
  return DsfModel(g, std::move(nodes), root, std::nullopt, std::move(layers));
}

// ---------------------------------------------------------------------------
// Graph functions

enum class GraphFunctionKind {
  kFacilityLocation,
  kSoftmaxFacility,
  kGraphCut,
  kMonotoneCut,
  kSaturatedCut,
  kBipartiteNeighborhood,
};

struct GraphSpec {
  GroundSet ground;
  // Facility kinds and bipartite: w[u][v] over concepts u and elements v.
  // Cut kinds: a symmetric |V| x |V| matrix.
  std::vector<std::vector<double>> w;
  std::vector<double> concept_weights;  // bipartite: w(u), default 1
  double gamma = 1.0;                   // softmax facility
  double alpha = 0.5;                   // saturated cut
};

struct GraphFunction {
  SetFunction handle;
  std::optional<DsfModel> model;
};

inline GraphFunction make_graph_function(GraphFunctionKind kind,
                                         const GraphSpec& s) {
  const GroundSet& g = s.ground;
  const std::size_t n = g.size();
  for (const auto& row : s.w) {
    if (row.size() != n) throw Error("graph function: bad weight row length");
    for (double x : row) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw Error("graph function: weights must be non-negative");
      }
    }
  }
  auto square = [&] {
    if (s.w.size() != n) throw Error("graph function: need |V| x |V| weights");
  };
  switch (kind) {
    case GraphFunctionKind::kFacilityLocation: {
      auto w = s.w;
      return {SetFunction(
                  g,
                  [w](const Subset& a) {
                    double sum = 0.0;
                    for (const auto& row : w) {
                      double best = 0.0;
                      a.for_each([&](std::size_t v) {
                        best = std::max(best, row[v]);
                      });
                      sum += best;
                    }
                    return sum;
                  },
                  {}, "facility_location"),
              std::nullopt};
    }
    case GraphFunctionKind::kSoftmaxFacility: {
      if (!(s.gamma > 0.0)) throw Error("softmax facility: gamma must be > 0");
      // (1/g) log(1 + sum_a (exp(g w_a) - 1)), the normalized soft max.
      std::vector<ScmmTerm> terms;
      for (std::size_t u = 0; u < s.w.size(); ++u) {
        std::vector<double> m(n);
        for (std::size_t v = 0; v < n; ++v) {
          m[v] = std::expm1(s.gamma * s.w[u][v]) / s.gamma;
        }
        terms.push_back({units::log_gamma(1.0 / s.gamma),
                         ModularFunction(g, m, true), 1.0,
                         "u" + std::to_string(u)});
      }
      auto model = make_scmm(terms, ModularFunction::zero(g));
      return {as_set_function(model, "softmax_facility"), model};
    }
    case GraphFunctionKind::kGraphCut: {
      square();
      auto w = s.w;
      return {SetFunction(
                  g,
                  [w](const Subset& a) {
                    double sum = 0.0;
                    const Subset out = a.complement();
                    a.for_each([&](std::size_t x) {
                      out.for_each([&](std::size_t y) { sum += w[x][y]; });
                    });
                    return sum;
                  },
                  {}, "graph_cut"),
              std::nullopt};
    }
    case GraphFunctionKind::kMonotoneCut: {
      square();
      std::vector<double> deg(n, 0.0);
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) deg[x] += s.w[x][y];
      }
      ModularFunction m(g, deg, true);
      return {SetFunction(
                  g, [m](const Subset& a) { return m(a); }, {}, "monotone_cut"),
              DsfModel::modular_only(m)};
    }
    case GraphFunctionKind::kSaturatedCut: {
      square();
      if (!(s.alpha > 0.0 && s.alpha < 1.0)) {
        throw Error("saturated cut: alpha must be in (0, 1)");
      }
      std::vector<ScmmTerm> terms;
      for (std::size_t v = 0; v < n; ++v) {
        const double cv = std::accumulate(s.w[v].begin(), s.w[v].end(), 0.0);
        if (cv <= 0.0) continue;
        terms.push_back({units::truncate(s.alpha * cv),
                         ModularFunction(g, s.w[v], true), 1.0,
                         "c" + g.label(v)});
      }
      auto model = make_scmm(terms, ModularFunction::zero(g));
      return {as_set_function(model, "saturated_cut"), model};
    }
    case GraphFunctionKind::kBipartiteNeighborhood: {
      std::vector<ScmmTerm> terms;
      for (std::size_t u = 0; u < s.w.size(); ++u) {
        const double wu =
            s.concept_weights.empty() ? 1.0 : s.concept_weights.at(u);
        if (!(wu >= 0.0)) throw Error("bipartite: negative concept weight");
        std::vector<double> adj(n);
        for (std::size_t v = 0; v < n; ++v) adj[v] = s.w[u][v] > 0 ? 1.0 : 0.0;
        terms.push_back({units::truncate(1.0), ModularFunction(g, adj, true),
                         wu, "u" + std::to_string(u)});
      }
      auto model = make_scmm(terms, ModularFunction::zero(g));
      return {as_set_function(model, "bipartite_neighborhood"), model};
    }
  }
  throw Error("make_graph_function: unknown kind");
}

// ---------------------------------------------------------------------------
// Coverage and divergence objectives

// Per topic u: 1 - prod_a (1 - p(u|a)) = 1 - exp(-sum_a log(1/(1-p(u|a)))).
inline DsfModel make_prob_coverage(const GroundSet& g,
                                   const std::vector<std::vector<double>>& p) {
  std::vector<ScmmTerm> terms;
  for (std::size_t u = 0; u < p.size(); ++u) {
    if (p[u].size() != g.size()) throw Error("prob coverage: bad row length");
    std::vector<double> m(g.size());
    for (std::size_t a = 0; a < g.size(); ++a) {
      const double q = p[u][a];
      if (q == 1.0) {
        throw Error("prob coverage: p(u|a) = 1 gives an infinite weight");
      }
      if (!(q >= 0.0 && q < 1.0)) {
        throw Error("prob coverage: probabilities must lie in [0, 1)");
      }
      m[a] = -std::log1p(-q);
    }
    terms.push_back({units::one_minus_exp(), ModularFunction(g, m, true), 1.0,
                     "u" + std::to_string(u)});
  }
  return make_scmm(terms, ModularFunction::zero(g));
}

// For delta < 1: sum_u p_u^delta m_u(X)^(1-delta); for delta = 1:
// sum_u p_u log(1 + m_u(X)).
inline DsfModel make_divergence_objective(
    const GroundSet& g, const std::vector<double>& p, double delta,
    const std::vector<std::vector<double>>& scores) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw Error("divergence objective: delta must be in (0, 1]");
  }
  if (p.size() != scores.size()) {
    throw Error("divergence objective: one score row per outcome");
  }
  double total = 0.0;
  for (double q : p) {
    if (!(q >= 0.0)) throw Error("divergence objective: negative probability");
    total += q;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw Error("divergence objective: p must sum to 1");
  }
  std::vector<ScmmTerm> terms;
  for (std::size_t u = 0; u < p.size(); ++u) {
    const ConcaveUnit unit =
        delta == 1.0 ? units::log_gamma(1.0) : units::power(1.0 - delta);
    const double w = delta == 1.0 ? p[u] : std::pow(p[u], delta);
    terms.push_back({unit, ModularFunction(g, scores[u], true), w,
                     "u" + std::to_string(u)});
  }
  return make_scmm(terms, ModularFunction::zero(g));
}

// ---------------------------------------------------------------------------
// Block truncations: phi_root(sum_i min(|A cap B_i|, k_i)) with truncate
// units, the shape of the separation presets.

inline DsfModel make_block_truncation(const GroundSet& g,
                                      const std::vector<Subset>& blocks,
                                      const std::vector<double>& caps,
                                      const ConcaveUnit& outer) {
  if (blocks.size() != caps.size()) throw Error("block truncation: sizes");
  std::vector<NodeSpec> nodes;
  std::map<std::string, int> layers;
  NodeSpec root{"root", outer, {}};
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    NodeSpec b;
    b.id = "B" + std::to_string(i + 1);
    b.unit = units::truncate(caps[i]);
    blocks[i].for_each([&](std::size_t e) {
      b.parents.push_back(from_element(g.label(e), 1.0));
    });
    root.parents.push_back(from_node(b.id, 1.0));
    layers[b.id] = 1;
    nodes.push_back(std::move(b));
  }
  layers["root"] = 2;
  nodes.push_back(std::move(root));
  return DsfModel(g, std::move(nodes), "root", std::nullopt, std::move(layers));
}

namespace presets {

inline Subset labels(const GroundSet& g,
                     std::initializer_list<const char*> ls) {
  Subset s(g);
  for (const char* l : ls) s.insert(g.id(l));
  return s;
}

// min(min(|A cap abc|, 2) + min(|A cap def|, 2), 3).
inline LaminarRank laminar6() {
  const GroundSet g = GroundSet::lettered(6);
  LaminarTree t;
  t.ground = g;
  t.nodes = {{Subset::full(g), 3, {1, 2}},
             {labels(g, {"a", "b", "c"}), 2, {}},
             {labels(g, {"d", "e", "f"}), 2, {}}};
  return make_laminar_rank(t);
}

// min(min(|A cap abcd|, 3) + min(|A cap cdef|, 3), 5).
inline DsfModel overlap6() {
  const GroundSet g = GroundSet::lettered(6);
  return make_block_truncation(
      g, {labels(g, {"a", "b", "c", "d"}), labels(g, {"c", "d", "e", "f"})},
      {3, 3}, units::truncate(5));
}

// min(sum_i min(|A cap B_i|, 3), 7) with four overlapping blocks of 8.
inline DsfModel fourblocks8() {
  const GroundSet g = GroundSet::lettered(8);
  return make_block_truncation(
      g,
      {labels(g, {"a", "b", "c", "d"}), labels(g, {"c", "d", "e", "f"}),
       labels(g, {"e", "f", "g", "h"}), labels(g, {"g", "h", "a", "b"})},
      {3, 3, 3, 3}, units::truncate(7));
}

// phi(min(|A cap abc|, 2) + min(|A cap def|, 2)).
inline DsfModel two_block_nest(const ConcaveUnit& phi) {
  const GroundSet g = GroundSet::lettered(6);
  return make_block_truncation(
      g, {labels(g, {"a", "b", "c"}), labels(g, {"d", "e", "f"})}, {2, 2}, phi);
}

// Counts of (square, triangle, circle) per object a..i.
inline const std::vector<std::array<int, 3>>& shape_counts() {
  static const std::vector<std::array<int, 3>> counts = {
      {9, 0, 0}, {8, 1, 0}, {1, 2, 6}, {3, 3, 3}, {0, 7, 2},
      {4, 2, 3}, {4, 3, 2}, {2, 4, 3}, {6, 0, 3}};
  return counts;
}

// g(A) = sum over the three shape features of sqrt(count in A).
inline DsfModel shape_features() {
  const GroundSet g = GroundSet::lettered(9);
  FeatureMatrix f;
  f.ground = g;
  f.features = {"square", "triangle", "circle"};
  f.scores.assign(3, std::vector<double>(9));
  for (std::size_t v = 0; v < 9; ++v) {
    for (std::size_t u = 0; u < 3; ++u) {
      f.scores[u][v] = shape_counts()[v][u];
    }
  }
  f.weights = {1, 1, 1};
  f.units = {units::sqrt(), units::sqrt(), units::sqrt()};
  return make_feature_based(f, ModularFunction::zero(g));
}

}  // namespace presets

// ---------------------------------------------------------------------------
// Random models for property tests

struct RandomDsfOptions {
  int hidden_layers = 2;  // layers below the root
  int width = 3;          // nodes per hidden layer
  double edge_prob = 0.6;
  double weight_min = 0.1;
  double weight_max = 1.0;
  bool skip_connections = true;        // ground edges into upper layers
  double modular_scale = 0.5;          // m_pm entries in [-s, s]
  std::vector<ConcaveUnit> unit_pool;  // default: smooth concave units
};

inline std::vector<ConcaveUnit> smooth_concave_pool() {
  return {units::sqrt(),
          units::log_gamma(1.0),
          units::log_gamma(3.0),
          units::one_minus_exp(),
          units::power(0.6),
          units::shifted_sigmoid(1.0),
          units::soft_min(1.0, 2.0),
          units::identity()};
}

inline DsfModel make_random_dsf(const GroundSet& g, const RandomDsfOptions& o,
                                std::mt19937_64& rng) {
  const auto pool = o.unit_pool.empty() ? smooth_concave_pool() : o.unit_pool;
  std::uniform_real_distribution<double> unit01(0.0, 1.0);
  std::uniform_real_distribution<double> weight(o.weight_min, o.weight_max);
  std::uniform_int_distribution<std::size_t> pick_unit(0, pool.size() - 1);
  std::vector<NodeSpec> nodes;
  std::map<std::string, int> layers;
  std::vector<std::vector<std::string>> by_layer(o.hidden_layers + 1);
  const std::size_t n = g.size();
  for (int l = 1; l <= o.hidden_layers + 1; ++l) {
    const bool top = l == o.hidden_layers + 1;
    const int count = top ? 1 : o.width;
    for (int i = 0; i < count; ++i) {
      NodeSpec s;
      s.id = top ? "root" : "h" + std::to_string(l) + "_" + std::to_string(i);
      s.unit = pool[pick_unit(rng)];
      if (l == 1) {
        for (std::size_t e = 0; e < n; ++e) {
          if (unit01(rng) < o.edge_prob) {
            s.parents.push_back(from_element(g.label(e), weight(rng)));
          }
        }
        if (s.parents.empty()) {
          std::uniform_int_distribution<std::size_t> pe(0, n - 1);
          s.parents.push_back(from_element(g.label(pe(rng)), weight(rng)));
        }
      } else {
        const auto& below = by_layer[l - 1];
        for (const auto& b : below) {
          if (top || unit01(rng) < o.edge_prob) {
            s.parents.push_back(from_node(b, weight(rng)));
          }
        }
        if (s.parents.empty()) {
          std::uniform_int_distribution<std::size_t> pb(0, below.size() - 1);
          s.parents.push_back(from_node(below[pb(rng)], weight(rng)));
        }
        if (o.skip_connections) {
          for (std::size_t e = 0; e < n; ++e) {
            if (unit01(rng) < 0.15) {
              s.parents.push_back(from_element(g.label(e), weight(rng)));
            }
          }
        }
      }
      layers[s.id] = l;
      if (!top) by_layer[l].push_back(s.id);
      nodes.push_back(std::move(s));
    }
    // Every node below must feed some node of this layer.
    if (l >= 2) {
      const std::size_t first = nodes.size() - count;
      for (const auto& b : by_layer[l - 1]) {
        bool used = false;
        for (std::size_t i = first; i < nodes.size(); ++i) {
          for (const auto& p : nodes[i].parents) {
            if (p.kind == ParentSpec::Kind::kNode && p.name == b) used = true;
          }
        }
        if (!used) {
          std::uniform_int_distribution<std::size_t> pi(first,
                                                        nodes.size() - 1);
          nodes[pi(rng)].parents.push_back(from_node(b, weight(rng)));
        }
      }
    }
  }
  std::uniform_real_distribution<double> mod(-o.modular_scale, o.modular_scale);
  std::vector<double> m(n);
  for (auto& x : m) x = o.modular_scale > 0 ? mod(rng) : 0.0;
  return DsfModel(g, std::move(nodes), "root", ModularFunction(g, m),
                  std::move(layers));
}

}  // namespace dsfkit

#endif  // DSFKIT_ZOO_HPP_
