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

// Training by projected stochastic subgradient steps: regression and
// max-margin, plus parameter projection, initialization, a finite-difference
// gradient check and rebinding of a frozen feature embedding.

#ifndef DSFKIT_LEARN_HPP_
#define DSFKIT_LEARN_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "dsfkit/core.hpp"
#include "dsfkit/dsf.hpp"
#include "dsfkit/optimize.hpp"
#include "dsfkit/zoo.hpp"

namespace dsfkit {

struct Dataset {
  GroundSet ground;
  std::vector<Subset> sets;
  std::vector<double> values;  // empty for summary datasets

  bool is_regression() const { return !values.empty(); }

  void validate() const {
    if (sets.empty()) throw Error("dataset: no samples");
    if (!values.empty() && values.size() != sets.size()) {
      throw Error("dataset: one value per set required");
    }
    for (const auto& s : sets) {
      if (!(s.ground() == ground)) throw Error("dataset: ground set mismatch");
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw Error("dataset: non-finite value");
    }
  }
};

enum class RegressionLoss { kSquared, kAbsolute };
enum class MarginLoss { kHinge, kLogistic };
enum class StepRule { kSgd, kAdam };

struct TrainConfig {
  double learning_rate = 0.05;
  double decay = 0.0;  // rate_t = learning_rate / (1 + decay * epoch)
  int epochs = 100;
  std::size_t batch_size = 16;
  double lambda = 0.0;
  RegressionLoss regression_loss = RegressionLoss::kSquared;
  MarginLoss margin_loss = MarginLoss::kHinge;
  // Margin loss per reference set; Hamming |A xor S| when empty.
  std::function<SetFunction(const Subset&)> loss_for;
  std::size_t budget = 0;  // inference budget; 0 uses |S|
  std::uint64_t seed = 1;
  StepRule step = StepRule::kAdam;
  bool learn_unit_params = false;  // unit parameters and shifts
  bool learn_final_modular = true;
};

struct TrainResult {
  DsfModel model;
  std::vector<double> loss_history;  // entry 0 is the initial loss
};

inline void write_loss_csv(std::ostream& os, const std::vector<double>& h) {
  os << "epoch,loss\n";
  char buf[64];
  for (std::size_t i = 0; i < h.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.12g\n", i, h[i]);
    os << buf;
  }
}

// ---------------------------------------------------------------------------
// Projection and initialization

namespace detail {

inline bool is_weight(ParamKind k) {
  return k == ParamKind::kInternalWeight || k == ParamKind::kGroundWeight;
}

// Clamps one parameter into its feasible set given the node's unit kind.
inline double project_one(const DsfModel& f, const ParamInfo& p, double v) {
  constexpr double kFloor = 1e-6;
  switch (p.kind) {
    case ParamKind::kInternalWeight:
    case ParamKind::kGroundWeight:
    case ParamKind::kShift:
      return std::max(0.0, v);
    case ParamKind::kFinalModular:
      return v;
    case ParamKind::kUnitParam: {
      const ConcaveUnit& u = f.nodes()[p.node].unit;
      double out = std::max(kFloor, v);
      if (u.kind() == UnitKind::kPower) {
        // Keep the unit on its side of linear.
        const bool concave = u.params()[0] <= 1.0;
        out = concave ? std::min(out, 1.0) : std::max(out, 1.0);
      }
      return std::isfinite(out) ? out : f.parameter(p);
    }
  }
  return v;
}

inline std::vector<double> project_vector(const DsfModel& f,
                                          std::vector<double> v) {
  const auto& layout = f.parameter_layout();
  for (std::size_t i = 0; i < layout.size(); ++i) {
    v[i] = project_one(f, layout[i], v[i]);
  }
  return v;
}

}  // namespace detail

// Clamps weights and shifts to >= 0 and unit parameters into their domains;
// the final modular term keeps its sign.
inline DsfModel project_parameters(const DsfModel& f) {
  DsfModel out = f;
  out.set_parameters(detail::project_vector(f, f.parameters()));
  return out;
}

// Internal and ground weights i.i.d. uniform on (0, 1) over the node's
// fan-in; final modular terms at 0. Frozen nodes are left alone.
inline DsfModel initialize_parameters(const DsfModel& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto p = f.parameters();
  const auto& layout = f.parameter_layout();
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto& info = layout[i];
    if (detail::is_weight(info.kind)) {
      const auto& n = f.nodes()[info.node];
      const double fan_in =
          static_cast<double>(n.internal.size() + n.ground.size());
      double w = u(rng);
      while (w == 0.0) w = u(rng);
      p[i] = w / fan_in;
    } else if (info.kind == ParamKind::kFinalModular) {
      p[i] = 0.0;
    }
  }
  DsfModel out = f;
  out.set_parameters(p);
  return out;
}

// ---------------------------------------------------------------------------
// Gradient check

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // parameters at or near a kink, or capped
};

namespace detail {

// Segment signature of every node at input x.
inline std::vector<std::pair<int, bool>> segments(const DsfModel& f,
                                                  std::span<const double> x) {
  std::vector<double> pre;
  f.forward(x, &pre, nullptr, nullptr);
  std::vector<std::pair<int, bool>> out(pre.size());
  for (std::size_t v = 0; v < pre.size(); ++v) {
    out[v] = f.nodes()[v].unit.segment(pre[v]);
  }
  return out;
}

}  // namespace detail

// Central differences against gradient_weights; parameters whose
// perturbation crosses or touches a unit kink are skipped, and parameters
// within h of their lower bound use a forward difference. Relative error is
// |analytic - numeric| / max(1, |numeric|).
inline GradientCheck numeric_gradient_check(const DsfModel& f, const Subset& a,
                                            double h) {
  if (!(h > 0.0)) throw Error("numeric_gradient_check: h must be positive");
  GradientCheck out;
  const auto x = indicator_vector(a);
  const auto tape = gradient_weights(f, a);
  const auto p = f.parameters();
  const auto& layout = f.parameter_layout();
  const auto base_seg = detail::segments(f, x);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double analytic = tape.weights[i];
    if (!std::isfinite(analytic) || std::fabs(analytic) >= kDefaultSlopeCap) {
      ++out.skipped;
      continue;
    }
    const auto info = layout[i];
    const bool bounded = info.kind != ParamKind::kFinalModular;
    const bool forward_only = bounded && p[i] < h;
    if (forward_only && info.kind == ParamKind::kShift) {
      // d/db of base(x+b) - base(b) blows up at b = 0 when base'(0) does.
      const double d0 = f.nodes()[info.node].unit.right_derivative(0.0);
      if (!std::isfinite(d0) || d0 >= kDefaultSlopeCap) {
        ++out.skipped;
        continue;
      }
    }
    auto up = p, dn = p;
    up[i] += h;
    if (!forward_only) dn[i] -= h;
    DsfModel fu = f, fd = f;
    try {
      fu.set_parameters(up);
      fd.set_parameters(dn);
    } catch (const Error&) {
      ++out.skipped;
      continue;
    }
    bool kink = false;
    for (const auto& s : base_seg) kink = kink || s.second;
    if (!kink) {
      kink = detail::segments(fu, x) != base_seg ||
             detail::segments(fd, x) != base_seg;
    }
    if (kink) {
      ++out.skipped;
      continue;
    }
    const double numeric =
        (evaluate(fu, a) - evaluate(fd, a)) / (forward_only ? h : 2 * h);
    const double err =
        std::fabs(analytic - numeric) / std::max(1.0, std::fabs(numeric));
    out.max_relative_error = std::max(out.max_relative_error, err);
    ++out.checked;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Training

namespace detail {

class Stepper {
 public:
  Stepper(const DsfModel& f, const TrainConfig& cfg) : cfg_(cfg) {
    const auto& layout = f.parameter_layout();
    mask_.assign(layout.size(), 1.0);
    decay_.assign(layout.size(), 0.0);
    for (std::size_t i = 0; i < layout.size(); ++i) {
      const auto k = layout[i].kind;
      if ((k == ParamKind::kUnitParam || k == ParamKind::kShift) &&
          !cfg.learn_unit_params) {
        mask_[i] = 0.0;
      }
      if (k == ParamKind::kFinalModular && !cfg.learn_final_modular) {
        mask_[i] = 0.0;
      }
      if (is_weight(k) || k == ParamKind::kFinalModular) decay_[i] = 1.0;
    }
    m_.assign(layout.size(), 0.0);
    v_.assign(layout.size(), 0.0);
  }

  // One projected step on `f` with averaged gradient `g`.
  void step(DsfModel& f, const std::vector<double>& g, double rate) {
    auto p = f.parameters();
    ++t_;
    const double shrink = 1.0 / (1.0 + 2.0 * rate * cfg_.lambda);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (mask_[i] == 0.0) continue;
      double d = g[i];
      if (cfg_.step == StepRule::kAdam) {
        m_[i] = kB1 * m_[i] + (1 - kB1) * d;
        v_[i] = kB2 * v_[i] + (1 - kB2) * d * d;
        const double mh = m_[i] / (1 - std::pow(kB1, t_));
        const double vh = v_[i] / (1 - std::pow(kB2, t_));
        d = mh / (std::sqrt(vh) + 1e-8);
      }
      p[i] -= rate * d;
      // Proximal step for lambda * |w|^2, stable for any lambda.
      if (decay_[i] != 0.0) p[i] *= shrink;
    }
    f.set_parameters(project_vector(f, std::move(p)));
  }

 private:
  static constexpr double kB1 = 0.9, kB2 = 0.999;
  const TrainConfig& cfg_;
  std::vector<double> mask_, decay_, m_, v_;
  int t_ = 0;
};

inline void check_topology(const DsfModel& f, const Dataset& d) {
  if (!f.structurally_valid()) {
    throw Error("training: invalid topology: " + f.problems().front());
  }
  d.validate();
  if (!(d.ground == f.ground())) {
    throw Error("training: dataset and model ground sets differ");
  }
}

inline void check_config(const TrainConfig& c) {
  if (!(c.learning_rate > 0.0)) throw Error("training: rate must be > 0");
  if (c.epochs < 0) throw Error("training: epochs must be >= 0");
  if (!(c.lambda >= 0.0)) throw Error("training: lambda must be >= 0");
  if (!(c.decay >= 0.0)) throw Error("training: decay must be >= 0");
  if (c.batch_size == 0) throw Error("training: batch size must be >= 1");
}

inline double regression_loss(RegressionLoss k, double r) {
  return k == RegressionLoss::kSquared ? r * r : std::fabs(r);
}

inline double regression_slope(RegressionLoss k, double r) {
  if (k == RegressionLoss::kSquared) return 2.0 * r;
  return r > 0 ? 1.0 : (r < 0 ? -1.0 : 0.0);
}

inline double mean_regression_loss(const DsfModel& f, const Dataset& d,
                                   RegressionLoss k) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.sets.size(); ++i) {
    s += regression_loss(k, f.evaluate(d.sets[i]) - d.values[i]);
  }
  return s / static_cast<double>(d.sets.size());
}

template <typename SampleGrad>
TrainResult train_loop(DsfModel f, const Dataset& d, const TrainConfig& cfg,
                       SampleGrad&& sample_grad,
                       const std::function<double(const DsfModel&)>& full) {
  TrainResult res{f, {full(f)}};
  if (cfg.epochs == 0) return res;
  Stepper stepper(f, cfg);
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(d.sets.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t np = f.num_parameters();
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    const double rate = cfg.learning_rate / (1.0 + cfg.decay * epoch);
    for (std::size_t b = 0; b < order.size(); b += cfg.batch_size) {
      const std::size_t e = std::min(order.size(), b + cfg.batch_size);
      std::vector<double> g(np, 0.0);
      for (std::size_t j = b; j < e; ++j) sample_grad(f, order[j], g);
      const double scale = 1.0 / static_cast<double>(e - b);
      for (auto& x : g) x *= scale;
      stepper.step(f, g, rate);
    }
    res.loss_history.push_back(full(f));
  }
  res.model = std::move(f);
  return res;
}

}  // namespace detail

// Minimizes mean L(y_i, f(S_i)) + lambda |w|^2 over mini-batches.
inline TrainResult fit_regression(const DsfModel& topology, const Dataset& d,
                                  const TrainConfig& cfg) {
  detail::check_topology(topology, d);
  detail::check_config(cfg);
  if (!d.is_regression()) throw Error("fit_regression: dataset has no values");
  auto grad = [&](const DsfModel& f, std::size_t i, std::vector<double>& g) {
    const auto t = gradient_weights(f, d.sets[i]);
    const double slope =
        detail::regression_slope(cfg.regression_loss, t.value - d.values[i]);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += slope * t.weights[k];
  };
  return detail::train_loop(topology, d, cfg, grad, [&](const DsfModel& f) {
    return detail::mean_regression_loss(f, d, cfg.regression_loss);
  });
}

// Structured max-margin: per reference S, loss-augmented inference gives A,
// and the step follows the subgradient of L(f(A) + l_S(A) - f(S)).
inline TrainResult fit_max_margin(const DsfModel& topology, const Dataset& d,
                                  const TrainConfig& cfg) {
  detail::check_topology(topology, d);
  detail::check_config(cfg);
  std::vector<SetFunction> losses;
  for (const auto& s : d.sets) {
    SetFunction l = cfg.loss_for ? cfg.loss_for(s) : hamming_loss(s);
    if (!(l.ground() == d.ground)) {
      throw Error("fit_max_margin: loss ground set mismatch");
    }
    if (l(s) != 0.0) {
      throw Error(
          "fit_max_margin: margin loss must vanish at its reference "
          "set");
    }
    losses.push_back(std::move(l));
  }
  auto budget = [&](std::size_t i) {
    return cfg.budget ? cfg.budget : d.sets[i].count();
  };
  auto margin = [&](const DsfModel& f, std::size_t i, Subset* a_out) {
    const Subset a = loss_augmented_inference(
        f, losses[i], Constraint::cardinality(budget(i)));
    if (a_out) *a_out = a;
    return f.evaluate(a) + losses[i](a) - f.evaluate(d.sets[i]);
  };
  auto loss_of = [&](double m) {
    return cfg.margin_loss == MarginLoss::kHinge ? std::max(0.0, m)
                                                 : std::log1p(std::exp(m));
  };
  auto grad = [&](const DsfModel& f, std::size_t i, std::vector<double>& g) {
    Subset a(d.ground);
    const double m = margin(f, i, &a);
    double slope;
    if (cfg.margin_loss == MarginLoss::kHinge) {
      slope = m > 0.0 ? 1.0 : 0.0;
    } else {
      slope = 1.0 / (1.0 + std::exp(-m));
    }
    if (slope == 0.0) return;
    const auto ta = gradient_weights(f, a);
    const auto ts = gradient_weights(f, d.sets[i]);
    for (std::size_t k = 0; k < g.size(); ++k) {
      g[k] += slope * (ta.weights[k] - ts.weights[k]);
    }
  };
  return detail::train_loop(topology, d, cfg, grad, [&](const DsfModel& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.sets.size(); ++i) {
      s += loss_of(margin(f, i, nullptr));
    }
    return s / static_cast<double>(d.sets.size());
  });
}

// ---------------------------------------------------------------------------
// Frozen feature embeddings

// Feature nodes (one per feature, frozen, layer 1) feeding `upper`, whose
// parents must be nodes only. Upper layers are shifted up by one.
inline DsfModel make_embedded_model(const FeatureMatrix& f,
                                    std::vector<NodeSpec> upper,
                                    const std::string& root,
                                    const std::map<std::string, int>& layers) {
  f.validate();
  std::vector<NodeSpec> nodes;
  std::map<std::string, int> all_layers;
  std::set<std::string> frozen;
  for (std::size_t u = 0; u < f.features.size(); ++u) {
    NodeSpec s{f.features[u], f.units[u], {}};
    for (std::size_t v = 0; v < f.ground.size(); ++v) {
      if (f.scores[u][v] > 0.0) {
        s.parents.push_back(from_element(f.ground.label(v), f.scores[u][v]));
      }
    }
    if (s.parents.empty())
      s.parents.push_back(from_element(f.ground.label(0), 0));
    all_layers[s.id] = 1;
    frozen.insert(s.id);
    nodes.push_back(std::move(s));
  }
  for (auto& s : upper) {
    for (const auto& p : s.parents) {
      if (p.kind != ParentSpec::Kind::kNode) {
        throw Error("embedded model: upper node '" + s.id +
                    "' reads ground elements directly");
      }
    }
    auto it = layers.find(s.id);
    if (it != layers.end()) all_layers[s.id] = it->second + 1;
    nodes.push_back(std::move(s));
  }
  return DsfModel(f.ground, std::move(nodes), root, std::nullopt,
                  std::move(all_layers), std::move(frozen));
}

// Moves trained upper layers onto a new ground set's feature matrix. The
// frozen nodes of `trained` must match the new features by id; the final
// modular term is ground-specific and reset to zero.
inline DsfModel rebind_embedding(const DsfModel& trained,
                                 const FeatureMatrix& fresh) {
  std::set<std::string> want(fresh.features.begin(), fresh.features.end());
  if (want != trained.frozen()) {
    throw Error(
        "rebind_embedding: feature ids do not match the frozen "
        "embedding nodes");
  }
  std::vector<NodeSpec> upper;
  std::map<std::string, int> layers;
  for (const auto& s : trained.node_specs()) {
    if (trained.frozen().count(s.id)) continue;
    upper.push_back(s);
    auto it = trained.layer_of().find(s.id);
    if (it != trained.layer_of().end()) layers[s.id] = it->second - 1;
  }
  return make_embedded_model(fresh, std::move(upper), trained.root_name(),
                             layers);
}

}  // namespace dsfkit

#endif  // DSFKIT_LEARN_HPP_
