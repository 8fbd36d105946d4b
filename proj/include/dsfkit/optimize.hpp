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

// Greedy maximization, loss-augmented inference, the Lovász extension and
// the relaxed submodular Hamming distance.

#ifndef DSFKIT_OPTIMIZE_HPP_
#define DSFKIT_OPTIMIZE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "dsfkit/core.hpp"
#include "dsfkit/dsf.hpp"

namespace dsfkit {

struct Constraint {
  enum class Kind { kCardinality, kKnapsack };
  Kind kind = Kind::kCardinality;
  std::size_t k = 0;
  double budget = 0.0;
  std::vector<double> costs;

  static Constraint cardinality(std::size_t k) {
    Constraint c;
    c.k = k;
    return c;
  }

  static Constraint knapsack(double budget, std::vector<double> costs) {
    Constraint c;
    c.kind = Kind::kKnapsack;
    c.budget = budget;
    c.costs = std::move(costs);
    return c;
  }

  void validate(std::size_t n) const {
    if (kind == Kind::kCardinality) return;
    if (!(budget >= 0.0) || !std::isfinite(budget)) {
      throw Error("knapsack: budget must be a finite non-negative number");
    }
    if (costs.size() != n) {
      throw Error("knapsack: expected " + std::to_string(n) + " costs, got " +
                  std::to_string(costs.size()));
    }
    for (double c : costs) {
      if (!(c >= 0.0) || !std::isfinite(c)) {
        throw Error("knapsack: costs must be finite and non-negative");
      }
    }
  }
};

struct GreedyTrace {
  std::vector<std::size_t> picks;
  std::vector<double> gains;
  double value = 0.0;
  std::size_t evaluations = 0;
};

struct GreedyResult {
  Subset set;
  double value = 0.0;
  GreedyTrace trace;
};

// Two gains within this distance of the best count as tied; the lowest
// element id wins.
inline double greedy_tie_tolerance(double best) {
  return 1e-12 * std::max(1.0, std::fabs(best));
}

namespace detail {

// Selection key of an element given its marginal gain.
inline double greedy_key(double gain, const Constraint& c, std::size_t e,
                         bool ratio) {
  if (!ratio || c.kind != Constraint::Kind::kKnapsack) return gain;
  const double cost = c.costs[e];
  if (cost == 0.0) {
    return gain > 0.0 ? std::numeric_limits<double>::max() : gain;
  }
  return gain / cost;
}

inline bool fits(const Constraint& c, std::size_t e, double spent) {
  return c.kind != Constraint::Kind::kKnapsack ||
         spent + c.costs[e] <= c.budget * (1.0 + 1e-12);
}

inline bool knapsack_stop(const Constraint& c, double best_key) {
  return c.kind == Constraint::Kind::kKnapsack && !(best_key > 0.0);
}

inline GreedyResult naive_greedy(const SetFunction& f, const Constraint& c,
                                 bool ratio) {
  const GroundSet& g = f.ground();
  const std::size_t n = g.size();
  GreedyResult r{Subset(g), 0.0, {}};
  double current = f(r.set);
  r.trace.evaluations = 1;
  double spent = 0.0;
  const std::size_t limit =
      c.kind == Constraint::Kind::kCardinality ? std::min(c.k, n) : n;
  std::vector<double> gains(n), keys(n);
  while (r.trace.picks.size() < limit) {
    double best_key = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t e = 0; e < n; ++e) {
      if (r.set.contains(e) || !fits(c, e, spent)) continue;
      gains[e] = f(r.set.with(e)) - current;
      ++r.trace.evaluations;
      keys[e] = greedy_key(gains[e], c, e, ratio);
      best_key = std::max(best_key, keys[e]);
      any = true;
    }
    std::size_t pick = n;
    for (std::size_t e = 0; any && e < n; ++e) {
      if (r.set.contains(e) || !fits(c, e, spent)) continue;
      if (keys[e] >= best_key - greedy_tie_tolerance(best_key)) {
        pick = e;
        break;
      }
    }
    const double best_gain = pick == n ? 0.0 : gains[pick];
    if (pick == n || knapsack_stop(c, best_key)) break;
    r.set.insert(pick);
    current += best_gain;
    if (c.kind == Constraint::Kind::kKnapsack) spent += c.costs[pick];
    r.trace.picks.push_back(pick);
    r.trace.gains.push_back(best_gain);
  }
  r.value = f(r.set);
  r.trace.value = r.value;
  return r;
}

// Lazy greedy. Stale keys are upper bounds for submodular f; each round
// refreshes every element whose bound could still tie the best fresh key,
// so the choice (including tie-breaks) matches the naive scan.
inline GreedyResult lazy_greedy(const SetFunction& f, const Constraint& c,
                                bool ratio) {
  const GroundSet& g = f.ground();
  const std::size_t n = g.size();
  GreedyResult r{Subset(g), 0.0, {}};
  double current = f(r.set);
  r.trace.evaluations = 1;
  double spent = 0.0;
  struct Entry {
    double key;
    std::size_t e;
    bool operator<(const Entry& o) const {
      return key != o.key ? key < o.key : e > o.e;
    }
  };
  std::priority_queue<Entry> heap;
  std::vector<std::size_t> stamp(n, 0);
  std::vector<double> gain(n, 0.0);
  std::size_t round = 1;
  for (std::size_t e = 0; e < n; ++e) {
    gain[e] = f(Subset(g, {e})) - current;
    ++r.trace.evaluations;
    stamp[e] = round;
    heap.push({greedy_key(gain[e], c, e, ratio), e});
  }
  const std::size_t limit =
      c.kind == Constraint::Kind::kCardinality ? std::min(c.k, n) : n;
  while (r.trace.picks.size() < limit) {
    std::vector<Entry> fresh;
    double best = -std::numeric_limits<double>::infinity();
    while (!heap.empty()) {
      const Entry top = heap.top();
      if (!fresh.empty() && top.key < best - greedy_tie_tolerance(best)) break;
      heap.pop();
      if (!fits(c, top.e, spent)) continue;  // never fits again
      if (stamp[top.e] != round) {
        gain[top.e] = f(r.set.with(top.e)) - current;
        ++r.trace.evaluations;
        stamp[top.e] = round;
        heap.push({greedy_key(gain[top.e], c, top.e, ratio), top.e});
        continue;
      }
      fresh.push_back(top);
      best = std::max(best, top.key);
    }
    if (fresh.empty()) break;
    const double tol = greedy_tie_tolerance(best);
    std::size_t pick = n;
    for (const auto& en : fresh) {
      if (en.key >= best - tol && (pick == n || en.e < pick)) pick = en.e;
    }
    if (knapsack_stop(c, best)) break;
    for (const auto& en : fresh) {
      if (en.e != pick) heap.push(en);
    }
    r.set.insert(pick);
    current += gain[pick];
    if (c.kind == Constraint::Kind::kKnapsack) spent += c.costs[pick];
    r.trace.picks.push_back(pick);
    r.trace.gains.push_back(gain[pick]);
    ++round;
  }
  r.value = f(r.set);
  r.trace.value = r.value;
  return r;
}

inline GreedyResult run_greedy(const SetFunction& f, const Constraint& c,
                               bool lazy) {
  c.validate(f.ground().size());
  auto go = [&](bool ratio) {
    return lazy ? lazy_greedy(f, c, ratio) : naive_greedy(f, c, ratio);
  };
  if (c.kind == Constraint::Kind::kCardinality) return go(false);
  GreedyResult by_ratio = go(true);
  GreedyResult plain = go(false);
  const std::size_t evals =
      by_ratio.trace.evaluations + plain.trace.evaluations;
  GreedyResult& best = plain.value > by_ratio.value ? plain : by_ratio;
  best.trace.evaluations = evals;
  return best;
}

}  // namespace detail

// Lazy greedy; exact for modular f and within 1 - 1/e of optimum for
// monotone submodular f under a cardinality constraint.
inline GreedyResult greedy_max(const SetFunction& f, const Constraint& c) {
  return detail::run_greedy(f, c, true);
}

inline GreedyResult greedy_max(const DsfModel& f, const Constraint& c) {
  return greedy_max(as_set_function(f), c);
}

// Plain O(nk) scan with the same tie rule, the reference for lazy greedy.
inline GreedyResult greedy_max_naive(const SetFunction& f,
                                     const Constraint& c) {
  return detail::run_greedy(f, c, false);
}

// |A xor S|, the default margin loss.
inline SetFunction hamming_loss(const Subset& s) {
  return SetFunction::integer(
      s.ground(),
      [s](const Subset& a) {
        return static_cast<std::int64_t>((a ^ s).count());
      },
      "hamming");
}

inline Subset loss_augmented_inference(const DsfModel& f,
                                       const SetFunction& loss,
                                       const Constraint& c) {
  if (!(f.ground() == loss.ground())) {
    throw Error("loss_augmented_inference: ground set mismatch");
  }
  const DsfModel* fp = &f;
  SetFunction h(
      f.ground(),
      [fp, loss](const Subset& a) { return fp->evaluate(a) + loss(a); }, {},
      "loss_augmented");
  return greedy_max(h, c).set;
}

struct LovaszResult {
  double value = 0.0;
  std::vector<double> subgradient;
};

inline void require_unit_box(std::span<const double> x, std::size_t n,
                             const char* what) {
  if (x.size() != n) {
    throw Error(std::string(what) + ": expected " + std::to_string(n) +
                " coordinates, got " + std::to_string(x.size()));
  }
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(std::string(what) + ": coordinates must lie in [0, 1]");
    }
  }
}

// Sorted-chain evaluation; ties in x are broken by element id, which picks
// one extreme point of the subdifferential.
inline LovaszResult lovasz_extension(const SetFunction& f,
                                     std::span<const double> x) {
  const std::size_t n = f.ground().size();
  require_unit_box(x, n, "lovasz_extension");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
  LovaszResult r;
  r.subgradient.assign(n, 0.0);
  Subset chain(f.ground());
  double prev = f(chain);
  for (std::size_t e : order) {
    chain.insert(e);
    const double cur = f(chain);
    r.subgradient[e] = cur - prev;
    r.value += x[e] * (cur - prev);
    prev = cur;
  }
  return r;
}

inline LovaszResult lovasz_extension(const SetFunction& f,
                                     const std::vector<double>& x) {
  return lovasz_extension(f, std::span<const double>(x));
}

inline double relaxed_hamming_distance(const SetFunction& f,
                                       std::span<const double> z1,
                                       std::span<const double> z2) {
  const std::size_t n = f.ground().size();
  require_unit_box(z1, n, "relaxed_hamming_distance");
  require_unit_box(z2, n, "relaxed_hamming_distance");
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = std::clamp(z1[i] + z2[i] - 2.0 * z1[i] * z2[i], 0.0, 1.0);
  }
  return lovasz_extension(f, z).value;
}

inline double relaxed_hamming_distance(const SetFunction& f,
                                       const std::vector<double>& z1,
                                       const std::vector<double>& z2) {
  return relaxed_hamming_distance(f, std::span<const double>(z1),
                                  std::span<const double>(z2));
}

}  // namespace dsfkit

#endif  // DSFKIT_OPTIMIZE_HPP_
