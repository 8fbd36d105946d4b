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

// Brute-force verifiers and the structural analysis tools: property checks,
// surplus, (A,B,C)-structure and F_k membership, antitone checks, the
// two-layer SCMM classifier and the symmetrization operator.

#ifndef DSFKIT_ANALYSIS_HPP_
#define DSFKIT_ANALYSIS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dsfkit/concave.hpp"
#include "dsfkit/core.hpp"
#include "dsfkit/dsf.hpp"
#include "dsfkit/report.hpp"
#include "dsfkit/zoo.hpp"

namespace dsfkit {

enum Property : unsigned {
  kSubmodular = 1u << 0,
  kSupermodular = 1u << 1,
  kMonotone = 1u << 2,
  kNormalized = 1u << 3,
  kModular = 1u << 4,
};

inline unsigned parse_properties(const std::string& csv) {
  unsigned out = 0;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "submodular")
      out |= kSubmodular;
    else if (tok == "supermodular")
      out |= kSupermodular;
    else if (tok == "monotone")
      out |= kMonotone;
    else if (tok == "normalized")
      out |= kNormalized;
    else if (tok == "modular")
      out |= kModular;
    else if (!tok.empty())
      throw Error("unknown property '" + tok + "'");
  }
  return out;
}

struct VerifyOptions {
  double tolerance = 1e-9;
  bool allow_exact = true;  // use the exact evaluator when present
  unsigned threads = 0;     // 0: default_thread_count()
  std::size_t witness_cap = 32;
  std::size_t max_n = 16;
};

namespace detail {

inline unsigned resolve_threads(unsigned t) {
  return t == 0 ? default_thread_count() : t;
}

// Runs fn(begin, end, part) over [0, total) split into `threads` parts.
template <typename Fn>
void parallel_ranges(std::uint64_t total, unsigned threads, Fn&& fn) {
  threads = static_cast<unsigned>(
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, total)));
  if (threads == 1) {
    fn(std::uint64_t{0}, total, 0u);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (total + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t b = t * chunk, e = std::min(total, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e, t] { fn(b, e, t); });
  }
  for (auto& th : pool) th.join();
}

// Values of f on all 2^n subsets, indexed by bit mask.
template <typename T, typename Eval>
std::vector<T> tabulate(const GroundSet& g, Eval&& eval, unsigned threads) {
  const std::uint64_t total = std::uint64_t{1} << g.size();
  std::vector<T> table(total);
  parallel_ranges(total, threads,
                  [&](std::uint64_t b, std::uint64_t e, unsigned) {
                    for (std::uint64_t m = b; m < e; ++m) {
                      table[m] = eval(Subset::from_mask(g, m));
                    }
                  });
  return table;
}

template <typename T>
double as_double(const T& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return to_double(v);
  } else {
    return v;
  }
}

// Pairwise local check over a table: for every mask A and elements i < j
// outside A, compares f(A+i) + f(A+j) against f(A+i+j) + f(A). `same_block`
// restricts the pairs (used by the argument-wise lattice check).
template <typename T, typename Pair>
VerificationReport local_pair_check(const GroundSet& g,
                                    const std::vector<T>& table,
                                    const std::string& name, bool super,
                                    double tol, unsigned threads,
                                    std::size_t cap, Pair&& pair_ok) {
  const std::size_t n = g.size();
  const std::uint64_t total = table.size();
  std::vector<VerificationReport> parts(resolve_threads(threads),
                                        VerificationReport(name, cap));
  parallel_ranges(total, resolve_threads(threads),
                  [&](std::uint64_t b, std::uint64_t e, unsigned t) {
                    auto& r = parts[t];
                    for (std::uint64_t a = b; a < e; ++a) {
                      ++r.subsets_checked;
                      for (std::size_t i = 0; i < n; ++i) {
                        const std::uint64_t bi = std::uint64_t{1} << i;
                        if (a & bi) continue;
                        for (std::size_t j = i + 1; j < n; ++j) {
                          const std::uint64_t bj = std::uint64_t{1} << j;
                          if ((a & bj) || !pair_ok(i, j)) continue;
                          // gain of j at A versus at A + i.
                          const T lhs = table[a | bj] - table[a];
                          const T rhs = table[a | bi | bj] - table[a | bi];
                          const double diff =
                              as_double(T(super ? lhs - rhs : rhs - lhs));
                          if (diff > tol) {
                            if (r.witnesses.size() >= cap) {
                              // Later orders in this chunk would be trimmed
                              // anyway.
                              r.pass = false;
                              r.max_violation = std::max(r.max_violation, diff);
                              continue;
                            }
                            Witness w;
                            w.sets = {Subset::from_mask(g, a),
                                      Subset::from_mask(g, a | bi)};
                            w.elements = {j};
                            w.violation = diff;
                            w.order = (a * n + i) * n + j;
                            r.add(std::move(w));
                          }
                        }
                      }
                    }
                  });
  VerificationReport out(name, cap);
  for (const auto& p : parts) out.merge(p);
  return out;
}

template <typename T>
VerificationReport monotone_check(const GroundSet& g,
                                  const std::vector<T>& table, double tol,
                                  std::size_t cap) {
  VerificationReport r("monotone", cap);
  const std::size_t n = g.size();
  for (std::uint64_t a = 0; a < table.size(); ++a) {
    ++r.subsets_checked;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t bi = std::uint64_t{1} << i;
      if (a & bi) continue;
      const double drop = as_double(T(table[a] - table[a | bi]));
      if (drop > tol) {
        Witness w;
        w.sets = {Subset::from_mask(g, a)};
        w.elements = {i};
        w.violation = drop;
        w.order = a * n + i;
        r.add(std::move(w));
      }
    }
  }
  return r;
}

template <typename T>
VerificationReport verify_table(const GroundSet& g, const std::vector<T>& table,
                                unsigned props, double tol,
                                const VerifyOptions& o) {
  std::vector<VerificationReport> parts;
  auto all_pairs = [](std::size_t, std::size_t) { return true; };
  if (props & kNormalized) {
    VerificationReport r("normalized", o.witness_cap);
    r.subsets_checked = 1;
    const double v = std::fabs(as_double(table[0]));
    if (v > tol) {
      Witness w;
      w.sets = {Subset(g)};
      w.violation = v;
      r.add(std::move(w));
    }
    parts.push_back(std::move(r));
  }
  if (props & kMonotone) {
    parts.push_back(monotone_check(g, table, tol, o.witness_cap));
  }
  if (props & (kSubmodular | kModular)) {
    parts.push_back(local_pair_check(g, table, "submodular", false, tol,
                                     o.threads, o.witness_cap, all_pairs));
  }
  if (props & (kSupermodular | kModular)) {
    parts.push_back(local_pair_check(g, table, "supermodular", true, tol,
                                     o.threads, o.witness_cap, all_pairs));
  }
  if (parts.size() == 1) return parts.front();
  std::string name;
  for (const auto& p : parts) name += (name.empty() ? "" : ",") + p.property;
  auto out = combine_reports(name, parts);
  out.subsets_checked = table.size();
  return out;
}

}  // namespace detail

// Exhaustive check of the requested properties over all 2^n subsets.
// Diminishing returns is tested in the local form f(j|A) >= f(j|A+i), which
// needs O(2^n n^2) evaluations of a precomputed table. Handles with an exact
// evaluator are checked in rational arithmetic with zero tolerance.
inline VerificationReport verify_properties(const SetFunction& f,
                                            unsigned props,
                                            const VerifyOptions& o = {}) {
  const GroundSet& g = f.ground();
  if (g.size() > o.max_n) {
    throw Error("verify_properties: ground set of " + std::to_string(g.size()) +
                " exceeds the brute-force cap of " + std::to_string(o.max_n));
  }
  const unsigned threads = detail::resolve_threads(o.threads);
  if (o.allow_exact && f.has_exact()) {
    auto table = detail::tabulate<Rational>(
        g, [&](const Subset& s) { return f.exact(s); }, threads);
    return detail::verify_table(g, table, props, 0.0, o);
  }
  auto table = detail::tabulate<double>(
      g, [&](const Subset& s) { return f(s); }, threads);
  return detail::verify_table(g, table, props, o.tolerance, o);
}

inline VerificationReport verify_properties(const SetFunction& f,
                                            const std::string& props,
                                            const VerifyOptions& o = {}) {
  return verify_properties(f, parse_properties(props), o);
}

// ---------------------------------------------------------------------------
// Surplus

inline double surplus(const SetFunction& f, const Subset& a) {
  double s = -f(a);
  a.for_each([&](std::size_t e) { s += f(Subset(a.ground(), {e})); });
  return s;
}

inline Rational surplus_exact(const SetFunction& f, const Subset& a) {
  Rational s = -f.exact(a);
  a.for_each([&](std::size_t e) { s += f.exact(Subset(a.ground(), {e})); });
  return s;
}

inline double grouped_surplus(const SetFunction& f,
                              const std::vector<Subset>& parts) {
  if (parts.empty()) return 0.0;
  Subset all(parts.front().ground());
  double s = 0.0;
  for (const auto& p : parts) {
    if (!p.disjoint(all)) throw Error("grouped_surplus: parts overlap");
    all = all | p;
    s += f(p);
  }
  return s - f(all);
}

inline bool is_modular_at(const SetFunction& f, const Subset& b,
                          double tol = 1e-9) {
  if (f.has_exact()) return surplus_exact(f, b) == Rational(0);
  return std::fabs(surplus(f, b)) <= tol;
}

// ---------------------------------------------------------------------------
// (A,B,C)-functions and F_k

enum class AbcResult { kNone, kAbc, kStrongAbc };

inline const char* abc_name(AbcResult r) {
  switch (r) {
    case AbcResult::kNone:
      return "none";
    case AbcResult::kAbc:
      return "abc";
    case AbcResult::kStrongAbc:
      return "strong_abc";
  }
  return "?";
}

inline AbcResult check_abc_function(const SetFunction& f, const Subset& a,
                                    const Subset& b, const Subset& c,
                                    double tol = 1e-9) {
  if (a.empty() || b.empty() || c.empty()) {
    throw Error("check_abc_function: parts must be non-empty");
  }
  if (!a.disjoint(b) || !b.disjoint(c) || !a.disjoint(c)) {
    throw Error("check_abc_function: parts must be disjoint");
  }
  if (f.has_exact()) {
    const Rational fa = f.exact(a), fb = f.exact(b), fc = f.exact(c);
    const Rational abc = f.exact(a | b | c);
    const std::array<Rational, 6> rest = {f.exact(a | b), f.exact(b | c),
                                          f.exact(c | a), fa + fb,
                                          fb + fc,        fc + fa};
    for (const auto& v : rest) {
      if (v != abc) return AbcResult::kNone;
    }
    if (!(fa == fb && fb == fc)) {
      throw Error("check_abc_function: inconsistent singleton-part values");
    }
    return abc > Rational(0) ? AbcResult::kStrongAbc : AbcResult::kAbc;
  }
  const double fa = f(a), fb = f(b), fc = f(c), abc = f(a | b | c);
  const std::array<double, 6> rest = {f(a | b), f(b | c), f(c | a),
                                      fa + fb,  fb + fc,  fc + fa};
  for (double v : rest) {
    if (std::fabs(v - abc) > tol) return AbcResult::kNone;
  }
  if (std::fabs(fa - fb) > 2 * tol || std::fabs(fb - fc) > 2 * tol) {
    throw Error("check_abc_function: inconsistent part values");
  }
  return abc > tol ? AbcResult::kStrongAbc : AbcResult::kAbc;
}

// Block of ids with base-3 prefix `prefix` (length j) among 3^k ids.
inline Subset fk_block(const GroundSet& g, int k,
                       const std::vector<int>& prefix) {
  std::size_t span = 1;
  for (int i = 0; i < k - static_cast<int>(prefix.size()); ++i) span *= 3;
  std::size_t start = 0;
  for (int d : prefix) start = start * 3 + d;
  start *= span;
  Subset s(g);
  for (std::size_t i = start; i < start + span; ++i) s.insert(i);
  return s;
}

inline VerificationReport check_fk_membership(const SetFunction& f, int k,
                                              int max_k = 2) {
  if (k < 1 || k > max_k) {
    throw Error("check_fk_membership: k must be in [1, " +
                std::to_string(max_k) + "]");
  }
  std::size_t n = 1;
  for (int i = 0; i < k; ++i) n *= 3;
  const GroundSet& g = f.ground();
  if (g.size() != n) {
    throw Error("check_fk_membership: ground set must have 3^k = " +
                std::to_string(n) + " elements");
  }
  VerificationReport r("F_" + std::to_string(k));
  const Subset full = Subset::full(g);
  const double fv = f.has_exact() ? to_double(f.exact(full)) : f(full);
  if (!(fv > 0.0)) {
    Witness w;
    w.sets = {full};
    w.detail = "f(V) is not positive";
    w.violation = -fv;
    r.add(std::move(w));
  }
  std::uint64_t order = 1;
  std::vector<std::vector<int>> frontier = {{}};
  for (int j = 0; j < k; ++j) {
    std::vector<std::vector<int>> next;
    for (const auto& pre : frontier) {
      std::array<Subset, 3> parts;
      for (int d = 0; d < 3; ++d) {
        auto p = pre;
        p.push_back(d);
        parts[d] = fk_block(g, k, p);
        next.push_back(p);
      }
      ++r.subsets_checked;
      const AbcResult res = check_abc_function(f, parts[0], parts[1], parts[2]);
      if (res != AbcResult::kStrongAbc) {
        Witness w;
        w.sets = {parts[0], parts[1], parts[2]};
        w.detail = std::string("triple is ") + abc_name(res);
        w.violation = 1.0;
        w.order = order;
        r.add(std::move(w));
      }
      ++order;
    }
    frontier = std::move(next);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Antitone checks

struct AntitoneOptions {
  double scale = 2.0;  // coordinates drawn from (0, scale]
  double tolerance = 1e-9;
  bool all_pairs = true;  // every i < j per sample, else one random pair
};

// Cross differences psi(x+e_i)+psi(x+e_j) >= psi(x+e_i+e_j)+psi(x) and
// componentwise antitonicity of gradient_input along sampled x <= y.
inline VerificationReport antitone_cross_differences(
    const DsfModel& f, int samples, double epsilon, std::uint64_t seed,
    const AntitoneOptions& o = {}) {
  VerificationReport r("antitone");
  const std::size_t n = f.ground().size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, o.scale);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> x(n), y(n), t(n);
  std::uint64_t order = 0;
  auto psi = [&](const std::vector<double>& v) {
    return f.concave_extension(v);
  };
  auto fmt = [](const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(6);
    os << "x=(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
  };
  for (int s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < n; ++i) x[i] = o.scale - coord(rng);
    const double base = psi(x);
    auto check_pair = [&](std::size_t i, std::size_t j) {
      t = x;
      t[i] += epsilon;
      const double fi = psi(t);
      t[j] += epsilon;
      const double fij = psi(t);
      t[i] -= epsilon;
      const double fj = psi(t);
      const double viol = (fij + base) - (fi + fj);
      ++r.subsets_checked;
      if (viol > o.tolerance) {
        Witness w;
        w.detail = "cross difference at " + fmt(x) + " i=" + std::to_string(i) +
                   " j=" + std::to_string(j);
        w.violation = viol;
        w.order = order;
        r.add(std::move(w));
      }
      ++order;
    };
    if (n >= 2) {
      if (o.all_pairs) {
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i + 1; j < n; ++j) check_pair(i, j);
        }
      } else {
        std::size_t i = pick(rng), j = pick(rng);
        while (j == i) j = pick(rng);
        check_pair(i, j);
      }
    }
    // Monotone pair x <= y: gradients must not increase.
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + coord(rng);
    const auto gx = gradient_input(f, x);
    const auto gy = gradient_input(f, y);
    if (gx.capped || gy.capped) {
      ++r.skipped;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double viol = gy.values[i] - gx.values[i];
      ++r.subsets_checked;
      if (viol > o.tolerance * std::max(1.0, std::fabs(gx.values[i]))) {
        Witness w;
        w.detail = "gradient increases along x<=y at " + fmt(x) +
                   " coordinate " + std::to_string(i);
        w.violation = viol;
        w.order = order;
        r.add(std::move(w));
      }
      ++order;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Two-layer SCMM classifier: g(A) = phi(min(|A cap abc|,2) + min(|A cap
// def|,2))

struct ExpansionTerm {
  double weight = 0.0;
  std::array<double, 6> modular{};
  double cap = 1.0;
  std::string label;
};

struct ScmmClassification {
  bool is_scmm = false;
  double c1 = 0.0;  // -phi(1) + 3.5 phi(2) - 4 phi(3) + 1.5 phi(4)
  double c2 = 0.0;  // 2 phi(1) + phi(2) - 4 phi(3) + 2 phi(4)
  std::string violated;
  std::vector<ExpansionTerm> expansion;
};

inline ScmmClassification classify_two_layer_scmm(const ConcaveUnit& phi) {
  if (phi.curvature() == Curvature::kConvex) {
    throw Error("classify_two_layer_scmm: unit must be concave");
  }
  const double p1 = phi.value(1), p2 = phi.value(2), p3 = phi.value(3),
               p4 = phi.value(4);
  ScmmClassification out;
  out.c1 = -p1 + 3.5 * p2 - 4 * p3 + 1.5 * p4;
  out.c2 = 2 * p1 + p2 - 4 * p3 + 2 * p4;
  const double tiny = 1e-12 * std::max(1.0, std::fabs(p4));
  if (out.c1 < -tiny) {
    out.violated = "-phi(1)+3.5phi(2)-4phi(3)+1.5phi(4) >= 0";
  } else if (out.c2 < -tiny) {
    out.violated = "2phi(1)+phi(2)-4phi(3)+2phi(4) >= 0";
  }
  out.is_scmm = out.violated.empty();
  if (!out.is_scmm) return out;
  const double c1 = std::max(0.0, out.c1), c2 = std::max(0.0, out.c2);
  const double d = std::max(0.0, -p2 + 2 * p3 - p4);
  const double e = std::max(0.0, p4 - p3);
  using M = std::array<double, 6>;
  const M ones = {1, 1, 1, 1, 1, 1}, abc = {1, 1, 1, 0, 0, 0},
          def = {0, 0, 0, 1, 1, 1};
  out.expansion = {
      {c2, ones, 1, "min(|A|,1)"},       {c1, ones, 2, "min(|A|,2)"},
      {d, abc, 1, "min(|A cap abc|,1)"}, {d, def, 1, "min(|A cap def|,1)"},
      {e, abc, 2, "min(|A cap abc|,2)"}, {e, def, 2, "min(|A cap def|,2)"},
  };
  const std::array<M, 6> skew = {
      M{1, 1, 0, .5, .5, .5}, M{0, 1, 1, .5, .5, .5}, M{1, 0, 1, .5, .5, .5},
      M{.5, .5, .5, 1, 1, 0}, M{.5, .5, .5, 1, 0, 1}, M{.5, .5, .5, 0, 1, 1}};
  for (const auto& m : skew) {
    std::ostringstream os;
    os << "min((";
    for (std::size_t i = 0; i < 6; ++i) os << (i ? "," : "") << m[i];
    os << ").1_A,1)";
    out.expansion.push_back({d, m, 1, os.str()});
  }
  return out;
}

// The expansion as an SCMM model over the lettered ground set a..f.
inline DsfModel expansion_model(const ScmmClassification& c) {
  if (!c.is_scmm) {
    throw Error("expand_two_layer_scmm: unit fails " + c.violated);
  }
  const GroundSet g = GroundSet::lettered(6);
  std::vector<ScmmTerm> terms;
  for (std::size_t i = 0; i < c.expansion.size(); ++i) {
    const auto& t = c.expansion[i];
    terms.push_back(
        {units::truncate(t.cap),
         ModularFunction(g, {t.modular.begin(), t.modular.end()}, true),
         t.weight, "x" + std::to_string(i)});
  }
  return make_scmm(terms, ModularFunction::zero(g));
}

inline SetFunction expand_two_layer_scmm(const ConcaveUnit& phi) {
  return as_set_function(expansion_model(classify_two_layer_scmm(phi)),
                         "scmm_expansion");
}

// ---------------------------------------------------------------------------
// Symmetrization over {a,b,c} x {d,e,f} with block swap.

struct FiveVector {
  // Eh(1,0), Eh(2,0), Eh(1,1), Eh(2,1), Eh(2,2).
  std::array<double, 5> values{};
  std::array<Rational, 5> exact{};
  bool is_exact = false;

  std::string to_string() const {
    std::ostringstream os;
    os.precision(12);
    os << "(";
    for (std::size_t i = 0; i < 5; ++i) {
      if (i) os << ", ";
      if (is_exact) {
        os << exact[i].numerator();
        if (exact[i].denominator() != 1) os << "/" << exact[i].denominator();
      } else {
        os << values[i];
      }
    }
    os << ")";
    return os.str();
  }
};

namespace detail {
// All 72 maps of the symmetry group acting on ids 0..5.
inline const std::vector<std::array<std::size_t, 6>>& symmetry_group() {
  static const auto group = [] {
    std::vector<std::array<std::size_t, 6>> out;
    std::array<std::size_t, 3> p = {0, 1, 2};
    std::vector<std::array<std::size_t, 3>> perms;
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    for (int swap = 0; swap < 2; ++swap) {
      for (const auto& s : perms) {
        for (const auto& t : perms) {
          std::array<std::size_t, 6> m{};
          for (std::size_t i = 0; i < 3; ++i) {
            m[i] = swap ? 3 + s[i] : s[i];
            m[3 + i] = swap ? t[i] : 3 + t[i];
          }
          out.push_back(m);
        }
      }
    }
    return out;
  }();
  return group;
}

inline Subset apply_map(const Subset& a, const std::array<std::size_t, 6>& m) {
  Subset out(a.ground());
  a.for_each([&](std::size_t e) { out.insert(m[e]); });
  return out;
}

inline void require_six(const SetFunction& h) {
  if (h.ground().size() != 6) {
    throw Error("symmetrize: ground set must have 6 elements (a..f)");
  }
}
}  // namespace detail

// Eh as a handle; exact when h is.
inline SetFunction symmetrize(const SetFunction& h) {
  detail::require_six(h);
  SetFunction::ExactEvaluator exact;
  if (h.has_exact()) {
    exact = [h](const Subset& a) {
      Rational sum(0);
      for (const auto& m : detail::symmetry_group()) {
        sum += h.exact(detail::apply_map(a, m));
      }
      return sum / Rational(72);
    };
  }
  auto real = [h](const Subset& a) {
    double sum = 0.0;
    for (const auto& m : detail::symmetry_group()) {
      sum += h(detail::apply_map(a, m));
    }
    return sum / 72.0;
  };
  if (exact) {
    return SetFunction(h.ground(), nullptr, exact, "E(" + h.name() + ")");
  }
  return SetFunction(h.ground(), real, {}, "E(" + h.name() + ")");
}

inline FiveVector symmetrize_five_vector(const SetFunction& h) {
  detail::require_six(h);
  const SetFunction eh = symmetrize(h);
  const GroundSet& g = h.ground();
  const std::array<Subset, 5> reps = {Subset(g, {0}), Subset(g, {0, 1}),
                                      Subset(g, {0, 3}), Subset(g, {0, 1, 3}),
                                      Subset(g, {0, 1, 3, 4})};
  FiveVector out;
  out.is_exact = eh.has_exact();
  for (std::size_t i = 0; i < 5; ++i) {
    if (out.is_exact) {
      out.exact[i] = eh.exact(reps[i]);
      out.values[i] = to_double(out.exact[i]);
    } else {
      out.values[i] = eh(reps[i]);
    }
  }
  return out;
}

// min(<w, 1_A>, cap) with rational weights, exact.
inline SetFunction modular_truncation(const GroundSet& g,
                                      std::vector<Rational> w, Rational cap,
                                      std::string name = {}) {
  if (w.size() != g.size()) throw Error("modular_truncation: bad length");
  return SetFunction(
      g, nullptr,
      [w, cap](const Subset& a) {
        Rational s(0);
        a.for_each([&](std::size_t e) { s += w[e]; });
        return std::min(s, cap);
      },
      std::move(name));
}

// The five symmetric reference functions of the six-element example.
inline std::vector<SetFunction> five_vector_examples() {
  const GroundSet g = GroundSet::lettered(6);
  auto count = [](const Subset& a, std::size_t lo, std::size_t hi) {
    std::int64_t c = 0;
    a.for_each([&](std::size_t e) { c += (e >= lo && e < hi); });
    return c;
  };
  auto f1 = SetFunction::integer(
      g, [](const Subset& a) { return std::min<std::int64_t>(a.count(), 1); },
      "f1");
  auto f2 = SetFunction::integer(
      g, [](const Subset& a) { return std::min<std::int64_t>(a.count(), 2); },
      "f2");
  auto f3 = SetFunction::integer(
      g,
      [count](const Subset& a) {
        return std::min<std::int64_t>(count(a, 0, 3), 1) +
               std::min<std::int64_t>(count(a, 3, 6), 1);
      },
      "f3");
  auto f4 = SetFunction::integer(
      g,
      [count](const Subset& a) {
        return std::min<std::int64_t>(count(a, 0, 3), 2) +
               std::min<std::int64_t>(count(a, 3, 6), 2);
      },
      "f4");
  const Rational h(1, 2);
  auto f5 = symmetrize(modular_truncation(
      g, {Rational(1), Rational(1), Rational(0), h, h, h}, Rational(1), "h5"));
  return {f1, f2, f3, f4, f5};
}

// ---------------------------------------------------------------------------
// k-argument lattice submodularity. A tuple (A_1..A_k) is a subset of the
// disjoint union of the argument domains, and componentwise union and
// intersection are union and intersection there, so the check reduces to
// a pairwise table check over the combined domain.

enum class LatticeMode {
  kFull,          // all pairs, across arguments too
  kArgumentwise,  // pairs within one argument, others fixed
};

inline VerificationReport verify_lattice_submodular(
    const std::vector<GroundSet>& domains,
    const std::function<double(const std::vector<Subset>&)>& f,
    LatticeMode mode = LatticeMode::kFull, const VerifyOptions& o = {}) {
  std::vector<std::string> labels;
  std::vector<std::size_t> block_of, offset;
  for (std::size_t j = 0; j < domains.size(); ++j) {
    offset.push_back(labels.size());
    for (const auto& l : domains[j].labels()) {
      labels.push_back(std::to_string(j + 1) + ":" + l);
      block_of.push_back(j);
    }
  }
  if (labels.size() > o.max_n) {
    throw Error("verify_lattice_submodular: combined domain of " +
                std::to_string(labels.size()) + " exceeds the cap of " +
                std::to_string(o.max_n));
  }
  const GroundSet combined(labels);
  auto split = [&](const Subset& s) {
    std::vector<Subset> args;
    for (std::size_t j = 0; j < domains.size(); ++j) {
      Subset a(domains[j]);
      for (std::size_t i = 0; i < domains[j].size(); ++i) {
        if (s.contains(offset[j] + i)) a.insert(i);
      }
      args.push_back(a);
    }
    return args;
  };
  const unsigned threads = detail::resolve_threads(o.threads);
  auto table = detail::tabulate<double>(
      combined, [&](const Subset& s) { return f(split(s)); }, threads);
  auto report = detail::local_pair_check(
      combined, table,
      mode == LatticeMode::kFull ? "k_multi_submodular"
                                 : "argumentwise_submodular",
      false, o.tolerance, threads, o.witness_cap,
      [&](std::size_t i, std::size_t j) {
        return mode == LatticeMode::kFull || block_of[i] == block_of[j];
      });
  return report;
}

inline VerificationReport verify_k_multi_submodular(
    const DsfModel& f, const MultivariateAssignment& asg,
    LatticeMode mode = LatticeMode::kFull, const VerifyOptions& o = {}) {
  std::vector<GroundSet> domains;
  for (int s : asg.sigma) domains.push_back(f.layer(s));
  return verify_lattice_submodular(
      domains,
      [&](const std::vector<Subset>& args) {
        return f.evaluate_multivariate(asg, args);
      },
      mode, o);
}

}  // namespace dsfkit

#endif  // DSFKIT_ANALYSIS_HPP_
