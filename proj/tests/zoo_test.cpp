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

#include "dsfkit/zoo.hpp"

#include <cmath>
#include <random>
#include <set>

#include "dsfkit/analysis.hpp"
#include "gtest/gtest.h"

namespace dsfkit {
namespace {

std::size_t CountIn(const Subset& a, std::size_t lo, std::size_t hi) {
  std::size_t c = 0;
  a.for_each([&](std::size_t e) { c += (e >= lo && e < hi); });
  return c;
}

TEST(ScmmTest, IdentityTermIsModular) {
  const auto g = GroundSet::lettered(4);
  ModularFunction m(g, {1.0, 2.0, 0.5, 3.0}, true);
  auto f =
      make_scmm({{units::identity(), m, 1.0, ""}}, ModularFunction::zero(g));
  for (std::uint64_t s = 0; s < 16; ++s) {
    const auto a = Subset::from_mask(g, s);
    EXPECT_DOUBLE_EQ(evaluate(f, a), m(a));
  }
}

TEST(ScmmTest, WorkedExampleMatchesTruncationDsf) {
  const auto g = GroundSet::lettered(6);
  const auto abc = presets::labels(g, {"a", "b", "c"});
  const auto def = presets::labels(g, {"d", "e", "f"});
  // phi(x) = min(x, 0.5 + 0.5x), plus min(|A|, 0.5) - 0.5|A|.
  const auto phi = units::piecewise_linear({1.0, 0.5}, {1.0});
  auto ind = [&](const Subset& s) {
    std::vector<double> w(6, 0.0);
    s.for_each([&](std::size_t e) { w[e] = 1.0; });
    return ModularFunction(g, w, true);
  };
  auto scmm =
      make_scmm({{phi, ind(abc), 1.0, "p1"},
                 {phi, ind(def), 1.0, "p2"},
                 {units::truncate(0.5), ind(Subset::full(g)), 1.0, "t"}},
                ModularFunction(g, std::vector<double>(6, -0.5)));
  for (std::uint64_t s = 0; s < 64; ++s) {
    const auto a = Subset::from_mask(g, s);
    const double direct = std::min(std::min<double>(CountIn(a, 0, 3), 1) +
                                       std::min<double>(CountIn(a, 3, 6), 1),
                                   1.5);
    EXPECT_NEAR(evaluate(scmm, a), direct, 1e-12) << a.to_string();
  }
}

TEST(ScmmTest, RejectsNegativeWeight) {
  const auto g = GroundSet::lettered(2);
  ModularFunction m(g, {1.0, 1.0}, true);
  EXPECT_THROW(
      make_scmm({{units::sqrt(), m, -1.0, ""}}, ModularFunction::zero(g)),
      Error);
  EXPECT_THROW(ModularFunction(g, {-1.0, 1.0}, true), Error);
}

TEST(FeatureBasedTest, ShapeFeatures) {
  auto f = presets::shape_features();
  const auto& g = f.ground();
  EXPECT_NEAR(evaluate(f, Subset::from_labels(g, {"b"})),
              std::sqrt(8.0) + std::sqrt(1.0), 1e-12);
}

TEST(FeatureBasedTest, IdentityCollapsesToModular) {
  const auto g = GroundSet::lettered(3);
  FeatureMatrix fm{g,
                   {"x", "y"},
                   {{1, 2, 3}, {0, 1, 4}},
                   {2.0, 0.5},
                   {units::identity(), units::identity()}};
  auto f = make_feature_based(fm, ModularFunction::zero(g));
  const std::vector<double> expect = {2.0, 4.5, 8.0};
  for (std::uint64_t s = 0; s < 8; ++s) {
    const auto a = Subset::from_mask(g, s);
    double want = 0.0;
    a.for_each([&](std::size_t e) { want += expect[e]; });
    EXPECT_NEAR(evaluate(f, a), want, 1e-12);
  }
  FeatureMatrix empty{g, {}, {}, {}, {}};
  ModularFunction m(g, {1.0, -1.0, 2.0});
  auto h = make_feature_based(empty, m);
  EXPECT_DOUBLE_EQ(evaluate(h, Subset::full(g)), 2.0);
}

TEST(FeatureBasedTest, RejectsNegativeScore) {
  const auto g = GroundSet::lettered(2);
  FeatureMatrix fm{g, {"x"}, {{1.0, -1.0}}, {1.0}, {units::sqrt()}};
  EXPECT_THROW(make_feature_based(fm, ModularFunction::zero(g)), Error);
}

TEST(PartitionRankTest, Examples) {
  const auto g = GroundSet::lettered(4);
  auto r = make_partition_rank({{Subset::full(g)}, {2}});
  auto free = make_partition_rank(
      {{presets::labels(g, {"a", "b"}), presets::labels(g, {"c", "d"})},
       {2, 5}});
  auto zero = make_partition_rank(
      {{presets::labels(g, {"a", "b"}), presets::labels(g, {"c", "d"})},
       {0, 0}});
  for (std::uint64_t s = 0; s < 16; ++s) {
    const auto a = Subset::from_mask(g, s);
    const auto n = static_cast<std::int64_t>(a.count());
    EXPECT_EQ(r.exact(a), Rational(std::min<std::int64_t>(n, 2)));
    EXPECT_EQ(free.exact(a), Rational(n));
    EXPECT_EQ(zero(a), 0.0);
  }
  EXPECT_THROW(make_partition_rank({{presets::labels(g, {"a", "b"})}, {1}}),
               Error);
  EXPECT_THROW(make_partition_rank({{presets::labels(g, {"a", "b", "c"}),
                                     presets::labels(g, {"c", "d"})},
                                    {1, 1}}),
               Error);
}

TEST(LaminarRankTest, Laminar6) {
  auto l = presets::laminar6();
  const auto& g = l.model.ground();
  const auto s = presets::labels(g, {"a", "b", "d", "e"});
  EXPECT_EQ(evaluate(l.model, s), 3.0);
  EXPECT_EQ(l.oracle.exact(s), Rational(3));
  EXPECT_DOUBLE_EQ(surplus(l.oracle, s), 1.0);
}

TEST(LaminarRankTest, DepthOneTreeIsPartitionRank) {
  const auto g = GroundSet::lettered(5);
  const auto b1 = presets::labels(g, {"a", "b"});
  const auto b2 = presets::labels(g, {"c", "d", "e"});
  LaminarTree t{g, {{Subset::full(g), 5, {1, 2}}, {b1, 1, {}}, {b2, 2, {}}}, 0};
  auto l = make_laminar_rank(t);
  auto p = make_partition_rank({{b1, b2}, {1, 2}});
  for (std::uint64_t s = 0; s < 32; ++s) {
    const auto a = Subset::from_mask(g, s);
    EXPECT_EQ(evaluate(l.model, a), p(a));
    EXPECT_EQ(l.oracle.exact(a), p.exact(a));
  }
}

TEST(LaminarRankTest, RejectsNonLaminar) {
  const auto g = GroundSet::lettered(4);
  LaminarTree t{g,
                {{Subset::full(g), 2, {1, 2}},
                 {presets::labels(g, {"a", "b"}), 1, {}},
                 {presets::labels(g, {"b", "c"}), 1, {}}},
                0};
  EXPECT_THROW(make_laminar_rank(t), Error);
  LaminarTree partial{g, {{presets::labels(g, {"a", "b"}), 1, {}}}, 0};
  EXPECT_THROW(make_laminar_rank(partial), Error);
}

TEST(LaminarRankTest, RandomTreesModelAgreesWithOracle) {
  std::mt19937_64 rng(17);
  for (std::size_t n : {6u, 8u, 10u}) {
    const auto g = GroundSet::lettered(n);
    for (int rep = 0; rep < 4; ++rep) {
      auto t = random_laminar_tree(g, rng);
      auto l = make_laminar_rank(t);
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
        const auto a = Subset::from_mask(g, s);
        ASSERT_EQ(Rational(static_cast<std::int64_t>(evaluate(l.model, a))),
                  l.oracle.exact(a));
      }
    }
  }
}

TEST(TruncatedRankTest, Examples) {
  const auto g = GroundSet::lettered(6);
  const auto r = presets::labels(g, {"a", "b", "c", "d"});
  auto f = make_truncated_partition_rank(r, 2, 4);
  EXPECT_EQ(f(r), 2.0);
  // Same size, different set: strictly above a.
  EXPECT_GT(f(presets::labels(g, {"a", "b", "c", "e"})), 2.0);
  auto all = make_truncated_partition_rank(Subset::full(g), 3, 4);
  for (std::uint64_t s = 0; s < 64; ++s) {
    const auto a = Subset::from_mask(g, s);
    EXPECT_EQ(all(a), std::min<double>(a.count(), 3));
  }
  EXPECT_THROW(make_truncated_partition_rank(r, 4, 4), Error);
}

TEST(CycleRankTest, K4) {
  const auto graph = k4_graph();
  const auto g = edge_ground(graph);
  EXPECT_EQ(
      cycle_matroid_rank(graph, Subset::from_labels(g, {"ab", "bc", "ac"})), 2);
  EXPECT_EQ(
      cycle_matroid_rank(graph, Subset::from_labels(g, {"ab", "ac", "ad"})), 3);
  EXPECT_EQ(cycle_matroid_rank(graph, Subset(g)), 0);
  // Rank axioms exhaustively.
  auto r = k4_rank();
  auto rep = verify_properties(r, kSubmodular | kMonotone | kNormalized);
  EXPECT_TRUE(rep.pass) << rep.to_string();
  for (std::uint64_t s = 0; s < 64; ++s) {
    const auto a = Subset::from_mask(g, s);
    EXPECT_LE(r(a), static_cast<double>(a.count()));
    for (std::size_t e = 0; e < 6; ++e) {
      if (a.contains(e)) continue;
      const double d = r(a.with(e)) - r(a);
      EXPECT_TRUE(d == 0.0 || d == 1.0);
    }
  }
  Graph bad = graph;
  bad.edges.push_back({0, 7});
  EXPECT_THROW(make_cycle_matroid_rank(bad), Error);
}

TEST(FkHatTest, Examples) {
  auto f1 = make_fk_hat(1);
  const auto& g1 = f1.ground();
  EXPECT_DOUBLE_EQ(evaluate(f1, Subset::full(g1)), 1.0);
  EXPECT_DOUBLE_EQ(evaluate(f1, Subset(g1, {0})), 0.5);
  auto f2 = make_fk_hat(2);
  EXPECT_DOUBLE_EQ(evaluate(f2, Subset::full(f2.ground())), 1.0);
  EXPECT_EQ(f2.num_layers(), 2);
  EXPECT_THROW(make_fk_hat(5), Error);
  EXPECT_THROW(make_fk_hat(0), Error);
}

TEST(FkHatTest, MembershipForSmallK) {
  for (int k : {1, 2}) {
    auto rep = check_fk_membership(as_set_function(make_fk_hat(k)), k);
    EXPECT_TRUE(rep.pass) << rep.to_string();
  }
}

std::vector<std::vector<double>> RandomMatrix(std::size_t r, std::size_t c,
                                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<std::vector<double>> w(r, std::vector<double>(c));
  for (auto& row : w) {
    for (auto& x : row) x = d(rng);
  }
  return w;
}

TEST(GraphFunctionTest, SoftmaxSingletons) {
  std::mt19937_64 rng(2);
  const auto g = GroundSet::lettered(4);
  GraphSpec s{g, RandomMatrix(3, 4, rng), {}, 0.7, 0.5};
  auto f = make_graph_function(GraphFunctionKind::kSoftmaxFacility, s);
  ASSERT_TRUE(f.model.has_value());
  for (std::size_t v = 0; v < 4; ++v) {
    double want = 0.0;
    for (const auto& row : s.w) want += row[v];
    EXPECT_NEAR(f.handle(Subset(g, {v})), want, 1e-12);
  }
}

TEST(GraphFunctionTest, SoftmaxApproximatesFacilityLocation) {
  std::mt19937_64 rng(2024);
  const auto g = GroundSet::lettered(5);
  GraphSpec s{g, RandomMatrix(5, 5, rng), {}, 50.0, 0.5};
  auto soft = make_graph_function(GraphFunctionKind::kSoftmaxFacility, s);
  for (std::uint64_t m = 0; m < 32; ++m) {
    const auto a = Subset::from_mask(g, m);
    double exact = 0.0;
    for (const auto& row : s.w) {
      double best = 0.0;
      a.for_each([&](std::size_t v) { best = std::max(best, row[v]); });
      exact += best;
    }
    EXPECT_NEAR(soft.handle(a), exact, 0.02 * 5) << a.to_string();
  }
}

TEST(GraphFunctionTest, BipartiteIsSetCover) {
  std::mt19937_64 rng(9);
  const std::size_t n = 10, concepts = 7;
  const auto g = GroundSet::numbered(n);
  auto w = RandomMatrix(concepts, n, rng);
  for (auto& row : w) {
    for (auto& x : row) x = x < 0.3 ? 1.0 : 0.0;
  }
  auto f = make_graph_function(GraphFunctionKind::kBipartiteNeighborhood,
                               {g, w, {}, 1.0, 0.5});
  for (std::uint64_t m = 0; m < (1u << n); ++m) {
    const auto a = Subset::from_mask(g, m);
    std::set<std::size_t> covered;
    a.for_each([&](std::size_t v) {
      for (std::size_t u = 0; u < concepts; ++u) {
        if (w[u][v] > 0) covered.insert(u);
      }
    });
    ASSERT_DOUBLE_EQ(f.handle(a), static_cast<double>(covered.size()));
  }
}

TEST(GraphFunctionTest, CutsAndValidation) {
  const auto g = GroundSet::lettered(3);
  std::vector<std::vector<double>> w = {{0, 1, 2}, {1, 0, 3}, {2, 3, 0}};
  auto cut = make_graph_function(GraphFunctionKind::kGraphCut, {g, w, {}});
  EXPECT_DOUBLE_EQ(cut.handle(Subset(g, {0})), 3.0);
  EXPECT_DOUBLE_EQ(cut.handle(Subset::full(g)), 0.0);
  auto mono = make_graph_function(GraphFunctionKind::kMonotoneCut, {g, w, {}});
  EXPECT_DOUBLE_EQ(mono.handle(Subset(g, {0, 1})), 7.0);
  auto sat = make_graph_function(GraphFunctionKind::kSaturatedCut,
                                 {g, w, {}, 1.0, 0.5});
  // Row sums 3, 4, 5 give caps 1.5, 2, 2.5.
  EXPECT_DOUBLE_EQ(sat.handle(Subset(g, {2})), 1.5 + 2.0 + 0.0);
  EXPECT_THROW(make_graph_function(GraphFunctionKind::kSaturatedCut,
                                   {g, w, {}, 1.0, 1.0}),
               Error);
  w[0][1] = -1;
  EXPECT_THROW(make_graph_function(GraphFunctionKind::kGraphCut, {g, w, {}}),
               Error);
}

TEST(CoverageTest, Examples) {
  const auto g1 = GroundSet::lettered(1);
  auto f = make_prob_coverage(g1, {{0.3}});
  EXPECT_NEAR(evaluate(f, Subset::full(g1)), 0.3, 1e-12);
  const auto g = GroundSet::lettered(2);
  auto h = make_prob_coverage(g, {{0.5, 0.5}});
  EXPECT_NEAR(evaluate(h, Subset::full(g)), 0.75, 1e-12);
  auto z = make_prob_coverage(g, {{0.0, 0.0}});
  EXPECT_EQ(evaluate(z, Subset::full(g)), 0.0);
  EXPECT_THROW(make_prob_coverage(g, {{1.0, 0.0}}), Error);
}

TEST(DivergenceTest, ClosedForms) {
  const auto g = GroundSet::lettered(3);
  std::vector<std::vector<double>> m = {{1, 2, 0}, {0, 1, 3}};
  auto kl = make_divergence_objective(g, {0.5, 0.5}, 1.0, m);
  EXPECT_EQ(evaluate(kl, Subset(g)), 0.0);
  auto half = make_divergence_objective(g, {0.5, 0.5}, 0.5, m);
  const auto a = Subset(g, {0, 2});
  EXPECT_NEAR(evaluate(half, a),
              (std::sqrt(1.0) + std::sqrt(3.0)) / std::sqrt(2.0), 1e-12);
  EXPECT_THROW(make_divergence_objective(g, {0.5, 0.6}, 0.5, m), Error);
  EXPECT_THROW(make_divergence_objective(g, {0.5, 0.5}, 0.0, m), Error);
}

// On unit-mass rows and |X| = k, maximizing the objective picks the same set
// as minimizing the alpha-divergence D(p, pbar(X)) with pbar = m(X)/|X|.
TEST(DivergenceTest, ArgmaxMatchesDivergenceMinimizer) {
  std::mt19937_64 rng(31);
  const std::size_t n = 6;
  const auto g = GroundSet::lettered(n);
  std::uniform_real_distribution<double> d(0.05, 1.0);
  for (double delta : {0.5, 1.0}) {
    // Columns are per-element distributions over three outcomes.
    std::vector<std::vector<double>> m(3, std::vector<double>(n));
    for (std::size_t v = 0; v < n; ++v) {
      double s = 0.0;
      for (auto& row : m) s += (row[v] = d(rng));
      for (auto& row : m) row[v] /= s;
    }
    const std::vector<double> p = {0.5, 0.3, 0.2};
    auto f = make_divergence_objective(g, p, delta, m);
    const std::size_t k = 3;
    double best_g = -1e300, best_d = 1e300;
    std::uint64_t arg_g = 0, arg_d = 0;
    for (std::uint64_t s = 0; s < (1u << n); ++s) {
      const auto a = Subset::from_mask(g, s);
      if (a.count() != k) continue;
      const double val = evaluate(f, a);
      double div = 0.0;
      for (std::size_t u = 0; u < 3; ++u) {
        double mu = 0.0;
        a.for_each([&](std::size_t v) { mu += m[u][v]; });
        const double pbar = mu / k;
        div += delta == 1.0
                   ? p[u] * std::log(p[u] / pbar)
                   : (1.0 - std::pow(p[u], delta) * std::pow(pbar, 1 - delta)) /
                         (delta * (1 - delta));
      }
      if (val > best_g) best_g = val, arg_g = s;
      if (div < best_d) best_d = div, arg_d = s;
    }
    EXPECT_EQ(arg_g, arg_d) << "delta " << delta;
  }
}

TEST(ZooSoundnessTest, SubmodularMonotoneNormalized) {
  std::mt19937_64 rng(77);
  std::vector<SetFunction> fs = {
      presets::laminar6().oracle,
      as_set_function(presets::laminar6().model),
      as_set_function(presets::overlap6()),
      as_set_function(presets::fourblocks8()),
      as_set_function(presets::two_block_nest(units::sqrt())),
      as_set_function(presets::shape_features()),
      k4_rank(),
      make_truncated_partition_rank(
          presets::labels(GroundSet::lettered(6), {"a", "b", "c"}), 1, 3),
  };
  const auto g = GroundSet::lettered(8);
  GraphSpec s{g, RandomMatrix(4, 8, rng), {}, 2.0, 0.4};
  for (auto kind : {GraphFunctionKind::kFacilityLocation,
                    GraphFunctionKind::kSoftmaxFacility,
                    GraphFunctionKind::kBipartiteNeighborhood}) {
    fs.push_back(make_graph_function(kind, s).handle);
  }
  GraphSpec sq{g, RandomMatrix(8, 8, rng), {}, 1.0, 0.4};
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < i; ++j) sq.w[i][j] = sq.w[j][i];
    sq.w[i][i] = 0;
  }
  fs.push_back(make_graph_function(GraphFunctionKind::kMonotoneCut, sq).handle);
  fs.push_back(
      make_graph_function(GraphFunctionKind::kSaturatedCut, sq).handle);
  fs.push_back(as_set_function(make_prob_coverage(g, RandomMatrix(3, 8, rng))));
  for (const auto& f : fs) {
    auto r = verify_properties(f, kSubmodular | kMonotone | kNormalized);
    EXPECT_TRUE(r.pass) << f.name() << ": " << r.to_string();
  }
  // The plain cut is submodular and normalized but not monotone.
  auto cut = make_graph_function(GraphFunctionKind::kGraphCut, sq).handle;
  EXPECT_TRUE(verify_properties(cut, kSubmodular | kNormalized).pass);
  EXPECT_FALSE(verify_properties(cut, kMonotone).pass);
}

}  // namespace
}  // namespace dsfkit
