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

#include "dsfkit/analysis.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

namespace dsfkit {
namespace {

SetFunction SquaredSize(const GroundSet& g) {
  return SetFunction::integer(
      g,
      [](const Subset& a) {
        const auto n = static_cast<std::int64_t>(a.count());
        return n * n;
      },
      "square");
}

TEST(VerifyTest, SquaredCardinalityFailsWithWitness) {
  const GroundSet g({"x", "y", "z"});
  auto r = verify_properties(SquaredSize(g), kSubmodular);
  ASSERT_FALSE(r.pass);
  ASSERT_FALSE(r.witnesses.empty());
  const auto& w = r.witnesses.front();
  EXPECT_EQ(w.sets[0], Subset(g));
  EXPECT_EQ(w.sets[1], Subset::from_labels(g, {"x"}));
  ASSERT_EQ(w.elements.size(), 1u);
  EXPECT_EQ(g.label(w.elements[0]), "y");
  // gain of y grows from 1 to 3.
  EXPECT_EQ(w.violation, 2.0);
  EXPECT_TRUE(verify_properties(SquaredSize(g), kSupermodular).pass);
}

TEST(VerifyTest, ModularPassesAllThree) {
  const auto g = GroundSet::lettered(5);
  auto f =
      SetFunction::from_modular(ModularFunction(g, {1.0, -2.0, 0.5, 3.0, 0.0}));
  auto r = verify_properties(f, kSubmodular | kSupermodular | kModular);
  EXPECT_TRUE(r.pass) << r.to_string();
  EXPECT_FALSE(verify_properties(f, kMonotone).pass);
}

TEST(VerifyTest, Laminar6Passes) {
  auto l = presets::laminar6();
  for (const auto& f : {l.oracle, as_set_function(l.model)}) {
    auto r = verify_properties(f, "submodular,monotone,normalized");
    EXPECT_TRUE(r.pass) << r.to_string();
    EXPECT_EQ(r.subsets_checked, 64u);
  }
}

TEST(VerifyTest, CapsAndParsing) {
  auto g = GroundSet::numbered(17);
  EXPECT_THROW(verify_properties(SquaredSize(g), kSubmodular), Error);
  EXPECT_THROW(parse_properties("submodular,convex"), Error);
  auto big = GroundSet::numbered(9);
  auto r = verify_properties(SquaredSize(big), kSubmodular);
  EXPECT_EQ(r.witnesses.size(), 32u);
  EXPECT_FALSE(r.pass);
}

TEST(VerifyTest, ThreadCountDoesNotChangeReport) {
  auto g = GroundSet::numbered(10);
  VerifyOptions one, many;
  one.threads = 1;
  many.threads = 7;
  auto a = verify_properties(SquaredSize(g), kSubmodular, one);
  auto b = verify_properties(SquaredSize(g), kSubmodular, many);
  EXPECT_EQ(a.to_string(), b.to_string());
}

TEST(SurplusTest, Examples) {
  auto l = presets::laminar6();
  const auto& g = l.oracle.ground();
  EXPECT_DOUBLE_EQ(surplus(l.oracle, presets::labels(g, {"a", "b", "c"})), 1.0);
  EXPECT_DOUBLE_EQ(surplus(l.oracle, Subset(g)), 0.0);
  EXPECT_EQ(surplus_exact(l.oracle, Subset::full(g)), Rational(3));
  auto m = SetFunction::from_modular(ModularFunction(g, {1, 2, 3, 4, 5, 6}));
  for (std::uint64_t s = 0; s < 64; ++s) {
    EXPECT_NEAR(surplus(m, Subset::from_mask(g, s)), 0.0, 1e-12);
  }
}

TEST(SurplusTest, GroupedSurplus) {
  auto r = k4_rank();
  const auto& g = r.ground();
  const auto cycle = Subset::from_labels(g, {"ab", "bc", "ac"});
  const auto e = Subset::from_labels(g, {"ad"});
  EXPECT_DOUBLE_EQ(grouped_surplus(r, {e, cycle}), 0.0);
  std::vector<Subset> singles;
  cycle.for_each([&](std::size_t x) { singles.push_back(Subset(g, {x})); });
  EXPECT_DOUBLE_EQ(grouped_surplus(r, singles), surplus(r, cycle));
  EXPECT_THROW(grouped_surplus(r, {cycle, e | cycle}), Error);
  auto m = SetFunction::from_modular(ModularFunction(g, {1, 2, 3, 4, 5, 6}));
  EXPECT_NEAR(grouped_surplus(m, {e, cycle}), 0.0, 1e-12);
}

TEST(SurplusTest, IsModularAt) {
  auto r = k4_rank();
  const auto& g = r.ground();
  EXPECT_TRUE(is_modular_at(r, Subset::from_labels(g, {"ab", "ac", "ad"})));
  EXPECT_FALSE(is_modular_at(r, Subset::from_labels(g, {"ab", "bc", "ac"})));
  EXPECT_TRUE(is_modular_at(r, Subset::from_labels(g, {"cd"})));
}

// Nonnegativity, the grouped bound, linearity and preservation under
// concave composition over zoo instances.
TEST(SurplusLawsTest, ExhaustiveOnZoo) {
  std::vector<SetFunction> fs = {presets::laminar6().oracle, k4_rank(),
                                 as_set_function(presets::overlap6()),
                                 as_set_function(presets::shape_features())};
  std::mt19937_64 rng(8);
  for (const auto& f : fs) {
    const auto& g = f.ground();
    const std::uint64_t total = std::uint64_t{1} << g.size();
    const auto phi = units::sqrt();
    SetFunction comp(
        g, [f, phi](const Subset& a) { return phi.value(f(a)); }, {},
        "sqrt_of");
    for (std::uint64_t s = 0; s < total; ++s) {
      const auto a = Subset::from_mask(g, s);
      const double sa = surplus(f, a);
      EXPECT_GE(sa, -1e-9) << f.name() << a.to_string();
      if (sa > 1e-9) {
        EXPECT_GT(surplus(comp, a), 1e-12) << f.name();
      }
      // Random split into two groups.
      Subset left(g), right(g);
      a.for_each([&](std::size_t e) { (rng() & 1 ? left : right).insert(e); });
      EXPECT_GE(sa, grouped_surplus(f, {left, right}) - 1e-9);
    }
  }
  const auto& g = fs[0].ground();
  auto h = as_set_function(presets::two_block_nest(units::sqrt()));
  auto c = combine(2.5, fs[0], 0.75, h);
  for (std::uint64_t s = 0; s < 64; ++s) {
    const auto a = Subset::from_mask(g, s);
    EXPECT_NEAR(surplus(c, a), 2.5 * surplus(fs[0], a) + 0.75 * surplus(h, a),
                1e-12);
  }
}

TEST(AbcTest, Examples) {
  auto r = k4_rank();
  const auto& g = r.ground();
  EXPECT_EQ(check_abc_function(r, Subset::from_labels(g, {"ab"}),
                               Subset::from_labels(g, {"bc"}),
                               Subset::from_labels(g, {"ac"})),
            AbcResult::kStrongAbc);
  auto f1 = as_set_function(make_fk_hat(1));
  const auto& g1 = f1.ground();
  EXPECT_EQ(
      check_abc_function(f1, Subset(g1, {0}), Subset(g1, {1}), Subset(g1, {2})),
      AbcResult::kStrongAbc);
  auto m = SetFunction::from_modular(ModularFunction(g1, {1, 1, 1}));
  EXPECT_EQ(
      check_abc_function(m, Subset(g1, {0}), Subset(g1, {1}), Subset(g1, {2})),
      AbcResult::kNone);
  auto zero = SetFunction::from_modular(ModularFunction::zero(g1));
  EXPECT_EQ(check_abc_function(zero, Subset(g1, {0}), Subset(g1, {1}),
                               Subset(g1, {2})),
            AbcResult::kAbc);
  EXPECT_THROW(check_abc_function(m, Subset(g1, {0}), Subset(g1, {0, 1}),
                                  Subset(g1, {2})),
               Error);
  EXPECT_THROW(
      check_abc_function(m, Subset(g1), Subset(g1, {1}), Subset(g1, {2})),
      Error);
}

TEST(FkMembershipTest, Examples) {
  auto r1 = check_fk_membership(as_set_function(make_fk_hat(1)), 1);
  EXPECT_TRUE(r1.pass);
  EXPECT_EQ(r1.subsets_checked, 1u);
  auto r2 = check_fk_membership(as_set_function(make_fk_hat(2)), 2);
  EXPECT_TRUE(r2.pass) << r2.to_string();
  EXPECT_EQ(r2.subsets_checked, 4u);
  const auto g = fk_ground(2);
  auto m = SetFunction::from_modular(
      ModularFunction(g, std::vector<double>(9, 1.0)));
  EXPECT_FALSE(check_fk_membership(m, 2).pass);
  EXPECT_THROW(check_fk_membership(m, 1), Error);
  EXPECT_THROW(check_fk_membership(m, 3), Error);
}

TEST(AntitoneTest, LinearModelHasZeroDifferences) {
  const auto g = GroundSet::lettered(4);
  auto f = DsfModel::modular_only(ModularFunction(g, {1, 2, 3, 4}));
  auto r = antitone_cross_differences(f, 200, 1e-3, 1);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.max_violation, 0.0);
}

TEST(AntitoneTest, RandomConcaveModelsPass) {
  std::mt19937_64 rng(12);
  const auto g = GroundSet::lettered(5);
  RandomDsfOptions o;
  o.hidden_layers = 1;
  for (int i = 0; i < 3; ++i) {
    auto f = make_random_dsf(g, o, rng);
    auto r = antitone_cross_differences(f, 10000, 1e-3, 100 + i);
    EXPECT_TRUE(r.pass) << r.to_string();
  }
}

TEST(AntitoneTest, ConvexModelFails) {
  std::mt19937_64 rng(12);
  const auto g = GroundSet::lettered(4);
  RandomDsfOptions o;
  o.unit_pool = {units::exp_minus_one(), units::power(2.0)};
  auto f = make_random_dsf(g, o, rng);
  auto r = antitone_cross_differences(f, 100, 1e-3, 5);
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.witnesses.empty());
}

TEST(ScmmClassifierTest, Examples) {
  auto s = classify_two_layer_scmm(units::sqrt());
  EXPECT_TRUE(s.is_scmm);
  // Independent evaluation of the two expressions.
  const double r1 = 1, r2 = std::sqrt(2.0), r3 = std::sqrt(3.0), r4 = 2;
  EXPECT_NEAR(s.c1, -r1 + 3.5 * r2 - 4 * r3 + 1.5 * r4, 1e-15);
  EXPECT_NEAR(s.c2, 2 * r1 + r2 - 4 * r3 + 2 * r4, 1e-15);
  EXPECT_NEAR(s.c1, 0.0215, 1e-4);
  EXPECT_NEAR(s.c2, 0.486, 1e-3);
  auto t = classify_two_layer_scmm(units::truncate(3));
  EXPECT_FALSE(t.is_scmm);
  EXPECT_EQ(t.c1, -1.5);
  EXPECT_NE(t.violated.find("3.5"), std::string::npos);
  auto id = classify_two_layer_scmm(units::identity());
  EXPECT_TRUE(id.is_scmm);
  EXPECT_EQ(id.c1, 0.0);
  EXPECT_EQ(id.c2, 0.0);
  EXPECT_THROW(classify_two_layer_scmm(units::exp_minus_one()), Error);
}

TEST(ScmmClassifierTest, ExpansionMatchesNestedFunction) {
  for (const auto& phi :
       {units::sqrt(), units::identity(), units::log_gamma(1.0),
        units::power(0.3), units::one_minus_exp()}) {
    auto c = classify_two_layer_scmm(phi);
    if (!c.is_scmm) continue;
    auto e = expand_two_layer_scmm(phi);
    const auto& g = e.ground();
    for (std::uint64_t s = 0; s < 64; ++s) {
      const auto a = Subset::from_mask(g, s);
      int left = 0, right = 0;
      a.for_each([&](std::size_t x) { (x < 3 ? left : right)++; });
      const double direct = phi.value(std::min(left, 2) + std::min(right, 2));
      EXPECT_NEAR(e(a), direct, 1e-9) << phi.to_string() << a.to_string();
    }
    // Coefficient of min(|A cap abc|, 2) is phi(4) - phi(3).
    EXPECT_NEAR(c.expansion[4].weight, phi.value(4) - phi.value(3), 1e-15);
  }
  EXPECT_THROW(expand_two_layer_scmm(units::truncate(3)), Error);
}

// With a linear outer unit only the two block truncations at 2 survive.
TEST(ScmmClassifierTest, IdentityExpansionHasNoCurvatureTerms) {
  auto c = classify_two_layer_scmm(units::identity());
  for (std::size_t i = 0; i < c.expansion.size(); ++i) {
    const double want = (i == 4 || i == 5) ? 1.0 : 0.0;
    EXPECT_EQ(c.expansion[i].weight, want) << c.expansion[i].label;
  }
}

TEST(SymmetrizeTest, TableValues) {
  auto fs = five_vector_examples();
  const std::vector<std::array<Rational, 5>> want = {
      {Rational(1), Rational(1), Rational(1), Rational(1), Rational(1)},
      {Rational(1), Rational(2), Rational(2), Rational(2), Rational(2)},
      {Rational(1), Rational(1), Rational(2), Rational(2), Rational(2)},
      {Rational(1), Rational(2), Rational(2), Rational(3), Rational(4)},
      {Rational(7, 12), Rational(1), Rational(5, 6), Rational(1), Rational(1)},
  };
  for (std::size_t i = 0; i < fs.size(); ++i) {
    auto v = symmetrize_five_vector(fs[i]);
    ASSERT_TRUE(v.is_exact);
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_EQ(v.exact[j], want[i][j]) << "f" << i + 1 << " slot " << j;
    }
  }
  EXPECT_EQ(symmetrize_five_vector(fs[4]).to_string(), "(7/12, 1, 5/6, 1, 1)");
}

TEST(SymmetrizeTest, IsAProjection) {
  const auto g = GroundSet::lettered(6);
  const Rational h(1, 2);
  auto base = modular_truncation(
      g, {Rational(2), Rational(1), Rational(0), h, Rational(3), h},
      Rational(3));
  auto once = symmetrize(base);
  EXPECT_EQ(symmetrize_five_vector(once).to_string(),
            symmetrize_five_vector(base).to_string());
  auto twice = symmetrize(once);
  for (std::uint64_t s = 0; s < 64; ++s) {
    const auto a = Subset::from_mask(g, s);
    EXPECT_EQ(once.exact(a), twice.exact(a));
  }
  EXPECT_THROW(symmetrize(SquaredSize(GroundSet::lettered(5))), Error);
}

TEST(LatticeTest, SingleArgumentMatchesSubmodularCheck) {
  std::mt19937_64 rng(4);
  const auto g = GroundSet::lettered(5);
  auto f = make_random_dsf(g, {}, rng);
  auto lat = verify_k_multi_submodular(f, {{0}, {}});
  auto sub = verify_properties(as_set_function(f), kSubmodular);
  EXPECT_EQ(lat.pass, sub.pass);
  EXPECT_TRUE(lat.pass);
}

TEST(LatticeTest, PlantedViolation) {
  const GroundSet one({"x"});
  // psi(0,0) = psi(1,1) = 1 and psi(0,1) = psi(1,0) = 0.
  auto planted = [](const std::vector<Subset>& a) {
    return a[0].empty() == a[1].empty() ? 1.0 : 0.0;
  };
  auto full = verify_lattice_submodular({one, one}, planted);
  EXPECT_FALSE(full.pass);
  ASSERT_FALSE(full.witnesses.empty());
  EXPECT_EQ(full.witnesses.front().violation, 2.0);
  auto argwise = verify_lattice_submodular({one, one}, planted,
                                           LatticeMode::kArgumentwise);
  EXPECT_TRUE(argwise.pass);
}

TEST(LatticeTest, CapEnforced) {
  const auto g = GroundSet::numbered(9);
  auto f = [](const std::vector<Subset>&) { return 0.0; };
  EXPECT_THROW(verify_lattice_submodular({g, g}, f), Error);
}

}  // namespace
}  // namespace dsfkit
