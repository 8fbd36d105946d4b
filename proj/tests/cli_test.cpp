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

#include "dsfkit/cli.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gtest/gtest.h"

namespace dsfkit {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out, err;
};

Run Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("dsfkit_cli_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

TEST(RoundTripTest, Laminar6AllSubsets) {
  TempDir dir;
  auto f = presets::laminar6().model;
  save_model(f, dir.file("m.json"));
  auto g = load_model(dir.file("m.json"));
  for (std::uint64_t m = 0; m < 64; ++m) {
    const auto a = Subset::from_mask(f.ground(), m);
    EXPECT_EQ(evaluate(g, a), evaluate(f, a));
  }
  EXPECT_EQ(model_to_json(g), model_to_json(f));
}

TEST(RoundTripTest, NegativeFinalModularAndLayers) {
  const auto gs = GroundSet::lettered(4);
  FeatureMatrix fm{gs, {"x"}, {{1, 0, 2, 1}}, {1}, {units::sqrt()}};
  auto f = make_embedded_model(
      fm, {{"top", units::power(0.3), {from_node("x", 0.7)}}}, "top",
      {{"top", 1}});
  DsfModel g(f.ground(), f.node_specs(), f.root_name(),
             ModularFunction(gs, {-2.5, 0.0, -1e-300, 3.0}), f.layer_of(),
             f.frozen());
  auto h = model_from_json(Json::parse(model_to_json(g).dump()));
  EXPECT_EQ(h.final_modular().weights()[0], -2.5);
  EXPECT_EQ(h.final_modular().weights()[2], -1e-300);
  EXPECT_EQ(h.layer_of(), g.layer_of());
  EXPECT_EQ(h.frozen(), g.frozen());
  EXPECT_EQ(h.parameters(), g.parameters());
}

TEST(RoundTripTest, DecimalStringsAreBitExact) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(parse_real(Json(format_real(0.1)), "x"), 0.1);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = d(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(parse_real(Json(format_real(x)), "x"), x);
  }
  std::mt19937_64 r2(4);
  auto f = make_random_dsf(GroundSet::lettered(7), {}, r2);
  auto g = model_from_json(model_to_json(f));
  EXPECT_EQ(g.parameters(), f.parameters());
  for (std::uint64_t m = 0; m < 128; ++m) {
    const auto a = Subset::from_mask(f.ground(), m);
    EXPECT_EQ(evaluate(g, a), evaluate(f, a));
  }
}

TEST(LoadTest, RejectsMalformedModels) {
  EXPECT_THROW(model_from_json(Json::parse("[]")), Error);
  EXPECT_THROW(model_from_json(Json::parse(R"({"nodes": []})")), Error);
  const std::string base =
      R"({"ground": ["a", "b"], "root": "u", "nodes": [{"id": "u",
          "unit": {"kind": "sqrt"}, "parents": [{"element": "a", "weight": W}]}]})";
  auto with = [&](const std::string& w) {
    std::string s = base;
    s.replace(s.find('W'), 1, w);
    return Json::parse(s);
  };
  EXPECT_NO_THROW(model_from_json(with("\"0.5\"")));
  EXPECT_NO_THROW(model_from_json(with("0.5")));
  EXPECT_THROW(model_from_json(with("\"-0.5\"")), Error);
  EXPECT_THROW(model_from_json(with("\"half\"")), Error);
  EXPECT_THROW(model_from_json(with("true")), Error);
  auto bad_kind = with("1");
  bad_kind["nodes"][0]["unit"]["kind"] = "tanh";
  EXPECT_THROW(model_from_json(bad_kind), Error);
  auto both = with("1");
  both["nodes"][0]["parents"][0]["node"] = "u";
  EXPECT_THROW(model_from_json(both), Error);
  auto unknown = with("1");
  unknown["nodes"][0]["parents"][0]["element"] = "z";
  EXPECT_THROW(model_from_json(unknown), Error);
}

TEST(DatasetTest, ParsesAndRejects) {
  const auto g = GroundSet::lettered(3);
  std::istringstream ok(
      "{\"set\": [\"a\", \"c\"], \"value\": 2}\n\n{\"set\": [], \"value\": "
      "\"0.25\"}\n");
  auto d = read_dataset(ok, g);
  ASSERT_EQ(d.sets.size(), 2u);
  EXPECT_EQ(d.sets[0], Subset::from_labels(g, {"a", "c"}));
  EXPECT_EQ(d.values, (std::vector<double>{2.0, 0.25}));
  std::ostringstream back;
  write_dataset(back, d);
  std::istringstream again(back.str());
  auto d2 = read_dataset(again, g);
  EXPECT_EQ(d2.values, d.values);
  EXPECT_EQ(d2.sets, d.sets);

  std::istringstream mixed("{\"set\": [\"a\"], \"value\": 1}\n{\"set\": []}\n");
  EXPECT_THROW(read_dataset(mixed, g), Error);
  std::istringstream unknown("{\"set\": [\"q\"]}\n");
  EXPECT_THROW(read_dataset(unknown, g), Error);
  std::istringstream broken("{\"set\": [\"a\"\n");
  EXPECT_THROW(read_dataset(broken, g), Error);
  std::istringstream empty("");
  EXPECT_THROW(read_dataset(empty, g), Error);
}

TEST(CliTest, EvalExamples) {
  auto r = Cli({"eval", "--model", "laminar6", "--set", "a,b,d,e"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "3\n");
  r = Cli({"eval", "--model", "fig1", "--set", "b"});
  EXPECT_EQ(r.out, "3.82842712475\n");
  EXPECT_EQ(Cli({"eval", "--model", "laminar6", "--set", ""}).out, "0\n");
  EXPECT_EQ(Cli({"eval", "--model", "laminar6", "--set", "a,z"}).code, 2);
}

TEST(CliTest, EvalFromFile) {
  TempDir dir;
  save_model(presets::overlap6(), dir.file("o.json"));
  auto r = Cli({"eval", "--model", dir.file("o.json"), "--set", "a,b,c,d,e,f"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "5\n");
  WriteText(dir.file("bad.json"), "{ not json");
  r = Cli({"eval", "--model", dir.file("bad.json"), "--set", "a"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("malformed"), std::string::npos);
}

TEST(CliTest, VerifyExitCodes) {
  auto r = Cli({"verify", "--preset", "k4", "--props", "submodular,monotone"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  // A convex unit over a modular input is supermodular, not submodular.
  TempDir dir;
  const auto g = GroundSet::lettered(3);
  save_model(make_scmm({{units::exp_minus_one(),
                         ModularFunction(g, {1, 1, 1}, true), 1.0, "t"}},
                       ModularFunction::zero(g)),
             dir.file("sup.json"));
  r = Cli({"verify", "--model", dir.file("sup.json"), "--props", "submodular"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("witness"), std::string::npos);
  EXPECT_EQ(Cli({"verify", "--model", dir.file("sup.json"), "--props",
                 "supermodular,monotone", "--threads", "3"})
                .code,
            0);
  EXPECT_EQ(Cli({"verify", "--preset", "nonesuch"}).code, 2);
  EXPECT_EQ(Cli({"verify", "--preset", "k4", "--props", "convex"}).code, 2);
  EXPECT_EQ(Cli({"verify"}).code, 2);
}

TEST(CliTest, VerifyOutputIndependentOfThreads) {
  TempDir dir;
  const auto g = GroundSet::lettered(7);
  save_model(make_scmm({{units::exp_minus_one(),
                         ModularFunction(g, std::vector<double>(7, 0.4), true),
                         1.0, "t"}},
                       ModularFunction::zero(g)),
             dir.file("sup.json"));
  auto one = Cli({"verify", "--model", dir.file("sup.json"), "--props",
                  "submodular", "--threads", "1"});
  auto many = Cli({"verify", "--model", dir.file("sup.json"), "--props",
                   "submodular", "--threads", "5"});
  EXPECT_EQ(one.code, 1);
  EXPECT_EQ(one.out, many.out);
}

TEST(CliTest, MaximizeDeterministic) {
  auto a = Cli({"maximize", "--model", "fig1", "--cardinality", "3"});
  EXPECT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("set {d,f,h}"), std::string::npos);
  EXPECT_NE(a.out.find("value 9\n"), std::string::npos);
  EXPECT_EQ(a.out,
            Cli({"maximize", "--model", "fig1", "--cardinality", "3"}).out);
  auto k = Cli({"maximize", "--model", "laminar6", "--knapsack", "1.5",
                "--costs", "1,1,1,0.5,0.5,0.5"});
  EXPECT_EQ(k.code, 0);
  EXPECT_NE(k.out.find("value 2\n"), std::string::npos);
  EXPECT_EQ(Cli({"maximize", "--model", "fig1"}).code, 2);
  EXPECT_EQ(Cli({"maximize", "--model", "fig1", "--knapsack", "1"}).code, 2);
  EXPECT_EQ(Cli({"maximize", "--model", "laminar6", "--knapsack", "1",
                 "--costs", "1,1"})
                .code,
            2);
}

TEST(CliTest, Extension) {
  auto r = Cli({"extension", "--model", "laminar6", "--x", "1,1,1,0,0,0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("lovasz 2\n"), std::string::npos);
  EXPECT_NE(r.out.find("subgradient 1 1 0 1 0 0\n"), std::string::npos);
  EXPECT_EQ(Cli({"extension", "--model", "k4", "--x", "2,0,0,0,0,0"}).code, 2);
}

TEST(CliTest, ReproCases) {
  for (const auto& name : repro_case_names()) {
    auto r = Cli({"repro", "--case", name});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("repro " + name + ": PASS"), std::string::npos);
  }
  auto t = Cli({"repro", "--case", "table1"});
  EXPECT_NE(t.out.find("(7/12, 1, 5/6, 1, 1)"), std::string::npos);
  EXPECT_EQ(Cli({"repro", "--case", "nope"}).code, 2);
  EXPECT_EQ(repro_case_names().size(), 10u);
}

TEST(CliTest, LearnRegressionEndToEnd) {
  TempDir dir;
  const auto g = GroundSet::lettered(5);
  auto topo = make_scmm(
      {{units::identity(),
        ModularFunction(g, std::vector<double>(5, 0.5), true), 1.0, "lin"}},
      ModularFunction::zero(g), true);
  save_model(topo, dir.file("topo.json"));
  std::ostringstream data;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    Json r;
    std::vector<std::string> s;
    double y = 0.0;
    for (std::size_t e = 0; e < 5; ++e) {
      if (rng() & 1) {
        s.push_back(g.label(e));
        y += 1.0 + e;
      }
    }
    r["set"] = s;
    r["value"] = y;
    data << r.dump() << "\n";
  }
  WriteText(dir.file("d.jsonl"), data.str());
  auto r = Cli({"learn", "--mode", "regression", "--model",
                dir.file("topo.json"), "--data", dir.file("d.jsonl"),
                "--epochs", "150", "--lr", "0.05", "--seed", "3", "--out",
                dir.file("fit.json"), "--loss-csv", dir.file("loss.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto fit = load_model(dir.file("fit.json"));
  EXPECT_NEAR(evaluate(fit, Subset::from_labels(g, {"e"})), 5.0, 0.05);
  std::ifstream csv(dir.file("loss.csv"));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "epoch,loss");
  int lines = 0;
  for (std::string l; std::getline(csv, l);) ++lines;
  EXPECT_EQ(lines, 151);
  auto again = Cli({"learn", "--mode", "regression", "--model",
                    dir.file("topo.json"), "--data", dir.file("d.jsonl"),
                    "--epochs", "150", "--lr", "0.05", "--seed", "3"});
  EXPECT_EQ(Json::parse(again.out.substr(again.out.find('{'))),
            read_json_file(dir.file("fit.json")));
}

TEST(CliTest, LearnMaxMarginAndErrors) {
  TempDir dir;
  WriteText(dir.file("s.jsonl"), "{\"set\": [\"a\", \"b\", \"c\"]}\n");
  auto r = Cli({"learn", "--mode", "maxmargin", "--model", "fig1", "--data",
                dir.file("s.jsonl"), "--epochs", "5", "--init", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("final loss"), std::string::npos);
  EXPECT_EQ(Cli({"learn", "--mode", "regression", "--model", "fig1", "--data",
                 dir.file("s.jsonl")})
                .code,
            2);
  EXPECT_EQ(Cli({"learn", "--mode", "ranking", "--model", "fig1", "--data",
                 dir.file("s.jsonl")})
                .code,
            2);
  EXPECT_EQ(Cli({"learn", "--mode", "maxmargin", "--model", "k4", "--data",
                 dir.file("s.jsonl")})
                .code,
            2);
}

// The installed binary, for exit codes as seen by a shell.
Run Binary(const std::string& args) {
  const std::string cmd = std::string(DSFKIT_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return {-1, "", "popen failed"};
  std::string out;
  char buf[512];
  while (std::fgets(buf, sizeof buf, p)) out += buf;
  const int status = ::pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, ""};
}

TEST(BinaryTest, ExitCodes) {
  auto r = Binary("eval --model laminar6 --set a,b,d,e");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "3\n");
  EXPECT_EQ(Binary("repro --case table1").code, 0);
  EXPECT_EQ(Binary("verify --preset k4 --props submodular,monotone").code, 0);
  EXPECT_EQ(Binary("frobnicate").code, 2);
  EXPECT_EQ(Binary("eval --model laminar6").code, 2);
  EXPECT_EQ(Binary("--help").code, 0);
}

}  // namespace
}  // namespace dsfkit
