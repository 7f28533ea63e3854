#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "workbench.hpp"

using namespace workbench;

namespace {

ExperimentConfig cfg(const std::string& file)
{ return load_config(std::string(WORKBENCH_CFG_DIR) + "/" + file); }

OracleRef oracle_for(const ExperimentConfig& c)
{
  std::ostringstream log;
  return obtain_oracle(c.spec, c.params.depth, log, false);
}

} // namespace

TEST(Config, ParsesExamples)
{
  auto f = cfg("fibonacci.yaml");
  EXPECT_EQ(f.spec.name, "fibonacci");
  EXPECT_STREQ(f.spec.kind(), "substitution");
  EXPECT_EQ(f.params.depth, 200u);
  EXPECT_EQ(f.params.window_start, 2u);
  EXPECT_EQ(f.format, "json");
  EXPECT_STREQ(cfg("sturmian.yaml").spec.kind(), "sturmian");
  EXPECT_STREQ(cfg("periodic.yaml").spec.kind(), "periodic");
  EXPECT_STREQ(cfg("full_shift.yaml").spec.kind(), "explicit");
}

TEST(Config, Rejections)
{
  EXPECT_THROW(parse_config("spec: [unclosed"), ConfigError);
  EXPECT_THROW(parse_config("params: {depth: 3}"), ConfigError);
  EXPECT_THROW(parse_config("spec: {alphabet: '01'}"), ConfigError);
  EXPECT_THROW(parse_config("spec: {alphabet: '01', periodic: '01', sturmian: [1]}"),
               ConfigError);
  EXPECT_THROW(parse_config("spec: {alphabet: '01', substitution: {'0': '01'}}"), ConfigError);
  EXPECT_THROW(parse_config("spec: {alphabet: '01', substitution: {'2': '01', '0': '1'}}"),
               ConfigError);
  EXPECT_THROW(parse_config("spec: {alphabet: '01', periodic: '01'}\nparams: {depht: 3}"),
               ConfigError);
  EXPECT_THROW(parse_config("spec: {alphabet: '01', periodic: '01'}\nparams: {depth: x}"),
               ConfigError);
  Params p;
  p.mode = "lenient";
  EXPECT_THROW(validate(p), ConfigError);
  p = Params{};
  p.cap = 0;
  EXPECT_THROW(validate(p), ConfigError);
}

TEST(Config, ExitCodes)
{
  EXPECT_EQ(exit_code(ErrorKind::contract_violation), 1);
  EXPECT_EQ(exit_code(ErrorKind::invalid_spec), 2);
  EXPECT_EQ(exit_code(ErrorKind::cap_exceeded), 3);
  EXPECT_EQ(exit_code(ErrorKind::infeasible), 3);
  EXPECT_EQ(exit_code(ErrorKind::out_of_certified_range), 3);
}

TEST(Reports, Complexity)
{
  auto c = cfg("fibonacci.yaml");
  auto r = run_complexity(c, oracle_for(c));
  EXPECT_EQ(r.json["schema_version"], 1);
  EXPECT_FALSE(r.json["periodic"].get<bool>());
  for (const auto& row : r.json["rows"])
    EXPECT_EQ(row["P"].get<std::size_t>(), row["n"].get<std::size_t>() + 1);
  EXPECT_EQ(r.json["rows"][0]["k_n"], 2);
  EXPECT_EQ(r.json["rows"][2]["d_n"], 4);
  EXPECT_EQ(r.tsv.substr(0, 20), "n\tP\tk_n\td_n\n1\t2\t2\t2\n");

  auto p = cfg("periodic.yaml");
  auto pr = run_complexity(p, oracle_for(p));
  EXPECT_TRUE(pr.json["periodic"].get<bool>());
  EXPECT_EQ(pr.json["periodicity_flagged_at"], 1);
  EXPECT_EQ(pr.json["eventual_period"], 2);
  EXPECT_TRUE(pr.json["rows"][0]["k_n"].is_null());
}

TEST(Reports, Extensions)
{
  auto c = cfg("fibonacci.yaml");
  c.params.length = 1;
  auto r = run_extensions(c, oracle_for(c));
  EXPECT_EQ(r.tsv, "word\tright\tleft\tright_capped\tleft_capped\n0\t0\t0\t0\t0\n1\t1\t1\t0\t0\n");
}

TEST(Reports, Automorphisms)
{
  auto t = cfg("thue_morse.yaml");
  auto r = run_automorphisms(t, oracle_for(t));
  EXPECT_EQ(r.json["ranges"][0]["count"], 2);
  EXPECT_EQ(r.json["ranges"][1]["count"], 6);

  auto f = cfg("fibonacci.yaml");
  f.params.range = 0;
  auto fr = run_automorphisms(f, oracle_for(f));
  EXPECT_EQ(fr.json["ranges"][0]["count"], 1);
  EXPECT_EQ(fr.json["ranges"][0]["automorphisms"][0]["label"], "id");

  f.params.range = 5;
  f.params.enumeration = "exhaustive";
  f.params.cap = 1000;
  EXPECT_THROW(run_automorphisms(f, oracle_for(f)), CapExceeded);
}

TEST(Reports, GroupSuite)
{
  for (const char* file : {"fibonacci.yaml", "thue_morse.yaml", "period_doubling.yaml"}) {
    auto c = cfg(file);
    auto r = run_group(c, oracle_for(c));
    EXPECT_TRUE(r.json["coset_condition"]["equal"].get<bool>()) << file;
    EXPECT_TRUE(r.json["order_divides_P_K_factorial"].get<bool>()) << file;
    EXPECT_EQ(r.json["K_w"], r.json["sample_gap"]) << file;
  }
  auto f = cfg("fibonacci.yaml");
  f.params.mark = "step2";
  auto r = run_group(f, oracle_for(f));
  EXPECT_EQ(r.json["f"], (std::vector<int>{3, 5, 7}));
}

TEST(Reports, Folner)
{
  auto f = cfg("fibonacci.yaml");
  auto r = run_folner(f, oracle_for(f));
  EXPECT_EQ(r.json["F_size"], 5);
  bool saw = false;
  for (const auto& row : r.json["ratios"]) {
    if (row["label"] == "id") {
      EXPECT_EQ(row["symmetric_difference"], 0);
    }
    if (row["label"] == "shift^1") {
      EXPECT_EQ(row["symmetric_difference"], 2);
      EXPECT_EQ(row["size"], 5);
      saw = true;
    }
  }
  EXPECT_TRUE(saw);

  f.params.mode = "strict";
  auto s = run_folner(f, oracle_for(f));
  EXPECT_FALSE(s.json["strict_feasibility"]["feasible"].get<bool>());
}

TEST(Reports, GrowthAndBounds)
{
  auto f = cfg("fibonacci.yaml");
  auto g = run_growth(f, oracle_for(f));
  EXPECT_EQ(g.tsv.substr(0, 20), "n\tgamma\n1\t3\n2\t5\n3\t7\n");

  auto t = cfg("thue_morse.yaml");
  t.params.generators = "aut";
  t.params.range = 0;
  t.params.growth_n = 3;
  auto tg = run_growth(t, oracle_for(t));
  EXPECT_EQ(tg.json["gamma"], (std::vector<int>{2, 2, 2}));

  ExperimentConfig b;
  b.params.d = 3;
  b.params.beta = 0.5;
  b.params.max_n = 100;
  auto br = run_bounds(b);
  EXPECT_EQ(br.json["step_bound"], 1);
  EXPECT_EQ(br.json["doubling"][99]["D_n"], 21);
}

TEST(Reports, DeterministicAndCached)
{
  auto dir = std::filesystem::temp_directory_path() / "subshift-cache-test";
  std::filesystem::remove_all(dir);
  ::setenv("SUBSHIFT_CACHE_DIR", dir.c_str(), 1);

  auto c = cfg("thue_morse.yaml");
  std::ostringstream log1, log2;
  auto first = obtain_oracle(c.spec, c.params.depth, log1);
  auto second = obtain_oracle(c.spec, c.params.depth, log2);
  EXPECT_NE(log1.str().find("cache store"), std::string::npos);
  EXPECT_NE(log2.str().find("cache hit"), std::string::npos);
  EXPECT_EQ(first->stabilized_to(), second->stabilized_to());
  EXPECT_EQ(render(run_group(c, first), "json"), render(run_group(c, second), "json"));
  EXPECT_EQ(render(run_complexity(c, first), "tsv"), render(run_complexity(c, second), "tsv"));
  EXPECT_THROW(render(run_group(c, first), "tsv"), ConfigError);

  ::unsetenv("SUBSHIFT_CACHE_DIR");
  std::filesystem::remove_all(dir);
}
