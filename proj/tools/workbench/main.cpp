#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "workbench.hpp"

namespace fs = std::filesystem;
using namespace workbench;

namespace {

struct Flags {
  std::string spec;
  std::optional<std::size_t> range, depth, k, window_start, max_n, length, growth_n;
  std::optional<double> beta, lambda, cap;
  std::optional<unsigned> d;
  std::optional<std::string> mode, enumeration, mark, generators, format, out;
  bool no_cache = false;
};

void add_common(CLI::App* cmd, Flags& f, bool needs_spec = true)
{
  auto* s = cmd->add_option("--spec", f.spec, "subshift config file (YAML)");
  if (needs_spec)
    s->required();
  cmd->add_option("--range", f.range, "block-code range R");
  cmd->add_option("--depth", f.depth, "oracle depth");
  cmd->add_option("--k", f.k, "Folner index k");
  cmd->add_option("--window", f.window_start, "window start M (empirical mode)");
  cmd->add_option("--max-n", f.max_n, "largest n in tables");
  cmd->add_option("--length", f.length, "word length for extension tables");
  cmd->add_option("--growth-n", f.growth_n, "largest growth radius");
  cmd->add_option("--beta", f.beta, "beta");
  cmd->add_option("--d", f.d, "polynomial degree d");
  cmd->add_option("--lambda", f.lambda, "lambda");
  cmd->add_option("--cap", f.cap, "enumeration cap");
  cmd->add_option("--mode", f.mode, "empirical | strict")
      ->check(CLI::IsMember({"empirical", "strict"}));
  cmd->add_option("--enumeration", f.enumeration, "propagation | exhaustive")
      ->check(CLI::IsMember({"propagation", "exhaustive"}));
  cmd->add_option("--mark", f.mark, "step1 | step2")->check(CLI::IsMember({"step1", "step2"}));
  cmd->add_option("--generators", f.generators, "shift | aut")
      ->check(CLI::IsMember({"shift", "aut"}));
  cmd->add_option("--format", f.format, "json | tsv")->check(CLI::IsMember({"json", "tsv"}));
  cmd->add_option("--out", f.out, "output path (default stdout)");
  cmd->add_flag("--no-cache", f.no_cache, "bypass the factor cache");
}

ExperimentConfig resolve(const Flags& f, bool needs_spec)
{
  ExperimentConfig cfg;
  if (!f.spec.empty())
    cfg = load_config(f.spec);
  else if (needs_spec)
    throw ConfigError("--spec is required");
  auto& p = cfg.params;
  auto set = [](auto& field, const auto& opt) {
    if (opt)
      field = *opt;
  };
  set(p.range, f.range);
  set(p.depth, f.depth);
  set(p.k, f.k);
  set(p.window_start, f.window_start);
  set(p.max_n, f.max_n);
  set(p.length, f.length);
  set(p.growth_n, f.growth_n);
  set(p.beta, f.beta);
  set(p.lambda, f.lambda);
  set(p.cap, f.cap);
  set(p.d, f.d);
  set(p.mode, f.mode);
  set(p.enumeration, f.enumeration);
  set(p.mark, f.mark);
  set(p.generators, f.generators);
  set(cfg.format, f.format);
  set(cfg.out, f.out);
  if (cfg.format != "json" && cfg.format != "tsv")
    throw ConfigError("format must be json or tsv");
  validate(p);
  return cfg;
}

void emit(const std::string& text, const std::string& out)
{
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out);
  if (!file)
    throw ConfigError("cannot write '" + out + "'");
  file << text;
}

int run_cache(const std::string& action, const Flags& f)
{
  const fs::path dir = cache_dir();
  if (action == "path") {
    std::cout << dir.string() << "\n";
  } else if (action == "list") {
    if (!fs::exists(dir))
      return ok;
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".txt")
        names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    for (const auto& n : names)
      std::cout << n << "\n";
  } else if (action == "clear") {
    std::size_t removed = 0;
    if (fs::exists(dir))
      for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".txt")
          removed += fs::remove(e.path());
    std::cerr << "removed " << removed << " entries\n";
  } else {
    auto cfg = resolve(f, true);
    auto o = obtain_oracle(cfg.spec, cfg.params.depth, std::cerr);
    std::cout << cache_path(cfg.spec, cfg.params.depth).string() << "\t"
              << o->stabilized_to() << "\n";
  }
  return ok;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Symbolic-dynamics workbench"};
  app.require_subcommand(1);
  Flags flags;
  std::string cache_action = "list";

  const std::vector<std::pair<std::string, std::string>> commands{
      {"complexity", "P(n), k_n, d_n and growth diagnostics"},
      {"extensions", "unique-extension counts of every word of a length"},
      {"automorphisms", "enumerate Aut_R for R = 0..range"},
      {"group", "return words, G_w and the coset condition on a marked word"},
      {"folner", "coset-cover Folner candidate and its ratios"},
      {"growth", "ball sizes of a generating set"},
      {"bounds", "doubling-time reference and step bound"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    subs[name] = app.add_subcommand(name, help);
    add_common(subs[name], flags, name != "bounds");
  }
  auto* cache = app.add_subcommand("cache", "inspect or fill the factor cache");
  cache->add_option("action", cache_action, "list | clear | path | warm")
      ->check(CLI::IsMember({"list", "clear", "path", "warm"}));
  add_common(cache, flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (cache->parsed())
      return run_cache(cache_action, flags);

    std::string name;
    for (auto& [n, sub] : subs)
      if (sub->parsed())
        name = n;
    auto cfg = resolve(flags, name != "bounds");

    Report report;
    if (name == "bounds") {
      report = run_bounds(cfg);
    } else {
      auto o = obtain_oracle(cfg.spec, cfg.params.depth, std::cerr, !flags.no_cache);
      if (o->unstable())
        std::cerr << "warning: oracle certified only to depth " << o->stabilized_to() << "\n";
      if (name == "complexity")
        report = run_complexity(cfg, o);
      else if (name == "extensions")
        report = run_extensions(cfg, o);
      else if (name == "automorphisms")
        report = run_automorphisms(cfg, o);
      else if (name == "group")
        report = run_group(cfg, o);
      else if (name == "folner")
        report = run_folner(cfg, o);
      else
        report = run_growth(cfg, o);
    }
    emit(render(report, cfg.format), cfg.out);
    if (name == "folner" && report.json.contains("strict_feasibility") &&
        !report.json["strict_feasibility"]["feasible"].get<bool>()) {
      std::cerr << "strict construction infeasible: "
                << report.json["strict_feasibility"]["reason"].get<std::string>() << "\n";
      return resource;
    }
    return ok;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return usage;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << " (estimate " << e.estimate() << ")\n";
    return resource;
  } catch (const subshift::Error& e) {
    std::cerr << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return resource;
  }
}
