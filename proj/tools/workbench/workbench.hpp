#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "json.hpp"
#include "subshift/subshift.hpp"

namespace workbench {

using namespace subshift;
using nlohmann::ordered_json;

inline constexpr int schema_version = 1;

// Exit statuses.
enum Exit : int { ok = 0, falsified = 1, usage = 2, resource = 3 };

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Params {
  std::size_t depth = 200;
  std::size_t max_n = 20;        // complexity and bounds tables
  std::size_t length = 1;        // extensions: word length
  std::size_t range = 1;         // R
  std::size_t k = 1;
  std::size_t window_start = 0;  // M, 0 = default
  std::size_t growth_n = 10;
  std::string generators = "shift";   // shift | aut
  double beta = 0.4;
  unsigned d = 2;
  double lambda = 2.0;
  double cap = 1 << 22;
  std::string mode = "empirical";     // empirical | strict
  std::string enumeration = "propagation";
  std::string mark = "step1";         // group suite marked word
};

struct ExperimentConfig {
  SubshiftSpec spec;
  Params params;
  std::string format = "json";
  std::string out;   // empty: stdout
};

namespace detail {

template <class T>
T scalar(const YAML::Node& node, const std::string& key)
{
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

inline SubshiftSpec parse_spec(const YAML::Node& s)
{
  if (!s || !s.IsMap())
    throw ConfigError("config needs a 'spec' map");
  const std::string name = s["name"] ? scalar<std::string>(s["name"], "spec.name") : "unnamed";
  if (!s["alphabet"])
    throw ConfigError("spec.alphabet is required");
  const auto alphabet = scalar<std::string>(s["alphabet"], "spec.alphabet");

  int variants = !!s["substitution"] + !!s["sturmian"] + !!s["periodic"] + !!s["explicit"];
  if (variants != 1)
    throw ConfigError("spec needs exactly one of substitution, sturmian, periodic, explicit");

  if (auto sub = s["substitution"]) {
    if (!sub.IsMap())
      throw ConfigError("spec.substitution must map each symbol to its image");
    std::vector<std::string> images(alphabet.size());
    for (auto it = sub.begin(); it != sub.end(); ++it) {
      auto key = scalar<std::string>(it->first, "spec.substitution");
      auto pos = alphabet.find(key);
      if (key.size() != 1 || pos == std::string::npos)
        throw ConfigError("spec.substitution key '" + key + "' is not an alphabet symbol");
      images[pos] = scalar<std::string>(it->second, "spec.substitution." + key);
    }
    for (std::size_t a = 0; a < images.size(); ++a)
      if (images[a].empty())
        throw ConfigError(std::string("spec.substitution has no image for '") + alphabet[a] +
                          "'");
    return substitution_spec(name, alphabet, images);
  }
  if (auto st = s["sturmian"]) {
    if (!st.IsSequence())
      throw ConfigError("spec.sturmian must be a list of coefficients");
    std::vector<unsigned> cf;
    for (const auto& c : st)
      cf.push_back(scalar<unsigned>(c, "spec.sturmian"));
    return sturmian_spec(name, alphabet, cf);
  }
  if (auto p = s["periodic"]) {
    if (p.IsScalar())
      return periodic_spec(name, alphabet, scalar<std::string>(p, "spec.periodic"));
    auto trust = p["trust_depth"] ? scalar<std::size_t>(p["trust_depth"], "trust_depth") : 1024;
    return periodic_spec(name, alphabet, scalar<std::string>(p["word"], "spec.periodic.word"),
                         trust);
  }
  auto e = s["explicit"];
  if (!e.IsMap() || !e["sample"] || !e["trust_depth"])
    throw ConfigError("spec.explicit needs 'sample' and 'trust_depth'");
  return explicit_spec(name, alphabet, scalar<std::string>(e["sample"], "spec.explicit.sample"),
                       scalar<std::size_t>(e["trust_depth"], "spec.explicit.trust_depth"));
}

inline void parse_params(const YAML::Node& p, Params& out)
{
  if (!p)
    return;
  if (!p.IsMap())
    throw ConfigError("'params' must be a map");
  static const std::vector<std::string> known{
      "depth", "max_n", "length", "range", "k", "window_start", "growth_n", "generators",
      "beta", "d", "lambda", "cap", "mode", "enumeration", "mark"};
  for (auto it = p.begin(); it != p.end(); ++it) {
    auto key = scalar<std::string>(it->first, "params");
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown key params." + key);
  }
  auto get = [&](const char* key, auto& field) {
    if (p[key])
      field = scalar<std::decay_t<decltype(field)>>(p[key], std::string("params.") + key);
  };
  get("depth", out.depth);
  get("max_n", out.max_n);
  get("length", out.length);
  get("range", out.range);
  get("k", out.k);
  get("window_start", out.window_start);
  get("growth_n", out.growth_n);
  get("generators", out.generators);
  get("beta", out.beta);
  get("d", out.d);
  get("lambda", out.lambda);
  get("cap", out.cap);
  get("mode", out.mode);
  get("enumeration", out.enumeration);
  get("mark", out.mark);
}

} // namespace detail

inline void validate(const Params& p)
{
  auto check = [](bool ok, const std::string& what) {
    if (!ok)
      throw ConfigError(what);
  };
  check(p.depth >= 1, "depth must be >= 1");
  check(p.max_n >= 1, "max_n must be >= 1");
  check(p.length >= 1, "length must be >= 1");
  check(p.cap > 0, "cap must be positive");
  check(p.beta > 0 && p.beta <= 1, "beta must lie in (0, 1]");
  check(p.lambda > 1, "lambda must exceed 1");
  check(p.d >= 1, "d must be >= 1");
  check(p.mode == "empirical" || p.mode == "strict", "mode must be empirical or strict");
  check(p.enumeration == "propagation" || p.enumeration == "exhaustive",
        "enumeration must be propagation or exhaustive");
  check(p.mark == "step1" || p.mark == "step2", "mark must be step1 or step2");
  check(p.generators == "shift" || p.generators == "aut", "generators must be shift or aut");
}

inline ExperimentConfig parse_config(const std::string& text)
{
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!root.IsMap())
    throw ConfigError("config must be a map with 'spec' and optional 'params', 'output'");
  ExperimentConfig cfg;
  cfg.spec = detail::parse_spec(root["spec"]);
  detail::parse_params(root["params"], cfg.params);
  if (auto o = root["output"]) {
    if (o["format"])
      cfg.format = detail::scalar<std::string>(o["format"], "output.format");
    if (o["path"])
      cfg.out = detail::scalar<std::string>(o["path"], "output.path");
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---- factor cache ------------------------------------------------------

inline std::filesystem::path cache_dir()
{
  if (const char* env = std::getenv("SUBSHIFT_CACHE_DIR"); env && *env)
    return env;
  return ".subshift-cache";
}

inline std::string hex(std::uint64_t h)
{
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline std::filesystem::path cache_path(const SubshiftSpec& spec, std::size_t depth)
{ return cache_dir() / (hex(spec.hash()) + "-" + std::to_string(depth) + ".txt"); }

// One entry per (spec hash, requested depth): the certified depth and the
// sample whose factors were certified.
inline std::optional<OracleRef> cache_load(const SubshiftSpec& spec, std::size_t depth)
{
  std::ifstream in(cache_path(spec, depth));
  if (!in)
    return std::nullopt;
  std::string magic, canonical, sample;
  std::size_t requested = 0, certified = 0;
  std::getline(in, magic);
  std::getline(in, canonical);
  in >> requested >> certified >> sample;
  if (magic != "subshift-factor-cache 1" || canonical != spec.canonical() || requested != depth ||
      !in)
    return std::nullopt;
  Word text = spec.alphabet.encode(sample);
  if (certified > text.size())
    return std::nullopt;
  auto levels = subshift::detail::levels_of(text, certified);
  return std::make_shared<const LanguageOracle>(spec, std::move(levels), requested, text.size(),
                                                std::move(text));
}

inline void cache_store(const LanguageOracle& o)
{
  std::filesystem::create_directories(cache_dir());
  const auto path = cache_path(o.spec(), o.requested_depth());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << "subshift-factor-cache 1\n"
        << o.spec().canonical() << "\n"
        << o.requested_depth() << " " << o.stabilized_to() << "\n"
        << o.alphabet().decode(o.sample()) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

inline OracleRef obtain_oracle(const SubshiftSpec& spec, std::size_t depth, std::ostream& log,
                               bool use_cache = true)
{
  if (use_cache) {
    if (auto hit = cache_load(spec, depth)) {
      log << "cache hit " << cache_path(spec, depth).string() << "\n";
      return *hit;
    }
  }
  auto o = build_oracle(spec, depth);
  if (use_cache) {
    cache_store(*o);
    log << "cache store " << cache_path(spec, depth).string() << "\n";
  }
  return o;
}

// ---- reports -----------------------------------------------------------

struct Report {
  ordered_json json;
  std::string tsv;   // empty when the command has no tabular form
};

inline ordered_json header(const std::string& command, const LanguageOracle& o)
{
  ordered_json j;
  j["schema_version"] = schema_version;
  j["command"] = command;
  j["spec"] = {{"name", o.spec().name},
               {"kind", o.spec().kind()},
               {"canonical", o.spec().canonical()},
               {"hash", hex(o.spec_hash())}};
  j["oracle"] = {{"requested_depth", o.requested_depth()},
                 {"certified_depth", o.stabilized_to()},
                 {"unstable", o.unstable()},
                 {"sample_length", o.sample_length()}};
  return j;
}

inline EnumerationOptions enumeration_options(const Params& p)
{
  EnumerationOptions e;
  e.cap = p.cap;
  e.mode = p.enumeration == "exhaustive" ? EnumerationMode::exhaustive
                                         : EnumerationMode::propagation;
  return e;
}

// "shift^j" when the code is a shift power, otherwise "code".
inline std::string describe(const Automorphism& a)
{
  const auto& o = a.oracle();
  const long r = static_cast<long>(a.range());
  for (long j = -r; j <= r; ++j)
    if (equals(a, shift_power(o, j)))
      return j == 0 ? "id" : "shift^" + std::to_string(j);
  return "code";
}

inline ordered_json to_json(const Automorphism& a)
{
  auto table = [](const LocalRule& r) {
    std::string s;
    for (Symbol x : r.table())
      s += r.oracle()->alphabet().symbol(x);
    return s;
  };
  Automorphism n = normalize(a);
  return {{"key", canonical_key(a)},
          {"label", describe(a)},
          {"range", n.range()},
          {"forward", table(n.forward.rule)},
          {"inverse", table(n.inverse.rule)},
          {"verified_depth", a.verified_depth()}};
}

inline ordered_json to_json(const Partition& p)
{
  ordered_json j = ordered_json::array();
  for (const auto& b : p)
    j.push_back(b);
  return j;
}

inline std::string fmt(double x)
{
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

inline Report run_complexity(const ExperimentConfig& cfg, const OracleRef& o)
{
  const auto& p = cfg.params;
  Report r;
  r.json = header("complexity", *o);
  const std::size_t n_max = std::min(p.max_n, o->stabilized_to());
  auto prof = complexity_series(*o, n_max);
  auto periodic_at = detect_eventual_periodicity(prof);
  const bool periodic = is_periodic(*o);
  r.json["periodic"] = periodic;
  r.json["periodicity_flagged_at"] = periodic_at ? ordered_json(*periodic_at) : ordered_json();
  if (periodic_at)
    r.json["eventual_period"] = eventual_period(o->sample(), 0, prof.at(*periodic_at))
                                    .value_or(0);

  auto full = complexity_series(*o, o->stabilized_to());
  ordered_json rows = ordered_json::array();
  r.tsv = "n\tP\tk_n\td_n\n";
  for (std::size_t n = 1; n <= n_max; ++n) {
    ordered_json row{{"n", n}, {"P", prof.at(n)}};
    std::string kn = "NA", dn = "NA";
    if (!periodic) {
      auto k = k_n(*o, n);
      if (k.value) {
        row["k_n"] = *k.value;
        kn = std::to_string(*k.value);
      } else {
        row["k_n"] = nullptr;
        row["k_n_lower_bound"] = k.lower_bound;
      }
    } else {
      row["k_n"] = nullptr;
    }
    try {
      auto d = doubling_time(full, n);
      row["d_n"] = d;
      dn = std::to_string(d);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::horizon)
        throw;
      row["d_n"] = nullptr;
    }
    rows.push_back(row);
    r.tsv += std::to_string(n) + "\t" + std::to_string(prof.at(n)) + "\t" + kn + "\t" + dn + "\n";
  }
  r.json["rows"] = rows;
  if (n_max >= 3) {
    auto g = growth_diagnostics(prof, p.beta, p.d);
    r.json["diagnostics"] = {{"beta", p.beta},
                             {"d", p.d},
                             {"log_ratio_tail_sup", g.log_tail_sup.back()},
                             {"log_trend", to_string(g.log_trend)},
                             {"poly_ratio_tail_sup", g.poly_tail_sup.back()},
                             {"poly_trend", to_string(g.poly_trend)}};
  }
  return r;
}

inline Report run_extensions(const ExperimentConfig& cfg, const OracleRef& o)
{
  Report r;
  r.json = header("extensions", *o);
  const std::size_t n = cfg.params.length;
  r.json["length"] = n;
  ordered_json rows = ordered_json::array();
  r.tsv = "word\tright\tleft\tright_capped\tleft_capped\n";
  for (const Word& w : o->factors(n)) {
    auto e = unique_extension_count(*o, w);
    auto text = o->alphabet().decode(w);
    rows.push_back({{"word", text},
                    {"right", e.right},
                    {"left", e.left},
                    {"right_capped", e.right_capped},
                    {"left_capped", e.left_capped}});
    r.tsv += text + "\t" + std::to_string(e.right) + "\t" + std::to_string(e.left) + "\t" +
             (e.right_capped ? "1" : "0") + "\t" + (e.left_capped ? "1" : "0") + "\n";
  }
  r.json["words"] = rows;
  return r;
}

inline Report run_automorphisms(const ExperimentConfig& cfg, const OracleRef& o)
{
  Report r;
  r.json = header("automorphisms", *o);
  ordered_json per_range = ordered_json::array();
  r.tsv = "R\tcount\tendomorphisms\tdepth\n";
  for (std::size_t R = 0; R <= cfg.params.range; ++R) {
    auto res = enumerate_automorphisms(o, R, enumeration_options(cfg.params));
    ordered_json list = ordered_json::array();
    for (const auto& a : res.automorphisms)
      list.push_back(to_json(a));
    per_range.push_back({{"R", R},
                         {"count", res.automorphisms.size()},
                         {"endomorphisms", res.endomorphisms},
                         {"verified_depth", res.depth},
                         {"automorphisms", list}});
    r.tsv += std::to_string(R) + "\t" + std::to_string(res.automorphisms.size()) + "\t" +
             std::to_string(res.endomorphisms) + "\t" + std::to_string(res.depth) + "\n";
  }
  r.json["enumeration"] = cfg.params.enumeration;
  r.json["ranges"] = per_range;
  return r;
}

inline Report run_group(const ExperimentConfig& cfg, const OracleRef& o)
{
  const auto& p = cfg.params;
  Report r;
  r.json = header("group", *o);
  auto mode = p.mark == "step2" ? MarkMode::step2 : MarkMode::step1;
  auto mw = build_marked_word(*o, p.range, mode);
  const Word& wt = mw.extended;
  auto rd = max_return_gap(*o, wt);
  auto s_auts = enumerate_automorphisms(o, wt.size() / 2, enumeration_options(p));
  auto s_w = stabilizer_generators(*o, wt, s_auts.automorphisms);
  std::vector<CylinderAction> actions;
  for (const auto& phi : s_w)
    actions.push_back(cylinder_action(phi, rd));
  auto group = group_closure(actions, rd);

  auto prof = complexity_series(*o, rd.max_gap);
  bool divides = true;
  for (const auto& a : actions)
    divides = divides && order_divisibility_check(a, prof.at(rd.max_gap));
  if (!divides)
    fail(ErrorKind::contract_violation, "a cylinder action order does not divide P(K_w)!");

  const auto& A = o->alphabet();
  ordered_json gens = ordered_json::array();
  for (const auto& phi : s_w)
    gens.push_back(to_json(phi));
  r.json["marked_word"] = {{"mark", p.mark},
                           {"R", p.range},
                           {"w", A.decode(mw.core)},
                           {"w_tilde", A.decode(wt)},
                           {"extension", mw.extension}};
  r.json["K_w"] = rd.max_gap;
  r.json["sample_gap"] = rd.sample_gap;
  r.json["U_w_size"] = rd.return_words.size();
  r.json["stabilizer_range"] = wt.size() / 2;
  r.json["S_w"] = gens;
  r.json["G_w_order"] = group.order();
  r.json["order_divides_P_K_factorial"] = divides;

  auto aut = enumerate_automorphisms(o, p.range, enumeration_options(p)).automorphisms;
  auto rep = coset_condition_check(aut, mw, group);
  r.json["coset_condition"] = {{"R", p.range},
                               {"aut_count", aut.size()},
                               {"equal", rep.equal},
                               {"image_partition", to_json(rep.image_partition)},
                               {"coset_partition", to_json(rep.coset_partition)},
                               {"f_R", rep.image_partition.size()}};
  if (!rep.equal)
    fail(ErrorKind::contract_violation, "image partition differs from the coset partition");

  if (mode == MarkMode::step2) {
    auto counts = coset_counts(o, mw, enumeration_options(p));
    r.json["f"] = counts.f;
    r.json["cover_bound"] = counts.cover_bound;
    r.json["within_cover_bound"] = counts.within_cover_bound;
  }
  return r;
}

inline Report run_folner(const ExperimentConfig& cfg, const OracleRef& o)
{
  const auto& p = cfg.params;
  Report r;
  r.json = header("folner", *o);
  FolnerOptions opt;
  opt.mode = p.mode == "strict" ? FolnerMode::strict : FolnerMode::empirical;
  opt.range = p.range;
  opt.window_start = p.window_start;
  opt.enumeration = enumeration_options(p);
  BoundParams bp{p.beta, 1.0, p.d, p.lambda};
  r.json["mode"] = p.mode;
  if (opt.mode == FolnerMode::strict) {
    auto feas = strict_feasibility(*o, p.k, bp);
    r.json["strict_feasibility"] = {
        {"feasible", feas.feasible},
        {"reason", feas.reason},
        {"threshold", feas.threshold ? ordered_json(*feas.threshold) : ordered_json()},
        {"required_depth", feas.required_depth}};
    if (!feas.feasible)
      return r;
  }
  auto fc = folner_candidate(o, p.k, bp, opt);
  const auto& A = o->alphabet();
  r.json["k"] = fc.k;
  r.json["R"] = fc.range;
  r.json["M"] = fc.window_start;
  r.json["M_provenance"] = fc.provenance;
  r.json["w_tilde"] = A.decode(fc.marked.extended);
  r.json["K_w"] = fc.returns.max_gap;
  r.json["U_w_size"] = fc.returns.return_words.size();
  r.json["G_w_order"] = fc.group.order();
  r.json["f"] = fc.f;
  r.json["F_size"] = fc.elements.size();
  ordered_json members = ordered_json::array();
  for (const auto& a : fc.elements)
    members.push_back(canonical_key(a));
  r.json["F_keys"] = members;
  r.json["bound"] = fc.bound;
  r.json["window_inequality"] = fc.window_inequality;

  ordered_json ratios = ordered_json::array();
  std::vector<Automorphism> aut_k{identity(o)};
  if (fc.k > 0)
    aut_k = enumerate_automorphisms(o, fc.k, opt.enumeration).automorphisms;
  for (const auto& phi : aut_k) {
    auto ratio = folner_ratio(fc, phi);
    ratios.push_back({{"phi", canonical_key(phi)},
                      {"label", describe(phi)},
                      {"symmetric_difference", ratio.symmetric_difference},
                      {"size", ratio.size},
                      {"ratio", ratio.value},
                      {"within_bound", ratio.value <= fc.bound + comparison_tolerance}});
  }
  r.json["ratios"] = ratios;
  return r;
}

inline Report run_growth(const ExperimentConfig& cfg, const OracleRef& o)
{
  const auto& p = cfg.params;
  Report r;
  r.json = header("growth", *o);
  std::vector<Automorphism> gens;
  if (p.generators == "shift") {
    gens = {shift_power(o, 1), shift_power(o, -1)};
  } else {
    for (auto& a : enumerate_automorphisms(o, p.range, enumeration_options(p)).automorphisms)
      if (!equals(a, identity(o)))
        gens.push_back(std::move(a));
    if (gens.empty())
      gens.push_back(identity(o));
  }
  auto g = subgroup_growth(gens, p.growth_n);
  r.json["generators"] = g.generators;
  r.json["gamma"] = g.gamma;
  r.tsv = "n\tgamma\n";
  for (std::size_t n = 1; n <= g.gamma.size(); ++n)
    r.tsv += std::to_string(n) + "\t" + std::to_string(g.at(n)) + "\n";
  return r;
}

// Bound arithmetic only; needs no oracle.
inline Report run_bounds(const ExperimentConfig& cfg)
{
  const auto& p = cfg.params;
  Report r;
  r.json["schema_version"] = schema_version;
  r.json["command"] = "bounds";
  r.json["beta"] = p.beta;
  r.json["lambda"] = p.lambda;
  r.json["d"] = p.d;
  r.json["step_bound"] = nilpotent_step_bound(p.d);
  ordered_json rows = ordered_json::array();
  r.tsv = "n\tD_n\tasymptotic\tratio\n";
  for (std::size_t n = 1; n <= p.max_n; ++n) {
    auto dn = reference_doubling_time(n, p.beta, p.lambda);
    double a = reference_doubling_asymptotic(static_cast<double>(n), p.beta, p.lambda);
    rows.push_back({{"n", n}, {"D_n", dn}, {"asymptotic", a}, {"ratio", dn / a}});
    r.tsv += std::to_string(n) + "\t" + std::to_string(dn) + "\t" + fmt(a) + "\t" +
             fmt(dn / a) + "\n";
  }
  r.json["doubling"] = rows;
  if (p.beta < 0.5)
    r.json["window_exponent"] = window_exponent(p.beta);
  return r;
}

inline int exit_code(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::contract_violation:
      return falsified;
    case ErrorKind::invalid_spec:
    case ErrorKind::precondition:
    case ErrorKind::not_in_language:
    case ErrorKind::undefined_on_periodic:
      return usage;
    default:
      return resource;
  }
}

inline std::string render(const Report& r, const std::string& format)
{
  if (format == "tsv") {
    if (r.tsv.empty())
      throw ConfigError("this command has no tsv form; use --format json");
    return r.tsv;
  }
  return r.json.dump(2) + "\n";
}

} // namespace workbench
