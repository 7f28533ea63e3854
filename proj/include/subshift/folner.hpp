#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "subshift/block_code.hpp"
#include "subshift/complexity.hpp"
#include "subshift/coset.hpp"
#include "subshift/cylinder.hpp"
#include "subshift/enumerate.hpp"
#include "subshift/error.hpp"
#include "subshift/growth.hpp"

namespace subshift {

inline constexpr double comparison_tolerance = 1e-9;

// Exponent (2 beta - 1) / (2 - 2 beta) of the slow-growth window.
inline double window_exponent(double beta) { return (2 * beta - 1) / (2 - 2 * beta); }

// Least M in [ceil(N/3), N - k] with f(M + k) <= f(M) exp(M^((2b-1)/(2-2b))).
// f holds f(1..N). Preconditions: beta < 1/2, f nondecreasing and
// f(N) <= exp(N^(b/(1-b))).
inline std::optional<std::size_t> find_slow_window(std::span<const double> f, std::size_t k,
                                                   double beta)
{
  const std::size_t n = f.size();
  require(beta > 0 && beta < 0.5, ErrorKind::precondition, "beta must lie in (0, 1/2)");
  require(n >= 1 && k < n, ErrorKind::precondition, "need 0 <= k < N");
  auto at = [&](std::size_t i) { return f[i - 1]; };
  for (std::size_t i = 1; i < n; ++i)
    require(at(i) <= at(i + 1), ErrorKind::precondition,
            "f is not nondecreasing at " + std::to_string(i));
  const double cap = std::exp(std::pow(static_cast<double>(n), beta / (1 - beta)));
  require(at(n) <= cap * (1 + comparison_tolerance), ErrorKind::precondition,
          "f(N) exceeds exp(N^(beta/(1-beta)))");

  const double ex = window_exponent(beta);
  for (std::size_t m = (n + 2) / 3; m + k <= n; ++m) {
    if (m == 0)
      continue;
    double factor = std::exp(std::pow(static_cast<double>(m), ex));
    if (at(m + k) <= at(m) * factor * (1 + comparison_tolerance))
      return m;
  }
  return std::nullopt;
}

enum class FolnerMode { empirical, strict };

struct BoundParams {
  double beta = 0.4;
  double c = 1.0;
  unsigned d = 2;
  double lambda = 2.0;
};

struct FolnerOptions {
  FolnerMode mode = FolnerMode::empirical;
  std::size_t range = 1;               // R (empirical)
  std::size_t window_start = 0;        // M (empirical); 0 picks M = 3R - k
  std::size_t stabilizer_range = 0;    // 0: floor(|w~|/2)
  EnumerationOptions enumeration;
};

struct FolnerCandidate {
  std::size_t k = 0;
  std::size_t range = 0;               // R
  std::size_t window_start = 0;        // M
  std::string provenance;              // how M was chosen
  MarkedWord marked;
  ReturnData returns;                  // of w~
  std::size_t stabilizer_range = 0;    // range at which S_{w~} was enumerated
  FiniteGroup group;                   // G_{w~} as actions
  std::vector<Automorphism> group_elements;   // G_{w~} as block codes
  std::vector<std::size_t> f;          // f(1..3R)
  std::vector<Automorphism> representatives;  // phi_i, one per coset
  std::vector<Automorphism> elements;  // F_k, canonical key order
  std::vector<std::string> keys;       // sorted keys of F_k
  double bound = 0;                    // 2 exp(M^ex) - 2
  bool window_inequality = false;      // f(M + k) <= f(M) exp(M^ex)

  std::size_t f_at(std::size_t n) const { return f.at(n - 1); }
  bool contains(const Automorphism& a) const
  { return std::binary_search(keys.begin(), keys.end(), canonical_key(a)); }
};

struct StrictFeasibility {
  bool feasible = false;
  std::string reason;
  std::optional<std::size_t> threshold;   // N with P(n) <= exp(n^b / 4^(b/(1-b))) on [N, depth]
  std::optional<std::size_t> length;      // n
  std::size_t range = 0;                  // floor(n^(1-b) / 9)
  std::size_t required_depth = 0;
};

// Checks whether the literal constants of the strict construction can be met
// inside the certified depth.
inline StrictFeasibility strict_feasibility(const LanguageOracle& oracle, std::size_t k,
                                            const BoundParams& params)
{
  StrictFeasibility out;
  const double b = params.beta;
  require(b > 0 && b < 0.5, ErrorKind::precondition, "strict mode needs beta in (0, 1/2)");
  const std::size_t depth = oracle.stabilized_to();
  const double scale = std::pow(4.0, b / (1 - b));

  for (std::size_t n = depth; n >= 1; --n) {
    double p = static_cast<double>(oracle.complexity(n));
    if (p > std::exp(std::pow(static_cast<double>(n), b) / scale))
      break;
    out.threshold = n;
  }
  if (!out.threshold || *out.threshold <= k) {
    out.reason = "no N > k within depth " + std::to_string(depth) +
                 " has P(n) <= exp(n^beta / 4^(beta/(1-beta))) up to the depth";
    return out;
  }

  for (std::size_t n = *out.threshold; n <= depth; ++n) {
    const double reach = std::pow(static_cast<double>(n), 1 - b);
    const auto range = static_cast<std::size_t>(detail::guarded_floor(reach / 9));
    if (range == 0 || !(6.0 * static_cast<double>(range) < reach))
      continue;
    const std::size_t need = n + 12 * range;
    if (need > depth) {
      out.required_depth = need;
      break;
    }
    const auto e = static_cast<std::size_t>(std::ceil(reach));
    for (const Word& w : oracle.factors(n)) {
      auto ext = unique_extension_count(oracle, w, e);
      if (std::min(ext.right, ext.left) >= e) {
        out.feasible = true;
        out.length = n;
        out.range = range;
        out.required_depth = need;
        return out;
      }
    }
  }
  out.reason = "no length n >= N with R = floor(n^(1-beta)/9) >= 1, 6R < n^(1-beta) and a word "
               "extending n^(1-beta) times fits in depth " + std::to_string(depth);
  if (out.required_depth)
    out.reason += " (needs at least " + std::to_string(out.required_depth) + ")";
  return out;
}

namespace detail {

inline std::vector<Automorphism> sorted_by_key(std::vector<Automorphism> v,
                                               std::vector<std::string>* keys_out = nullptr)
{
  std::map<std::string, Automorphism> by_key;
  for (auto& a : v) {
    Automorphism n = normalize(a);
    by_key.emplace(canonical_key(n), std::move(n));
  }
  std::vector<Automorphism> out;
  for (auto& [key, a] : by_key) {
    if (keys_out)
      keys_out->push_back(key);
    out.push_back(std::move(a));
  }
  return out;
}

} // namespace detail

// F_k = union over f(M) cosets phi_i G_{w~}, phi_i in Aut_M, built on a
// step-2 marked word. Strict mode derives R, n and M from the constants and
// throws `infeasible` when they do not fit the certified depth.
inline FolnerCandidate folner_candidate(const OracleRef& oracle, std::size_t k,
                                        const BoundParams& params, const FolnerOptions& opt = {})
{
  FolnerCandidate fc;
  fc.k = k;
  std::size_t min_length = 1;
  if (opt.mode == FolnerMode::strict) {
    auto feas = strict_feasibility(*oracle, k, params);
    if (!feas.feasible)
      fail(ErrorKind::infeasible, "strict construction infeasible: " + feas.reason);
    fc.range = feas.range;
    min_length = *feas.length;
  } else {
    fc.range = opt.range;
  }
  require(fc.range >= 1, ErrorKind::precondition, "R must be >= 1");
  require(k <= 3 * fc.range, ErrorKind::precondition, "need k <= 3R");

  fc.marked = build_marked_word(*oracle, fc.range, MarkMode::step2, min_length);
  const Word& wt = fc.marked.extended;

  fc.returns = max_return_gap(*oracle, wt);
  fc.stabilizer_range = opt.stabilizer_range ? std::min(opt.stabilizer_range, wt.size() / 2)
                                             : wt.size() / 2;
  auto s_auts = enumerate_automorphisms(oracle, fc.stabilizer_range, opt.enumeration);
  auto s_w = stabilizer_generators(*oracle, wt, s_auts.automorphisms);

  std::vector<CylinderAction> actions;
  for (const auto& phi : s_w)
    actions.push_back(cylinder_action(phi, fc.returns));
  fc.group = group_closure(actions, fc.returns);
  fc.group_elements = detail::sorted_by_key(automorphism_closure(s_w, oracle));
  require(fc.group_elements.size() == fc.group.order(), ErrorKind::contract_violation,
          "G_w acts unfaithfully on its return words");

  auto counts = coset_counts(oracle, fc.marked, opt.enumeration);
  fc.f = counts.f;

  const double ex = window_exponent(params.beta);
  if (opt.mode == FolnerMode::strict) {
    std::vector<double> fd(fc.f.begin(), fc.f.end());
    auto m = find_slow_window(fd, k, params.beta);
    require(m.has_value(), ErrorKind::contract_violation,
            "no slow-growth window for f on the strict instance");
    fc.window_start = *m;
    fc.provenance = "find_slow_window";
  } else {
    fc.window_start = opt.window_start ? opt.window_start : 3 * fc.range - k;
    fc.provenance = "operator";
  }
  require(fc.window_start >= 1 && fc.window_start + k <= 3 * fc.range, ErrorKind::precondition,
          "need 1 <= M and M + k <= 3R");

  // Representatives: first element (canonical order) of each image class.
  const auto& aut_m = counts.enumerations.at(fc.window_start - 1).automorphisms;
  const std::size_t image_range = fc.marked.extension / 2;
  std::map<Word, const Automorphism*> reps;
  for (const auto& a : aut_m)
    reps.emplace(apply_to_word(promote_range(a, image_range), wt), &a);
  std::vector<Automorphism> rep_list;
  for (auto& [_, a] : reps)
    rep_list.push_back(*a);
  std::sort(rep_list.begin(), rep_list.end(), canonical_less);
  fc.representatives = rep_list;

  std::vector<Automorphism> members;
  for (const auto& phi : fc.representatives)
    for (const auto& g : fc.group_elements)
      members.push_back(compose(phi, g));
  fc.elements = detail::sorted_by_key(std::move(members), &fc.keys);

  for (std::size_t n = 0; n <= k && n <= fc.window_start; ++n) {
    const auto& slice = n == 0 ? std::vector<Automorphism>{identity(oracle)}
                               : counts.enumerations.at(n - 1).automorphisms;
    for (const auto& a : slice)
      require(fc.contains(a), ErrorKind::contract_violation, "Aut_k is not contained in F_k");
  }
  for (const auto& a : aut_m)
    require(fc.contains(a), ErrorKind::contract_violation, "Aut_M is not contained in F_k");

  const double factor = std::exp(std::pow(static_cast<double>(fc.window_start), ex));
  fc.bound = 2 * factor - 2;
  fc.window_inequality = static_cast<double>(fc.f_at(fc.window_start + k)) <=
                         static_cast<double>(fc.f_at(fc.window_start)) * factor *
                             (1 + comparison_tolerance);
  return fc;
}

struct FolnerRatio {
  std::size_t symmetric_difference = 0;
  std::size_t size = 0;
  double value = 0;

  bool equals_fraction(std::size_t num, std::size_t den) const
  { return symmetric_difference * den == num * size; }
};

// |F delta phi F| / |F|, comparing elements by canonical key.
inline FolnerRatio folner_ratio(const std::vector<Automorphism>& set, const Automorphism& phi)
{
  require(!set.empty(), ErrorKind::precondition, "empty set");
  std::unordered_set<std::string> base, moved;
  for (const auto& f : set) {
    base.insert(canonical_key(f));
    moved.insert(canonical_key(compose(phi, f)));
  }
  FolnerRatio r;
  r.size = base.size();
  for (const auto& key : base)
    r.symmetric_difference += moved.count(key) ? 0 : 1;
  for (const auto& key : moved)
    r.symmetric_difference += base.count(key) ? 0 : 1;
  r.value = static_cast<double>(r.symmetric_difference) / static_cast<double>(r.size);
  return r;
}

inline FolnerRatio folner_ratio(const FolnerCandidate& fc, const Automorphism& phi)
{
  require(minimal_range(phi.forward.rule) <= fc.k && minimal_range(phi.inverse.rule) <= fc.k,
          ErrorKind::precondition, "phi is not in Aut_k");
  return folner_ratio(fc.elements, phi);
}

} // namespace subshift
