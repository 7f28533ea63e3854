#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "subshift/block_code.hpp"
#include "subshift/complexity.hpp"
#include "subshift/error.hpp"
#include "subshift/oracle.hpp"

namespace subshift {

// Return data of a word w: K_w, the largest gap between consecutive
// occurrences of w, and U_w = {u : wuw in L(X), |u| <= K_w} in shortlex order.
struct ReturnData {
  Word w;
  std::size_t max_gap = 0;                 // K_w
  std::vector<Word> return_words;          // U_w
  std::size_t sample_gap = 0;              // largest gap seen on the oracle's sample

  std::size_t index_of(const Word& u) const
  {
    auto it = std::lower_bound(return_words.begin(), return_words.end(), u, ShortlexLess{});
    require(it != return_words.end() && *it == u, ErrorKind::contract_violation,
            "word is not a return word");
    return static_cast<std::size_t>(it - return_words.begin());
  }
};

// K_w is certified from the factor sets: it is the least K such that every
// factor of length K + |w| - 1 contains w. The largest gap on the sample is
// kept as an independent cross-check.
inline ReturnData max_return_gap(const LanguageOracle& oracle, const Word& w)
{
  require(!w.empty() && oracle.contains(w), ErrorKind::not_in_language,
          "word is not a certified factor");
  ReturnData rd;
  rd.w = w;

  bool found = false;
  for (std::size_t k = 1; k + w.size() - 1 <= oracle.stabilized_to(); ++k) {
    const auto& words = oracle.factors(k + w.size() - 1);
    bool all = std::all_of(words.begin(), words.end(),
                           [&](const Word& v) { return v.contains(w); });
    if (all) {
      rd.max_gap = k;
      found = true;
      break;
    }
  }
  require(found, ErrorKind::not_found,
          "word does not recur within the certified depth (minimality violated or depth "
          "too small)");

  const Word& sample = oracle.sample();
  std::size_t last = std::string::npos;
  for (std::size_t pos = sample.raw().find(w.raw()); pos != std::string::npos;
       pos = sample.raw().find(w.raw(), pos + 1)) {
    if (last != std::string::npos)
      rd.sample_gap = std::max(rd.sample_gap, pos - last);
    last = pos;
  }

  const std::size_t longest = 2 * w.size() + rd.max_gap;
  oracle.check_depth(longest);
  for (std::size_t len = 2 * w.size(); len <= longest; ++len)
    for (const Word& v : oracle.factors(len))
      if (v.starts_with(w) && v.ends_with(w))
        rd.return_words.push_back(v.substr(w.size(), len - 2 * w.size()));
  std::sort(rd.return_words.begin(), rd.return_words.end(), ShortlexLess{});
  return rd;
}

// phi[w]_0^+ is contained in [w]_0^+: every certified context of w of radius
// R is sent to w.
inline bool stabilizes(const Automorphism& phi, const Word& w)
{
  const std::size_t r = phi.range();
  const auto& oracle = *phi.oracle();
  for (const Word& ctx : oracle.factors(w.size() + 2 * r)) {
    if (ctx.view(r, w.size()) != w.view())
      continue;
    auto img = phi.forward.rule.try_apply(ctx);
    if (!img || *img != w)
      return false;
  }
  return true;
}

// S_w: the given automorphisms (of range <= floor(|w|/2)) that map [w] into
// itself. The result is checked to be closed under inverses.
inline std::vector<Automorphism> stabilizer_generators(const LanguageOracle& oracle,
                                                       const Word& w,
                                                       const std::vector<Automorphism>& auts)
{
  require(oracle.contains(w), ErrorKind::not_in_language, "word is not a certified factor");
  std::vector<Automorphism> out;
  for (const Automorphism& phi : auts) {
    require(phi.range() <= w.size() / 2, ErrorKind::precondition,
            "automorphism range exceeds floor(|w|/2)");
    if (stabilizes(phi, w)) {
      require(stabilizes(phi.inverted(), w), ErrorKind::contract_violation,
              "S_w is not closed under inverses");
      out.push_back(phi);
    }
  }
  return out;
}

using Permutation = std::vector<std::uint32_t>;

inline Permutation identity_permutation(std::size_t n)
{
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

// (a after b)[i] = a[b[i]]
inline Permutation compose(const Permutation& a, const Permutation& b)
{
  Permutation out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    out[i] = a[b[i]];
  return out;
}

inline bool is_bijection(const Permutation& p)
{
  std::vector<bool> hit(p.size(), false);
  for (auto v : p) {
    if (v >= p.size() || hit[v])
      return false;
    hit[v] = true;
  }
  return true;
}

// The action u -> v of an automorphism on U_w, where phi[wuw] lies in [wvw].
struct CylinderAction {
  std::string source;     // canonical key of the automorphism, if any
  Permutation mapping;    // indices into ReturnData::return_words
};

// For each u, v is read off the image of every R-padded context of wuw; all
// paddings must agree.
inline CylinderAction cylinder_action(const Automorphism& phi, const ReturnData& rd)
{
  const Word& w = rd.w;
  const std::size_t r = phi.range();
  require(r <= w.size() / 2, ErrorKind::precondition, "range exceeds floor(|w|/2)");
  const auto& oracle = *phi.oracle();

  CylinderAction act;
  act.source = canonical_key(phi);
  act.mapping.reserve(rd.return_words.size());
  for (const Word& u : rd.return_words) {
    const Word core = w + u + w;
    std::optional<Word> image;
    for (const Word& ctx : oracle.factors(core.size() + 2 * r)) {
      if (ctx.view(r, core.size()) != core.view())
        continue;
      auto img = phi.forward.rule.try_apply(ctx);
      require(img.has_value() && img->starts_with(w) && img->ends_with(w),
              ErrorKind::contract_violation, "automorphism does not preserve [w]");
      if (!image)
        image = img;
      require(*image == *img, ErrorKind::contract_violation,
              "cylinder image depends on the padding");
    }
    require(image.has_value(), ErrorKind::contract_violation, "return word has no context");
    act.mapping.push_back(
        static_cast<std::uint32_t>(rd.index_of(image->substr(w.size(), u.size()))));
  }
  require(is_bijection(act.mapping), ErrorKind::contract_violation,
          "cylinder action is not a bijection");
  return act;
}

// Finite group of actions on U_w, elements sorted.
struct FiniteGroup {
  std::vector<Permutation> elements;
  std::size_t generator_count = 0;
  ReturnData returns;

  std::size_t order() const { return elements.size(); }
  bool contains(const Permutation& p) const
  { return std::binary_search(elements.begin(), elements.end(), p); }
};

// Breadth-first closure of the generators under composition. Finite
// permutation groups need no explicit inverses.
inline FiniteGroup group_closure(const std::vector<CylinderAction>& generators,
                                 const ReturnData& rd, std::size_t cap = 1'000'000)
{
  const std::size_t degree = rd.return_words.size();
  for (const auto& g : generators)
    require(g.mapping.size() == degree && is_bijection(g.mapping), ErrorKind::precondition,
            "generator is not a permutation of U_w");

  std::set<Permutation> seen{identity_permutation(degree)};
  std::deque<Permutation> queue{identity_permutation(degree)};
  while (!queue.empty()) {
    Permutation x = std::move(queue.front());
    queue.pop_front();
    for (const auto& g : generators) {
      Permutation y = compose(g.mapping, x);
      if (seen.insert(y).second) {
        if (seen.size() > cap)
          throw CapExceeded("group closure exceeded " + std::to_string(cap) + " elements",
                            static_cast<double>(seen.size()));
        queue.push_back(std::move(y));
      }
    }
  }
  FiniteGroup g;
  g.elements.assign(seen.begin(), seen.end());
  g.generator_count = generators.size();
  g.returns = rd;
  return g;
}

// Prime factorisation of the order of a permutation (lcm of cycle lengths).
inline std::map<std::uint64_t, unsigned> permutation_order_factors(const Permutation& p)
{
  std::map<std::uint64_t, unsigned> out;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i])
      continue;
    std::uint64_t len = 0;
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      ++len;
    }
    for (std::uint64_t q = 2; q * q <= len; ++q) {
      unsigned e = 0;
      while (len % q == 0) {
        len /= q;
        ++e;
      }
      if (e)
        out[q] = std::max(out[q], e);
    }
    if (len > 1)
      out[len] = std::max(out[len], 1u);
  }
  return out;
}

// Exponent of the prime p in n! (Legendre).
inline std::uint64_t factorial_valuation(std::uint64_t n, std::uint64_t p)
{
  std::uint64_t v = 0;
  for (std::uint64_t q = p; q <= n; q *= p) {
    v += n / q;
    if (q > n / p)
      break;
  }
  return v;
}

// True iff the order of the action divides P(K_w)!, i.e. phi^{P(K_w)!} acts
// trivially. The factorial is never formed.
inline bool order_divisibility_check(const CylinderAction& act, std::uint64_t p_of_k)
{
  for (auto [prime, exp] : permutation_order_factors(act.mapping))
    if (factorial_valuation(p_of_k, prime) < exp)
      return false;
  return true;
}

inline bool order_divisibility_check(const Automorphism& phi, const ReturnData& rd,
                                     const ComplexityProfile& profile)
{
  return order_divisibility_check(cylinder_action(phi, rd), profile.at(rd.max_gap));
}

} // namespace subshift
