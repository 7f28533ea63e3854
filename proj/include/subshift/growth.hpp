#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "subshift/block_code.hpp"
#include "subshift/error.hpp"

namespace subshift {

// Ball sizes gamma(1..N) of a symmetric generating set.
struct GrowthSeries {
  std::vector<std::string> generators;   // canonical keys
  std::vector<std::size_t> gamma;        // gamma[n-1] = |ball of radius n|

  std::size_t at(std::size_t n) const { return n == 0 ? 1 : gamma.at(n - 1); }
};

// Breadth-first search in the Cayley graph, deduplicating elements by their
// canonical key. Composites of radius n have range at most n * R, so the
// oracle must be certified to 2nR + 1.
inline GrowthSeries subgroup_growth(const std::vector<Automorphism>& generators, std::size_t max_n)
{
  require(!generators.empty(), ErrorKind::precondition, "empty generating set");
  GrowthSeries out;
  std::vector<Automorphism> gens;
  std::unordered_set<std::string> gen_keys;
  for (const auto& g : generators) {
    gens.push_back(normalize(g));
    out.generators.push_back(canonical_key(gens.back()));
    gen_keys.insert(out.generators.back());
  }
  for (const auto& g : gens)
    require(gen_keys.count(canonical_key(g.inverted())) == 1, ErrorKind::precondition,
            "generating set is not closed under inverses");

  const OracleRef& oracle = gens.front().oracle();
  Automorphism id = identity(oracle);
  std::unordered_set<std::string> seen{canonical_key(id)};
  std::vector<Automorphism> frontier{id};
  for (std::size_t n = 1; n <= max_n; ++n) {
    std::vector<Automorphism> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        std::size_t need = 2 * (g.range() + x.range()) + 1;
        require(need <= oracle->stabilized_to(), ErrorKind::range,
                "composite range " + std::to_string(g.range() + x.range()) +
                " exceeds the certified windows (depth " +
                std::to_string(oracle->stabilized_to()) + ")");
        Automorphism y = normalize(compose(g, x));
        if (seen.insert(canonical_key(y)).second)
          next.push_back(std::move(y));
      }
    out.gamma.push_back(seen.size());
    frontier = std::move(next);
  }

  for (std::size_t a = 1; a <= max_n; ++a)
    for (std::size_t b = 1; a + b <= max_n; ++b)
      require(out.at(a + b) <= out.at(a) * out.at(b), ErrorKind::contract_violation,
              "growth function is not submultiplicative");
  return out;
}

// Closure of a finite set of automorphisms under composition, as block codes.
// Used to realise G_w as a set of automorphisms (not only as actions).
inline std::vector<Automorphism> automorphism_closure(const std::vector<Automorphism>& generators,
                                                      const OracleRef& oracle,
                                                      std::size_t cap = 100'000)
{
  std::vector<Automorphism> elements{identity(oracle)};
  std::unordered_set<std::string> seen{canonical_key(elements.front())};
  std::vector<Automorphism> gens;
  for (const auto& g : generators)
    gens.push_back(normalize(g));
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (const auto& g : gens) {
      Automorphism y = normalize(compose(g, elements[i]));
      if (seen.insert(canonical_key(y)).second) {
        if (elements.size() >= cap)
          throw CapExceeded("automorphism closure exceeded " + std::to_string(cap) +
                            " elements", static_cast<double>(elements.size()));
        elements.push_back(std::move(y));
      }
    }
  return elements;
}

// floor((-1 + sqrt(8d - 7)) / 2), evaluated with an exact integer square root.
inline std::uint64_t nilpotent_step_bound(std::uint64_t d)
{
  require(d >= 1, ErrorKind::precondition, "d must be >= 1");
  const std::uint64_t m = 8 * d - 7;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(m)));
  while (r * r > m)
    --r;
  while ((r + 1) * (r + 1) <= m)
    ++r;
  return (r - 1) / 2;
}

} // namespace subshift
