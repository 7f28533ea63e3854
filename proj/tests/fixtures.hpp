#pragma once

#include <map>
#include <utility>

#include "subshift/subshift.hpp"

namespace fixtures {

using namespace subshift;

// Oracles are immutable, so tests share one per (spec, depth).
inline OracleRef shared(const SubshiftSpec& spec, std::size_t depth)
{
  static std::map<std::pair<std::uint64_t, std::size_t>, OracleRef> cache;
  auto& slot = cache[{spec.hash(), depth}];
  if (!slot)
    slot = build_oracle(spec, depth);
  return slot;
}

inline OracleRef fibonacci(std::size_t depth = 200)
{ return shared(substitution_spec("fibonacci", "01", {"01", "0"}), depth); }

inline OracleRef thue_morse(std::size_t depth = 200)
{ return shared(substitution_spec("thue-morse", "01", {"01", "10"}), depth); }

inline OracleRef period_doubling(std::size_t depth = 200)
{ return shared(substitution_spec("period-doubling", "01", {"01", "00"}), depth); }

inline OracleRef sturmian_213(std::size_t depth = 120)
{ return shared(sturmian_spec("sturmian-213", "ab", {2, 1, 3}), depth); }

inline OracleRef periodic_01(std::size_t depth = 40)
{ return shared(periodic_spec("periodic-01", "01", "01"), depth); }

// Exchange 0 <-> 1 as a range-0 automorphism.
inline Automorphism exchange(const OracleRef& o)
{
  LocalRule r(o, 0, {1, 0});
  return Automorphism{Endomorphism{r, o->stabilized_to()}, Endomorphism{r, o->stabilized_to()}};
}

inline Word w(const OracleRef& o, std::string_view text) { return o->alphabet().encode(text); }
inline std::string str(const OracleRef& o, const Word& x) { return o->alphabet().decode(x); }

} // namespace fixtures
