#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subshift/error.hpp"
#include "subshift/oracle.hpp"
#include "subshift/word.hpp"

namespace subshift {

// Sliding block code of range R: table[i] is the output symbol for the i-th
// word (canonical order) of L_{2R+1}.
class LocalRule {
public:
  LocalRule(OracleRef oracle, std::size_t range, std::vector<Symbol> table)
  : oracle_(std::move(oracle)), range_(range), table_(std::move(table))
  {
    require(table_.size() == oracle_->complexity(window()), ErrorKind::precondition,
            "rule table must be total on L_{2R+1}");
  }

  const OracleRef& oracle() const { return oracle_; }
  std::size_t range() const { return range_; }
  std::size_t window() const { return 2 * range_ + 1; }
  const std::vector<Symbol>& table() const { return table_; }

  std::optional<Symbol> try_at(const Word& window_word) const
  {
    auto idx = oracle_->index_of(window_word);
    if (!idx)
      return std::nullopt;
    return table_[*idx];
  }

  // Applies the rule to every window; no language check on the input.
  std::optional<Word> try_apply(const Word& w) const
  {
    if (w.size() < window())
      return std::nullopt;
    const auto& lv = oracle_->level(window());
    Word out;
    out.reserve(w.size() - 2 * range_);
    for (std::size_t i = 0; i + window() <= w.size(); ++i) {
      auto it = lv.index.find(w.substr(i, window()));
      if (it == lv.index.end())
        return std::nullopt;
      out.push_back(table_[it->second]);
    }
    return out;
  }

  friend bool operator==(const LocalRule& a, const LocalRule& b)
  { return a.range_ == b.range_ && a.table_ == b.table_ && a.oracle_ == b.oracle_; }

private:
  OracleRef oracle_;
  std::size_t range_;
  std::vector<Symbol> table_;
};

// A rule whose images of L_m land in L_{m-2R} for every m <= verified_depth.
struct Endomorphism {
  LocalRule rule;
  std::size_t verified_depth = 0;

  std::size_t range() const { return rule.range(); }
};

// Paired forward and inverse codes, both stored at the same range R.
struct Automorphism {
  Endomorphism forward;
  Endomorphism inverse;

  std::size_t range() const { return forward.range(); }
  std::size_t verified_depth() const
  { return std::min(forward.verified_depth, inverse.verified_depth); }
  const OracleRef& oracle() const { return forward.rule.oracle(); }

  Automorphism inverted() const { return Automorphism{inverse, forward}; }
};

// The word phi(w) of length |w| - 2R.
inline Word apply_to_word(const LocalRule& rule, const Word& w)
{
  require(w.size() >= rule.window(), ErrorKind::range,
          "word of length " + std::to_string(w.size()) + " is shorter than the window " +
          std::to_string(rule.window()));
  require(rule.oracle()->plausibly_contains(w), ErrorKind::not_in_language,
          "word is not in the language");
  auto out = rule.try_apply(w);
  require(out.has_value(), ErrorKind::not_in_language, "window is not in the language");
  return *out;
}

inline Word apply_to_word(const Endomorphism& e, const Word& w)
{ return apply_to_word(e.rule, w); }

inline Word apply_to_word(const Automorphism& a, const Word& w)
{ return apply_to_word(a.forward.rule, w); }

inline LocalRule identity_rule(const OracleRef& oracle, std::size_t range = 0)
{
  const auto& windows = oracle->factors(2 * range + 1);
  std::vector<Symbol> table;
  table.reserve(windows.size());
  for (const Word& w : windows)
    table.push_back(w[range]);
  return LocalRule(oracle, range, std::move(table));
}

inline LocalRule shift_rule(const OracleRef& oracle, long j)
{
  const std::size_t range = static_cast<std::size_t>(std::labs(j));
  const auto& windows = oracle->factors(2 * range + 1);
  std::vector<Symbol> table;
  table.reserve(windows.size());
  for (const Word& w : windows)
    table.push_back(w[static_cast<std::size_t>(static_cast<long>(range) + j)]);
  return LocalRule(oracle, range, std::move(table));
}

inline Automorphism identity(const OracleRef& oracle, std::size_t range = 0)
{
  Endomorphism e{identity_rule(oracle, range), oracle->stabilized_to()};
  return Automorphism{e, e};
}

// sigma^j as a code of range |j|: output reads the window at offset j.
inline Automorphism shift_power(const OracleRef& oracle, long j)
{
  return Automorphism{Endomorphism{shift_rule(oracle, j), oracle->stabilized_to()},
                      Endomorphism{shift_rule(oracle, -j), oracle->stabilized_to()}};
}

// Re-expresses the rule on L_{2S+1} by reading the central 2R+1 window.
inline LocalRule promote_range(const LocalRule& rule, std::size_t range)
{
  require(range >= rule.range(), ErrorKind::precondition, "cannot promote to a smaller range");
  if (range == rule.range())
    return rule;
  const std::size_t offset = range - rule.range();
  const auto& windows = rule.oracle()->factors(2 * range + 1);
  std::vector<Symbol> table;
  table.reserve(windows.size());
  for (const Word& w : windows) {
    auto s = rule.try_at(w.substr(offset, rule.window()));
    require(s.has_value(), ErrorKind::contract_violation, "language is not factorial");
    table.push_back(*s);
  }
  return LocalRule(rule.oracle(), range, std::move(table));
}

inline Endomorphism promote_range(const Endomorphism& e, std::size_t range)
{ return Endomorphism{promote_range(e.rule, range), e.verified_depth}; }

inline Automorphism promote_range(const Automorphism& a, std::size_t range)
{ return Automorphism{promote_range(a.forward, range), promote_range(a.inverse, range)}; }

// a after b, at range R_a + R_b.
inline LocalRule compose(const LocalRule& a, const LocalRule& b)
{
  require(a.oracle() == b.oracle(), ErrorKind::precondition, "rules over different oracles");
  const std::size_t range = a.range() + b.range();
  const auto& windows = a.oracle()->factors(2 * range + 1);
  std::vector<Symbol> table;
  table.reserve(windows.size());
  for (const Word& w : windows) {
    auto mid = b.try_apply(w);
    std::optional<Symbol> s;
    if (mid)
      s = a.try_at(*mid);
    require(s.has_value(), ErrorKind::contract_violation,
            "inner code maps a certified window outside the language");
    table.push_back(*s);
  }
  return LocalRule(a.oracle(), range, std::move(table));
}

inline Endomorphism compose(const Endomorphism& a, const Endomorphism& b)
{
  // b sends L_m into L_{m-2R_b}; a is trusted on those images up to its depth.
  std::size_t depth = std::min(b.verified_depth, a.verified_depth + 2 * b.range());
  return Endomorphism{compose(a.rule, b.rule), depth};
}

inline Automorphism compose(const Automorphism& a, const Automorphism& b)
{ return Automorphism{compose(a.forward, b.forward), compose(b.inverse, a.inverse)}; }

// Agreement on every window of the common promoted range.
inline bool equals(const LocalRule& a, const LocalRule& b)
{
  std::size_t range = std::max(a.range(), b.range());
  return promote_range(a, range).table() == promote_range(b, range).table();
}

inline bool equals(const Automorphism& a, const Automorphism& b)
{ return equals(a.forward.rule, b.forward.rule); }

// Smallest r such that the output depends only on the central 2r+1 window.
inline std::size_t minimal_range(const LocalRule& rule)
{
  const auto& windows = rule.oracle()->factors(rule.window());
  for (std::size_t r = 0; r < rule.range(); ++r) {
    const std::size_t offset = rule.range() - r;
    std::vector<int> seen(rule.oracle()->complexity(2 * r + 1), -1);
    bool ok = true;
    for (std::size_t i = 0; i < windows.size() && ok; ++i) {
      auto idx = rule.oracle()->index_of(windows[i].substr(offset, 2 * r + 1));
      int& slot = seen[*idx];
      if (slot < 0)
        slot = rule.table()[i];
      else
        ok = slot == rule.table()[i];
    }
    if (ok)
      return r;
  }
  return rule.range();
}

// The same code written at a smaller range r (which must be a valid range).
inline LocalRule restrict_range(const LocalRule& rule, std::size_t r)
{
  require(r <= rule.range(), ErrorKind::precondition, "restriction must shrink the range");
  if (r == rule.range())
    return rule;
  const std::size_t offset = rule.range() - r;
  const auto& windows = rule.oracle()->factors(rule.window());
  std::vector<int> table(rule.oracle()->complexity(2 * r + 1), -1);
  for (std::size_t i = 0; i < windows.size(); ++i) {
    auto idx = *rule.oracle()->index_of(windows[i].substr(offset, 2 * r + 1));
    require(table[idx] < 0 || table[idx] == rule.table()[i], ErrorKind::precondition,
            "rule does not factor through the smaller window");
    table[idx] = rule.table()[i];
  }
  std::vector<Symbol> out;
  out.reserve(table.size());
  for (int s : table) {
    require(s >= 0, ErrorKind::contract_violation, "language is not extendable");
    out.push_back(static_cast<Symbol>(s));
  }
  return LocalRule(rule.oracle(), r, std::move(out));
}

// Both directions written at the least range that serves both.
inline Automorphism normalize(const Automorphism& a)
{
  std::size_t r = std::max(minimal_range(a.forward.rule), minimal_range(a.inverse.rule));
  return Automorphism{Endomorphism{restrict_range(a.forward.rule, r), a.forward.verified_depth},
                      Endomorphism{restrict_range(a.inverse.rule, r), a.inverse.verified_depth}};
}

// Dedup key: equal keys iff the codes agree on the language.
inline std::string canonical_key(const Automorphism& a)
{
  Automorphism n = normalize(a);
  std::string key = std::to_string(n.range()) + ":";
  for (Symbol s : n.forward.rule.table())
    key.push_back(static_cast<char>('0' + s));
  return key;
}

// Canonical order: by range, then by forward table.
inline bool canonical_less(const Automorphism& a, const Automorphism& b)
{
  if (a.range() != b.range())
    return a.range() < b.range();
  return a.forward.rule.table() < b.forward.rule.table();
}

struct EndomorphismCheck {
  std::optional<Endomorphism> accepted;
  std::optional<Word> witness;   // shortest word whose image leaves the language

  explicit operator bool() const { return accepted.has_value(); }
};

namespace detail {

inline bool images_in_language(const LocalRule& rule, std::size_t n, Word* witness)
{
  const auto& oracle = *rule.oracle();
  const auto& target = oracle.level(n - 2 * rule.range());
  for (const Word& w : oracle.factors(n)) {
    auto img = rule.try_apply(w);
    if (!img || !target.index.count(*img)) {
      if (witness)
        *witness = w;
      return false;
    }
  }
  return true;
}

} // namespace detail

// Accepts iff images of L_n land in L_{n-2R} for every 2R+1 <= n <= depth.
// Checking n = depth alone decides acceptance (the language is factorial and
// extendable); the smaller lengths are scanned only to find the shortest
// violating word.
inline EndomorphismCheck is_endomorphism(const LocalRule& rule, std::size_t depth)
{
  require(depth >= rule.window(), ErrorKind::precondition, "depth must be at least 2R+1");
  rule.oracle()->check_depth(depth);
  EndomorphismCheck out;
  if (detail::images_in_language(rule, depth, nullptr)) {
    out.accepted = Endomorphism{rule, depth};
    return out;
  }
  for (std::size_t n = rule.window(); n <= depth; ++n) {
    Word w;
    if (!detail::images_in_language(rule, n, &w)) {
      out.witness = std::move(w);
      break;
    }
  }
  return out;
}

} // namespace subshift
