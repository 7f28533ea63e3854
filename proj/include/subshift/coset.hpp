#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subshift/block_code.hpp"
#include "subshift/complexity.hpp"
#include "subshift/cylinder.hpp"
#include "subshift/enumerate.hpp"
#include "subshift/error.hpp"

namespace subshift {

// Step 1 extends the core 2R times on each side, step 2 extends it 6R times.
enum class MarkMode { step1, step2 };

inline std::size_t extension_for(MarkMode mode, std::size_t range)
{ return mode == MarkMode::step1 ? 2 * range : 6 * range; }

struct MarkedWord {
  Word core;                  // w
  std::size_t extension = 0;  // letters added on each side
  Word extended;              // w~, with w at offset `extension`
  ExtensionCount certificate; // unique-extension counts of w (capped at `extension`)
};

// Finds the shortest, then lexicographically least, word w that extends
// uniquely at least e times to both sides and returns its forced extension.
inline MarkedWord build_marked_word(const LanguageOracle& oracle, std::size_t range, MarkMode mode,
                                   std::size_t min_length = 1)
{
  if (is_periodic(oracle))
    fail(ErrorKind::undefined_on_periodic,
         "marked words are not constructed on periodic shifts");
  const std::size_t e = extension_for(mode, range);
  std::size_t best = 0;
  Word best_word;
  for (std::size_t n = std::max<std::size_t>(1, min_length); n + 2 * e <= oracle.stabilized_to();
       ++n) {
    for (const Word& w : oracle.factors(n)) {
      auto ext = unique_extension_count(oracle, w, e);
      std::size_t m = std::min(ext.right, ext.left);
      if (m >= e) {
        MarkedWord mw;
        mw.core = w;
        mw.extension = e;
        mw.certificate = ext;
        Word right = detail::unique_extension(oracle, w, true, e);
        Word left = detail::unique_extension(oracle, w, false, e);
        mw.extended = left.prefix(e) + right;
        require(oracle.contains(mw.extended), ErrorKind::contract_violation,
                "forced two-sided extension is not a factor");
        return mw;
      }
      if (m > best || best_word.empty()) {
        best = m;
        best_word = w;
      }
    }
  }
  fail(ErrorKind::not_found,
       "no word extends uniquely " + std::to_string(e) + " times to both sides within depth " +
       std::to_string(oracle.stabilized_to()) + "; best was '" +
       oracle.alphabet().decode(best_word) + "' with " + std::to_string(best));
}

using Partition = std::vector<std::vector<std::size_t>>;

namespace detail {

inline Partition normalize_partition(Partition p)
{
  for (auto& block : p)
    std::sort(block.begin(), block.end());
  std::sort(p.begin(), p.end());
  return p;
}

inline Partition partition_by(const std::vector<std::string>& keys)
{
  std::map<std::string, std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < keys.size(); ++i)
    blocks[keys[i]].push_back(i);
  Partition p;
  for (auto& [_, b] : blocks)
    p.push_back(std::move(b));
  return normalize_partition(std::move(p));
}

inline std::size_t common_range(const std::vector<Automorphism>& auts)
{
  std::size_t r = 0;
  for (const auto& a : auts)
    r = std::max(r, a.range());
  return r;
}

} // namespace detail

// Membership of psi in the group: psi must stabilise [w~] and its cylinder
// action must be one of the group's elements.
inline bool in_group(const Automorphism& psi, const FiniteGroup& group)
{
  if (!stabilizes(psi, group.returns.w))
    return false;
  return group.contains(cylinder_action(psi, group.returns).mapping);
}

struct CosetReport {
  bool equal = false;
  std::size_t range = 0;
  Partition image_partition;   // by phi(w~)
  Partition coset_partition;   // by left cosets phi G
  std::vector<Word> images;    // phi(w~) per automorphism
  std::size_t group_order = 0;
};

// phi_1 and phi_2 share a left coset of G_{w~} iff phi_1(w~) == phi_2(w~).
// Both partitions are computed independently and compared.
inline CosetReport coset_condition_check(const std::vector<Automorphism>& auts,
                                         const MarkedWord& marked, const FiniteGroup& group)
{
  CosetReport rep;
  rep.range = detail::common_range(auts);
  rep.group_order = group.order();
  require(marked.extension >= 2 * rep.range, ErrorKind::precondition,
          "marked word must extend at least 2R times");
  require(rep.range <= marked.extended.size() / 4, ErrorKind::precondition,
          "R must not exceed floor(|w~|/4)");
  require(group.returns.w == marked.extended, ErrorKind::precondition,
          "group is not built on the marked word");

  std::vector<Automorphism> promoted;
  std::vector<std::string> keys;
  for (const auto& a : auts) {
    promoted.push_back(promote_range(a, rep.range));
    rep.images.push_back(apply_to_word(promoted.back(), marked.extended));
    keys.push_back(rep.images.back().raw());
  }
  rep.image_partition = detail::partition_by(keys);

  const std::size_t n = promoted.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (find(i) == find(j))
        continue;
      if (in_group(compose(promoted[i].inverted(), promoted[j]), group))
        parent[find(j)] = find(i);
    }
  std::map<std::size_t, std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < n; ++i)
    blocks[find(i)].push_back(i);
  for (auto& [_, b] : blocks)
    rep.coset_partition.push_back(std::move(b));
  rep.coset_partition = detail::normalize_partition(std::move(rep.coset_partition));

  rep.equal = rep.image_partition == rep.coset_partition;
  return rep;
}

// f = number of distinct images phi(w~), with every phi promoted to
// `image_range` (= extension / 2).
inline std::size_t coset_count_f(const MarkedWord& marked, const std::vector<Automorphism>& auts)
{
  const std::size_t image_range = marked.extension / 2;
  std::vector<Word> images;
  for (const auto& a : auts) {
    require(a.range() <= image_range, ErrorKind::precondition,
            "automorphism range exceeds the marked word's image range");
    images.push_back(apply_to_word(promote_range(a, image_range), marked.extended));
  }
  std::sort(images.begin(), images.end());
  return static_cast<std::size_t>(std::unique(images.begin(), images.end()) - images.begin());
}

struct CosetCounts {
  std::vector<std::size_t> f;                    // f(1..3R)
  std::vector<EnumerationResult> enumerations;   // Aut_1 .. Aut_3R
  std::size_t cover_bound = 0;                   // P(|w| + 3R)
  bool within_cover_bound = false;               // f(3R) <= P(|w| + 3R)
};

// f(n) for n = 1..3R on a step-2 marked word; checks monotonicity.
inline CosetCounts coset_counts(const OracleRef& oracle, const MarkedWord& marked,
                                const EnumerationOptions& opt = {})
{
  const std::size_t top = marked.extension / 2;
  require(top >= 1, ErrorKind::precondition, "marked word has no extension");
  CosetCounts out;
  for (std::size_t n = 1; n <= top; ++n) {
    out.enumerations.push_back(enumerate_automorphisms(oracle, n, opt));
    out.f.push_back(coset_count_f(marked, out.enumerations.back().automorphisms));
    require(out.f.size() < 2 || out.f[out.f.size() - 2] <= out.f.back(),
            ErrorKind::contract_violation, "coset count f is not nondecreasing");
  }
  const std::size_t range = marked.extension / 6;
  out.cover_bound = oracle->complexity(marked.core.size() + 3 * range);
  out.within_cover_bound = out.f.back() <= out.cover_bound;
  return out;
}

struct InjectivityReport {
  bool injective = false;
  std::optional<std::pair<std::size_t, std::size_t>> witness;   // equal images
  std::size_t image_count = 0;
  std::size_t bound = 0;   // P(|w~| - 2R)
};

// phi -> phi(w~) must be injective on a torsion-free family.
inline InjectivityReport torsion_free_injectivity_check(const std::vector<Automorphism>& elements,
                                                       const MarkedWord& marked)
{
  require(!elements.empty(), ErrorKind::precondition, "no elements given");
  const std::size_t range = detail::common_range(elements);
  require(marked.extension >= 2 * range, ErrorKind::precondition,
          "marked word must extend at least 2R times");
  InjectivityReport rep;
  std::map<Word, std::size_t> seen;
  rep.injective = true;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    Word img = apply_to_word(promote_range(elements[i], range), marked.extended);
    auto [it, fresh] = seen.emplace(img, i);
    if (!fresh && rep.injective) {
      rep.injective = false;
      rep.witness = std::make_pair(it->second, i);
    }
  }
  rep.image_count = seen.size();
  rep.bound = elements.front().oracle()->complexity(marked.extended.size() - 2 * range);
  if (rep.injective)
    require(elements.size() <= rep.bound, ErrorKind::contract_violation,
            "more injective images than factors of that length");
  return rep;
}

} // namespace subshift
