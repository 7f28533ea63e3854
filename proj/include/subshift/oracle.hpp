#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "subshift/error.hpp"
#include "subshift/spec.hpp"
#include "subshift/word.hpp"

namespace subshift {

struct OracleOptions {
  // Certification also requires sample_length >= multiple * repetitivity(n).
  std::size_t repetitivity_multiple = 4;
  std::size_t initial_sample = 0;            // 0: chosen from the target
  std::size_t max_sample = std::size_t{1} << 23;
};

// Sorted factor list of one length, with an index for membership queries.
struct FactorLevel {
  std::vector<Word> words;
  std::unordered_map<Word, std::uint32_t, WordHash> index;

  explicit FactorLevel(std::vector<Word> sorted = {})
  : words(std::move(sorted))
  {
    index.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i)
      index.emplace(words[i], static_cast<std::uint32_t>(i));
  }
};

// Certified factor sets L_n(X) for 1 <= n <= stabilized_to().
class LanguageOracle {
public:
  LanguageOracle(SubshiftSpec spec, std::vector<FactorLevel> levels,
                 std::size_t requested, std::size_t sample_length, Word sample,
                 std::vector<std::size_t> repetitivity = {})
  : spec_(std::move(spec)), levels_(std::move(levels)), requested_(requested),
    sample_length_(sample_length), sample_(std::move(sample)),
    repetitivity_(std::move(repetitivity)), hash_(spec_.hash())
  {}

  const SubshiftSpec& spec() const { return spec_; }
  const Alphabet& alphabet() const { return spec_.alphabet; }
  std::uint64_t spec_hash() const { return hash_; }

  std::size_t stabilized_to() const { return levels_.size() - 1; }
  std::size_t requested_depth() const { return requested_; }
  bool unstable() const { return stabilized_to() < requested_; }

  // Length of the generated prefix whose factors were certified.
  std::size_t sample_length() const { return sample_length_; }
  const Word& sample() const { return sample_; }

  // Per-length repetitivity estimates observed on the sample (substitutive
  // variants only; empty otherwise).
  const std::vector<std::size_t>& repetitivity() const { return repetitivity_; }

  void check_depth(std::size_t n) const
  {
    if (n > stabilized_to())
      throw OutOfCertifiedRange(n, stabilized_to());
  }

  const FactorLevel& level(std::size_t n) const
  {
    check_depth(n);
    return levels_[n];
  }

  const std::vector<Word>& factors(std::size_t n) const { return level(n).words; }

  std::size_t complexity(std::size_t n) const { return factors(n).size(); }

  std::optional<std::uint32_t> index_of(const Word& w) const
  {
    const auto& lv = level(w.size());
    auto it = lv.index.find(w);
    if (it == lv.index.end())
      return std::nullopt;
    return it->second;
  }

  bool contains(const Word& w) const { return index_of(w).has_value(); }

  // Membership for words of any length: certified exactly up to the depth,
  // beyond it every window of certified length must be a factor.
  bool plausibly_contains(const Word& w) const
  {
    if (w.size() <= stabilized_to())
      return contains(w);
    std::size_t d = stabilized_to();
    for (std::size_t i = 0; i + d <= w.size(); ++i)
      if (!contains(w.substr(i, d)))
        return false;
    return true;
  }

private:
  SubshiftSpec spec_;
  std::vector<FactorLevel> levels_;
  std::size_t requested_;
  std::size_t sample_length_;
  Word sample_;
  std::vector<std::size_t> repetitivity_;
  std::uint64_t hash_;
};

using OracleRef = std::shared_ptr<const LanguageOracle>;

namespace detail {

// Distinct factors of `text` of length n, sorted.
inline std::vector<Word> factor_list(const Word& text, std::size_t n)
{
  std::vector<Word> out;
  if (text.size() < n)
    return out;
  std::unordered_map<std::string_view, bool> seen;
  for (std::size_t i = 0; i + n <= text.size(); ++i)
    if (seen.emplace(text.view(i, n), true).second)
      out.push_back(text.substr(i, n));
  std::sort(out.begin(), out.end());
  return out;
}

struct OccurrenceStats {
  std::size_t max_first = 0;   // largest first-occurrence position
  std::size_t max_gap = 0;     // largest gap, including both boundaries
};

inline OccurrenceStats occurrence_stats(const Word& text, std::size_t n)
{
  struct Seen { std::size_t first, last, gap; };
  std::unordered_map<std::string_view, Seen> seen;
  for (std::size_t i = 0; i + n <= text.size(); ++i) {
    auto [it, fresh] = seen.try_emplace(text.view(i, n), Seen{i, i, i + 1});
    if (!fresh) {
      it->second.gap = std::max(it->second.gap, i - it->second.last);
      it->second.last = i;
    }
  }
  OccurrenceStats stats;
  std::size_t last_start = text.size() - n;
  for (auto& [_, s] : seen) {
    stats.max_first = std::max(stats.max_first, s.first);
    stats.max_gap = std::max({stats.max_gap, s.gap, last_start - s.last + 1});
  }
  return stats;
}

inline std::vector<FactorLevel> levels_of(const Word& text, std::size_t depth)
{
  std::vector<FactorLevel> levels;
  levels.reserve(depth + 1);
  levels.emplace_back(std::vector<Word>{Word{}});
  for (std::size_t n = 1; n <= depth; ++n)
    levels.emplace_back(factor_list(text, n));
  return levels;
}

inline OracleRef build_substitutive(const SubshiftSpec& spec, std::size_t target,
                                    const OracleOptions& opt)
{
  auto generate = [&](std::size_t len) {
    if (auto* sub = std::get_if<Substitution>(&spec.variant))
      return substitution_word(*sub, len).prefix(len);
    return sturmian_word(std::get<Sturmian>(spec.variant), len).prefix(len);
  };

  std::size_t base = opt.initial_sample ? opt.initial_sample
                                        : std::max<std::size_t>(64, 16 * target);
  for (;;) {
    Word text = generate(4 * base);
    // Length n is certified when every length-n factor of the 4x prefix
    // already occurs in the 1x prefix (so the 1x, 2x and 4x sets agree) and
    // the 1x prefix is long compared to the observed repetitivity.
    std::vector<std::size_t> rep;
    std::size_t certified = 0;
    for (std::size_t n = 1; n <= target; ++n) {
      auto stats = occurrence_stats(text, n);
      std::size_t repetitivity = stats.max_gap + n - 1;
      bool stable = stats.max_first + n <= base &&
                    base >= opt.repetitivity_multiple * repetitivity;
      if (!stable)
        break;
      rep.push_back(repetitivity);
      certified = n;
    }

    bool exhausted = 8 * base > opt.max_sample;
    if (certified == target || exhausted) {
      auto levels = levels_of(text, certified);
      return std::make_shared<const LanguageOracle>(spec, std::move(levels), target,
                                                    text.size(), std::move(text),
                                                    std::move(rep));
    }
    base *= 2;
  }
}

} // namespace detail

// Builds the certified factor sets of `spec` up to `target_length`. When the
// sample cap is reached first, the result is partial and `unstable()` is set.
inline OracleRef build_oracle(const SubshiftSpec& spec, std::size_t target_length,
                              const OracleOptions& opt = {})
{
  validate(spec);
  require(target_length >= 1, ErrorKind::precondition, "target length must be >= 1");

  if (std::holds_alternative<Substitution>(spec.variant) ||
      std::holds_alternative<Sturmian>(spec.variant))
    return detail::build_substitutive(spec, target_length, opt);

  if (auto* p = std::get_if<Periodic>(&spec.variant)) {
    std::size_t depth = std::min(target_length, p->trust_depth);
    // Any window of length n + |p| - 1 of the periodic word holds every factor.
    Word text = periodic_word(*p, depth + 2 * p->period.size());
    auto levels = detail::levels_of(text, depth);
    return std::make_shared<const LanguageOracle>(spec, std::move(levels), target_length,
                                                  text.size(), std::move(text));
  }

  auto& e = std::get<Explicit>(spec.variant);
  std::size_t depth = std::min(target_length, e.trust_depth);
  auto levels = detail::levels_of(e.sample, depth);
  return std::make_shared<const LanguageOracle>(spec, std::move(levels), target_length,
                                                e.sample.size(), e.sample);
}

} // namespace subshift
