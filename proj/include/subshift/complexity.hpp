#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "subshift/error.hpp"
#include "subshift/oracle.hpp"

namespace subshift {

// P(1..N). values[i] holds P(i + 1).
struct ComplexityProfile {
  std::vector<std::uint64_t> values;
  std::uint64_t source = 0;   // spec hash of the oracle

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }

  std::uint64_t at(std::size_t n) const
  {
    require(n >= 1 && n <= values.size(), ErrorKind::horizon,
            "P(" + std::to_string(n) + ") is outside the computed profile 1.." +
            std::to_string(values.size()));
    return values[n - 1];
  }
};

inline ComplexityProfile complexity_series(const LanguageOracle& oracle, std::size_t max_n)
{
  ComplexityProfile p;
  p.source = oracle.spec_hash();
  p.values.reserve(max_n);
  for (std::size_t n = 1; n <= max_n; ++n)
    p.values.push_back(oracle.complexity(n));
  return p;
}

// Least n with P(n + 1) == P(n), if any. By Morse-Hedlund such an n forces
// the sequence to be eventually periodic.
inline std::optional<std::size_t> detect_eventual_periodicity(const ComplexityProfile& profile)
{
  require(!profile.empty(), ErrorKind::precondition, "empty complexity profile");
  for (std::size_t n = 1; n < profile.size(); ++n)
    if (profile.at(n + 1) == profile.at(n))
      return n;
  return std::nullopt;
}

// Smallest p <= max_period such that text[i] == text[i + p] for all i >= start.
inline std::optional<std::size_t> eventual_period(const Word& text, std::size_t start,
                                                  std::size_t max_period)
{
  for (std::size_t p = 1; p <= max_period && start + p < text.size(); ++p) {
    bool ok = true;
    for (std::size_t i = start; i + p < text.size() && ok; ++i)
      ok = text[i] == text[i + p];
    if (ok)
      return p;
  }
  return std::nullopt;
}

inline bool is_periodic(const LanguageOracle& oracle)
{
  return oracle.stabilized_to() >= 2 &&
         detect_eventual_periodicity(complexity_series(oracle, oracle.stabilized_to()))
             .has_value();
}

struct ExtensionCount {
  std::size_t right = 0;
  std::size_t left = 0;
  bool right_capped = false;   // still unique when the horizon was reached
  bool left_capped = false;
};

namespace detail {

// Number of unique one-letter extensions on one side, following the chain of
// forced letters. Stops at `cap` steps or at the certified depth.
inline std::pair<std::size_t, bool> unique_run(const LanguageOracle& oracle, Word w,
                                               bool to_right, std::size_t cap)
{
  const std::size_t depth = oracle.stabilized_to();
  const std::size_t symbols = oracle.alphabet().size();
  std::size_t steps = 0;
  while (steps < cap && w.size() < depth) {
    std::optional<Word> only;
    std::size_t count = 0;
    for (std::size_t a = 0; a < symbols && count < 2; ++a) {
      Word ext = w;
      if (to_right)
        ext.push_back(static_cast<Symbol>(a));
      else
        ext.push_front(static_cast<Symbol>(a));
      if (oracle.contains(ext)) {
        ++count;
        only = std::move(ext);
      }
    }
    if (count != 1)
      return {steps, false};
    w = std::move(*only);
    ++steps;
  }
  return {steps, true};
}

inline Word unique_extension(const LanguageOracle& oracle, Word w, bool to_right,
                             std::size_t times)
{
  for (std::size_t i = 0; i < times; ++i) {
    std::optional<Word> only;
    std::size_t count = 0;
    for (std::size_t a = 0; a < oracle.alphabet().size(); ++a) {
      Word ext = w;
      if (to_right)
        ext.push_back(static_cast<Symbol>(a));
      else
        ext.push_front(static_cast<Symbol>(a));
      if (oracle.contains(ext)) {
        ++count;
        only = std::move(ext);
      }
    }
    require(count == 1, ErrorKind::contract_violation, "word does not extend uniquely");
    w = std::move(*only);
  }
  return w;
}

} // namespace detail

// Maximal N such that w extends uniquely N times to each side. A side reports
// `capped` when it was still unique at the certified horizon (or at `cap`), in
// which case the count is a lower bound.
inline ExtensionCount unique_extension_count(const LanguageOracle& oracle, const Word& w,
                                             std::size_t cap = SIZE_MAX)
{
  require(oracle.contains(w), ErrorKind::not_in_language, "word is not a certified factor");
  ExtensionCount out;
  std::tie(out.right, out.right_capped) = detail::unique_run(oracle, w, true, cap);
  std::tie(out.left, out.left_capped) = detail::unique_run(oracle, w, false, cap);
  return out;
}

struct KnResult {
  std::optional<std::size_t> value;   // absent when the horizon binds
  std::size_t lower_bound = 0;        // always valid: k_n >= lower_bound
  std::size_t horizon = 0;            // cap applied to extension counts
  Word witness;                       // a word realizing max min(u_right, u_left)
};

// k_n: least k such that no length-n word extends uniquely k times to both
// sides, i.e. 1 + max_w min(u_right(w), u_left(w)). Counts are capped at
// floor((stabilized_to - n) / 2); if some word reaches the cap on both sides
// only a lower bound is reported.
inline KnResult k_n(const LanguageOracle& oracle, std::size_t n)
{
  oracle.check_depth(n);
  if (is_periodic(oracle))
    fail(ErrorKind::undefined_on_periodic,
         "k_n is undefined on a periodic shift (minimum over an empty set)");

  KnResult out;
  out.horizon = (oracle.stabilized_to() - n) / 2;
  std::size_t best = 0;
  bool capped = false;
  bool first = true;
  for (const Word& w : oracle.factors(n)) {
    auto ext = unique_extension_count(oracle, w, out.horizon);
    std::size_t m = std::min(ext.right, ext.left);
    if (m >= out.horizon)
      capped = true;
    if (first || m > best) {
      best = m;
      out.witness = w;
      first = false;
    }
  }
  out.lower_bound = best + 1;
  if (!capped)
    out.value = best + 1;
  return out;
}

// d_n: least m >= 1 with P(n + m) >= 2 P(n).
inline std::size_t doubling_time(const ComplexityProfile& profile, std::size_t n)
{
  const std::uint64_t target = 2 * profile.at(n);
  for (std::size_t m = 1; n + m <= profile.size(); ++m)
    if (profile.at(n + m) >= target)
      return m;
  fail(ErrorKind::horizon, "P does not double from n = " + std::to_string(n) +
                           " within the profile (length " + std::to_string(profile.size()) + ")");
}

namespace detail {

// ceil/floor with a guard: values within 1e-12 (relative) of an integer snap
// to it, so exact integers survive rounding noise in pow/log.
inline long long guarded_ceil(double x)
{
  double r = std::round(x);
  if (std::fabs(x - r) <= 1e-12 * std::max(1.0, std::fabs(x)))
    return static_cast<long long>(r);
  return static_cast<long long>(std::ceil(x));
}

inline long long guarded_floor(double x)
{
  double r = std::round(x);
  if (std::fabs(x - r) <= 1e-12 * std::max(1.0, std::fabs(x)))
    return static_cast<long long>(r);
  return static_cast<long long>(std::floor(x));
}

} // namespace detail

// Doubling time of n -> lambda^(n^beta):
//   ceil(n * (1 + log 2 / (n^beta log lambda))^(1/beta) - n).
inline std::size_t reference_doubling_time(std::size_t n, double beta, double lambda)
{
  require(n >= 1, ErrorKind::precondition, "n must be >= 1");
  require(beta > 0.0 && beta <= 1.0, ErrorKind::precondition, "beta must lie in (0, 1]");
  require(lambda > 1.0, ErrorKind::precondition, "lambda must exceed 1");
  const double nd = static_cast<double>(n);
  const double c = std::log(2.0) / (std::pow(nd, beta) * std::log(lambda));
  const double x = nd * std::pow(1.0 + c, 1.0 / beta) - nd;
  return static_cast<std::size_t>(std::max<long long>(1, detail::guarded_ceil(x)));
}

// Leading-order asymptotic of the reference doubling time,
// log 2 / (beta log lambda) * n^(1 - beta).
inline double reference_doubling_asymptotic(double n, double beta, double lambda)
{
  return std::log(2.0) / (beta * std::log(lambda)) * std::pow(n, 1.0 - beta);
}

enum class Trend { decreasing, increasing, mixed };

inline const char* to_string(Trend t)
{
  switch (t) {
    case Trend::decreasing: return "decreasing";
    case Trend::increasing: return "increasing";
    case Trend::mixed: return "mixed";
  }
  return "mixed";
}

struct GrowthDiagnostics {
  double beta = 0.0;
  unsigned d = 0;
  std::vector<double> log_ratio;        // log P(n) / n^beta
  std::vector<double> poly_ratio;       // P(n) / n^d
  std::vector<double> log_tail_sup;     // sup_{m >= n} of log_ratio, over the range
  std::vector<double> poly_tail_sup;
  Trend log_trend = Trend::mixed;       // over the second half of the range
  Trend poly_trend = Trend::mixed;
};

namespace detail {

inline std::vector<double> tail_sup(const std::vector<double>& v)
{
  std::vector<double> out(v.size());
  double m = -HUGE_VAL;
  for (std::size_t i = v.size(); i-- > 0;) {
    m = std::max(m, v[i]);
    out[i] = m;
  }
  return out;
}

inline Trend trend_of(const std::vector<double>& v)
{
  std::size_t start = v.size() / 2;
  bool dec = true, inc = true;
  for (std::size_t i = start; i + 1 < v.size(); ++i) {
    dec = dec && v[i + 1] < v[i];
    inc = inc && v[i + 1] > v[i];
  }
  return dec ? Trend::decreasing : inc ? Trend::increasing : Trend::mixed;
}

} // namespace detail

// Finite views of limsup log P(n)/n^beta and limsup P(n)/n^d. These are
// diagnostics over the computed range, not limit statements.
inline GrowthDiagnostics growth_diagnostics(const ComplexityProfile& profile, double beta,
                                            unsigned d)
{
  require(profile.size() >= 3, ErrorKind::precondition, "profile needs at least 3 values");
  GrowthDiagnostics g;
  g.beta = beta;
  g.d = d;
  for (std::size_t n = 1; n <= profile.size(); ++n) {
    double p = static_cast<double>(profile.at(n));
    double nd = static_cast<double>(n);
    g.log_ratio.push_back(std::log(p) / std::pow(nd, beta));
    g.poly_ratio.push_back(p / std::pow(nd, static_cast<double>(d)));
  }
  g.log_tail_sup = detail::tail_sup(g.log_ratio);
  g.poly_tail_sup = detail::tail_sup(g.poly_ratio);
  g.log_trend = detail::trend_of(g.log_ratio);
  g.poly_trend = detail::trend_of(g.poly_ratio);
  return g;
}

} // namespace subshift
