#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "subshift/block_code.hpp"
#include "subshift/error.hpp"
#include "subshift/oracle.hpp"

namespace subshift {

struct InverseSearch {
  std::optional<Automorphism> automorphism;
  bool capped = false;   // the certified depth stopped the search early
};

// Looks for an inverse of range <= max_inverse_range. For a candidate range r
// the inverse is forced: it must send e(W) to the centre of W for every W in
// L_{2(R+r)+1}. A conflict or an unreached window rules r out; otherwise the
// forced rule is checked to be an endomorphism and a two-sided inverse.
inline InverseSearch find_inverse(const Endomorphism& e, std::size_t max_inverse_range)
{
  const OracleRef& oracle = e.rule.oracle();
  const std::size_t rf = e.range();
  InverseSearch out;
  for (std::size_t r = 0; r <= max_inverse_range; ++r) {
    const std::size_t span = 2 * (rf + r) + 1;
    if (span > oracle->stabilized_to()) {
      out.capped = true;
      break;
    }
    const auto& target = oracle->level(2 * r + 1);
    std::vector<int> table(target.words.size(), -1);
    bool consistent = true;
    for (const Word& w : oracle->factors(span)) {
      auto img = e.rule.try_apply(w);
      auto it = img ? target.index.find(*img) : target.index.end();
      require(it != target.index.end(), ErrorKind::contract_violation,
              "endomorphism maps a certified word outside the language");
      int centre = w[rf + r];
      int& slot = table[it->second];
      if (slot >= 0 && slot != centre) {
        consistent = false;
        break;
      }
      slot = centre;
    }
    if (!consistent || std::count(table.begin(), table.end(), -1) > 0)
      continue;

    std::vector<Symbol> symbols(table.begin(), table.end());
    LocalRule inverse_rule(oracle, r, std::move(symbols));
    std::size_t depth = std::min(std::max(e.verified_depth, span), oracle->stabilized_to());
    auto check = is_endomorphism(inverse_rule, depth);
    if (!check)
      continue;
    // inverse after e is the identity by construction; check e after inverse.
    if (!equals(compose(e.rule, inverse_rule), identity_rule(oracle)))
      continue;

    std::size_t range = std::max(rf, r);
    out.automorphism = Automorphism{promote_range(e, range),
                                    promote_range(*check.accepted, range)};
    return out;
  }
  return out;
}

enum class EnumerationMode { exhaustive, propagation };

struct EnumerationOptions {
  std::size_t depth = 0;               // 0: default verification depth
  std::size_t return_time_estimate = 8;
  EnumerationMode mode = EnumerationMode::propagation;
  double cap = 1 << 22;                // candidate tables (exhaustive) or search nodes
};

struct EnumerationResult {
  std::size_t range = 0;
  std::size_t depth = 0;                  // verification depth used
  std::vector<Automorphism> automorphisms;   // canonical order
  std::size_t endomorphisms = 0;
  double candidates = 0;                  // tables or nodes examined
};

// max(4R + 2, 2R + 1 + 2K), clipped to the certified depth.
inline std::size_t default_verification_depth(const LanguageOracle& oracle, std::size_t range,
                                              std::size_t return_time_estimate)
{
  std::size_t want = std::max(4 * range + 2, 2 * range + 1 + 2 * return_time_estimate);
  std::size_t floor_depth = 4 * range + 2;
  if (oracle.stabilized_to() < floor_depth)
    throw OutOfCertifiedRange(floor_depth, oracle.stabilized_to());
  return std::min(want, oracle.stabilized_to());
}

namespace detail {

// Table assignment order: breadth-first through the overlap graph of windows,
// so that words of length 2R+2, 2R+3, ... become fully assigned early.
inline std::vector<std::uint32_t> window_order(const LanguageOracle& oracle, std::size_t range)
{
  const std::size_t span = 2 * range + 1;
  const auto& lv = oracle.level(span);
  const std::size_t count = lv.words.size();
  std::vector<std::vector<std::uint32_t>> adj(count);
  if (span + 1 <= oracle.stabilized_to()) {
    for (const Word& w : oracle.factors(span + 1)) {
      auto a = lv.index.at(w.prefix(span));
      auto b = lv.index.at(w.suffix(span));
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  }
  std::vector<std::uint32_t> order;
  std::vector<bool> seen(count, false);
  for (std::uint32_t start = 0; start < count; ++start) {
    if (seen[start])
      continue;
    std::deque<std::uint32_t> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (auto u : adj[v])
        if (!seen[u]) {
          seen[u] = true;
          queue.push_back(u);
        }
    }
  }
  return order;
}

struct PendingCheck {
  std::vector<std::uint32_t> windows;   // window indices, left to right
  std::size_t image_length;
};

class PropagationSearch {
public:
  PropagationSearch(const OracleRef& oracle, std::size_t range, std::size_t depth, double cap)
  : oracle_(oracle), range_(range), depth_(depth), cap_(cap)
  {
    const std::size_t span = 2 * range + 1;
    const auto& lv = oracle->level(span);
    order_ = window_order(*oracle, range);
    std::vector<std::size_t> position(order_.size());
    for (std::size_t i = 0; i < order_.size(); ++i)
      position[order_[i]] = i;

    checks_.resize(order_.size());
    for (std::size_t n = span; n <= depth; ++n) {
      for (const Word& w : oracle->factors(n)) {
        PendingCheck c{{}, n - 2 * range};
        std::size_t last = 0;
        for (std::size_t i = 0; i + span <= n; ++i) {
          auto idx = lv.index.at(w.substr(i, span));
          c.windows.push_back(idx);
          last = std::max(last, position[idx]);
        }
        checks_[last].push_back(std::move(c));
      }
    }
    table_.assign(order_.size(), 0);
  }

  std::vector<LocalRule> run()
  {
    descend(0);
    return std::move(found_);
  }

  double nodes() const { return nodes_; }

private:
  void descend(std::size_t step)
  {
    if (step == order_.size()) {
      found_.emplace_back(oracle_, range_, table_);
      return;
    }
    const std::size_t symbols = oracle_->alphabet().size();
    for (std::size_t a = 0; a < symbols; ++a) {
      if (++nodes_ > cap_)
        throw CapExceeded("propagation search exceeded " + std::to_string(cap_) + " nodes",
                          nodes_);
      table_[order_[step]] = static_cast<Symbol>(a);
      if (consistent(step))
        descend(step + 1);
    }
  }

  bool consistent(std::size_t step) const
  {
    for (const PendingCheck& c : checks_[step]) {
      Word img;
      img.reserve(c.windows.size());
      for (auto idx : c.windows)
        img.push_back(table_[idx]);
      if (!oracle_->level(c.image_length).index.count(img))
        return false;
    }
    return true;
  }

  OracleRef oracle_;
  std::size_t range_;
  std::size_t depth_;
  double cap_;
  double nodes_ = 0;
  std::vector<std::uint32_t> order_;
  std::vector<std::vector<PendingCheck>> checks_;
  std::vector<Symbol> table_;
  std::vector<LocalRule> found_;
};

inline std::vector<LocalRule> exhaustive_endomorphisms(const OracleRef& oracle, std::size_t range,
                                                       std::size_t depth, double cap,
                                                       double& examined)
{
  const std::size_t symbols = oracle->alphabet().size();
  const std::size_t entries = oracle->complexity(2 * range + 1);
  const double estimate = std::pow(static_cast<double>(symbols), static_cast<double>(entries));
  if (estimate > cap)
    throw CapExceeded("exhaustive enumeration needs " + std::to_string(symbols) + "^" +
                      std::to_string(entries) + " candidate tables", estimate);

  std::vector<LocalRule> found;
  std::vector<Symbol> table(entries, 0);
  examined = 0;
  for (;;) {
    ++examined;
    LocalRule rule(oracle, range, table);
    if (is_endomorphism(rule, depth))
      found.push_back(std::move(rule));
    // odometer, last entry fastest
    std::size_t i = entries;
    while (i > 0) {
      --i;
      if (++table[i] < symbols)
        break;
      table[i] = 0;
      if (i == 0)
        return found;
    }
    if (entries == 0)
      return found;
  }
}

} // namespace detail

// All rules of range R that pass is_endomorphism at the verification depth and
// have an inverse of range <= R, in canonical order.
inline EnumerationResult enumerate_automorphisms(const OracleRef& oracle, std::size_t range,
                                                 const EnumerationOptions& opt = {})
{
  EnumerationResult out;
  out.range = range;
  out.depth = opt.depth ? opt.depth
                        : default_verification_depth(*oracle, range, opt.return_time_estimate);
  require(out.depth >= 4 * range + 1, ErrorKind::precondition,
          "verification depth must be at least 4R+1");
  oracle->check_depth(out.depth);

  std::vector<LocalRule> endos;
  if (opt.mode == EnumerationMode::exhaustive) {
    endos = detail::exhaustive_endomorphisms(oracle, range, out.depth, opt.cap, out.candidates);
  } else {
    detail::PropagationSearch search(oracle, range, out.depth, opt.cap);
    endos = search.run();
    out.candidates = search.nodes();
  }
  out.endomorphisms = endos.size();

  for (LocalRule& rule : endos) {
    Endomorphism e{std::move(rule), out.depth};
    auto inv = find_inverse(e, range);
    if (inv.automorphism)
      out.automorphisms.push_back(std::move(*inv.automorphism));
  }
  std::sort(out.automorphisms.begin(), out.automorphisms.end(), canonical_less);

  std::unordered_set<std::string> keys;
  for (const auto& a : out.automorphisms)
    keys.insert(canonical_key(a));
  for (const auto& a : out.automorphisms)
    require(keys.count(canonical_key(a.inverted())) == 1, ErrorKind::contract_violation,
            "enumerated set is not closed under inverses");
  return out;
}

} // namespace subshift
