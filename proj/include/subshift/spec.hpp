#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "subshift/error.hpp"
#include "subshift/word.hpp"

namespace subshift {

// Primitive substitution: images[a] is the image of symbol a.
struct Substitution {
  std::vector<Word> images;
};

// Characteristic Sturmian word over a two-letter alphabet, given by the
// continued-fraction coefficients a_1, a_2, ... of its slope. A finite list is
// extended periodically when a longer standard word is needed.
struct Sturmian {
  std::vector<unsigned> coefficients;
};

// The bi-infinite repetition of `period`.
struct Periodic {
  Word period;
  std::size_t trust_depth = 1024;
};

// A finite sample whose factors are trusted up to `trust_depth`.
struct Explicit {
  Word sample;
  std::size_t trust_depth = 0;
};

struct SubshiftSpec {
  std::string name;
  Alphabet alphabet;
  std::variant<Substitution, Sturmian, Periodic, Explicit> variant;

  const char* kind() const
  {
    switch (variant.index()) {
      case 0: return "substitution";
      case 1: return "sturmian";
      case 2: return "periodic";
      default: return "explicit";
    }
  }

  // Canonical text used for hashing and reports. The name is not part of it.
  std::string canonical() const
  {
    std::string out = std::string(kind()) + ";alphabet=" + alphabet.symbols();
    if (auto* s = std::get_if<Substitution>(&variant)) {
      for (std::size_t a = 0; a < s->images.size(); ++a)
        out += ";" + std::string(1, alphabet.symbol(static_cast<Symbol>(a))) + "->" +
               alphabet.decode(s->images[a]);
    } else if (auto* st = std::get_if<Sturmian>(&variant)) {
      out += ";cf=";
      for (std::size_t i = 0; i < st->coefficients.size(); ++i)
        out += (i ? "," : "") + std::to_string(st->coefficients[i]);
    } else if (auto* p = std::get_if<Periodic>(&variant)) {
      out += ";period=" + alphabet.decode(p->period) +
             ";trust=" + std::to_string(p->trust_depth);
    } else {
      auto& e = std::get<Explicit>(variant);
      out += ";sample=" + alphabet.decode(e.sample) +
             ";trust=" + std::to_string(e.trust_depth);
    }
    return out;
  }

  std::uint64_t hash() const { return stable_hash(canonical()); }
};

namespace detail {

using BoolMatrix = std::vector<std::vector<bool>>;

inline BoolMatrix bool_product(const BoolMatrix& a, const BoolMatrix& b)
{
  std::size_t n = a.size();
  BoolMatrix c(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (b[k][j])
            c[i][j] = true;
  return c;
}

} // namespace detail

// Returns the index of a symbol witnessing non-primitivity, or -1 when the
// substitution is primitive. By Wielandt's bound it suffices to test the
// power (d-1)^2 + 1 of the incidence matrix.
inline int primitivity_witness(const Substitution& sub, std::size_t alphabet_size)
{
  std::size_t d = alphabet_size;
  detail::BoolMatrix m(d, std::vector<bool>(d, false));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t i = 0; i < sub.images[a].size(); ++i)
      m[a][sub.images[a][i]] = true;

  std::size_t power = (d - 1) * (d - 1) + 1;
  detail::BoolMatrix acc = m;
  for (std::size_t p = 1; p < power; ++p)
    acc = detail::bool_product(acc, m);

  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      if (!acc[a][b])
        return static_cast<int>(a);
  return -1;
}

inline void validate(const SubshiftSpec& spec)
{
  const std::size_t d = spec.alphabet.size();
  require(d >= 1, ErrorKind::invalid_spec, "alphabet must be nonempty");

  if (auto* sub = std::get_if<Substitution>(&spec.variant)) {
    require(sub->images.size() == d, ErrorKind::invalid_spec,
            "substitution must give an image for every symbol");
    bool expanding = false;
    for (std::size_t a = 0; a < d; ++a) {
      require(!sub->images[a].empty(), ErrorKind::invalid_spec,
              std::string("image of '") + spec.alphabet.symbol(static_cast<Symbol>(a)) +
              "' is empty");
      for (std::size_t i = 0; i < sub->images[a].size(); ++i)
        require(sub->images[a][i] < d, ErrorKind::invalid_spec, "image symbol out of range");
      expanding = expanding || sub->images[a].size() > 1;
    }
    int witness = primitivity_witness(*sub, d);
    require(witness < 0, ErrorKind::invalid_spec,
            std::string("substitution is not primitive; witness symbol '") +
            (witness >= 0 ? spec.alphabet.symbol(static_cast<Symbol>(witness)) : '?') + "'");
    require(expanding, ErrorKind::invalid_spec,
            "substitution does not grow any symbol; its fixed point is finite");
  } else if (auto* st = std::get_if<Sturmian>(&spec.variant)) {
    require(d == 2, ErrorKind::invalid_spec, "sturmian spec needs a two-letter alphabet");
    require(!st->coefficients.empty(), ErrorKind::invalid_spec,
            "sturmian spec needs at least one continued-fraction coefficient");
    for (unsigned c : st->coefficients)
      require(c >= 1, ErrorKind::invalid_spec, "continued-fraction coefficients must be >= 1");
  } else if (auto* p = std::get_if<Periodic>(&spec.variant)) {
    require(!p->period.empty(), ErrorKind::invalid_spec, "periodic word must be nonempty");
    require(p->trust_depth >= 1, ErrorKind::invalid_spec, "trust depth must be >= 1");
  } else {
    auto& e = std::get<Explicit>(spec.variant);
    require(!e.sample.empty(), ErrorKind::invalid_spec, "explicit sample must be nonempty");
    require(e.trust_depth >= 1 && e.trust_depth <= e.sample.size(), ErrorKind::invalid_spec,
            "explicit trust depth must lie in [1, sample length]");
  }
}

// Prefix of length >= `length` of the one-sided word generated by iterating
// the substitution from the first symbol. Every factor of the result lies in
// the language of the primitive substitution shift.
inline Word substitution_word(const Substitution& sub, std::size_t length)
{
  Word w{0};
  while (w.size() < length) {
    Word next;
    next.reserve(w.size() * 2);
    for (std::size_t i = 0; i < w.size(); ++i)
      next.append(sub.images[w[i]]);
    w = std::move(next);
  }
  return w;
}

// Standard-word recursion s_{-1} = 1, s_0 = 0, s_k = s_{k-1}^{a_k} s_{k-2}.
// Each s_k (k >= 1) is a prefix of the characteristic word.
inline Word sturmian_word(const Sturmian& st, std::size_t length)
{
  Word prev{1};
  Word cur{0};
  std::size_t k = 0;
  while (cur.size() < length || k == 0) {
    unsigned a = st.coefficients[k % st.coefficients.size()];
    Word next;
    next.reserve(cur.size() * a + prev.size());
    for (unsigned i = 0; i < a; ++i)
      next.append(cur);
    next.append(prev);
    prev = std::move(cur);
    cur = std::move(next);
    ++k;
  }
  return cur;
}

inline Word periodic_word(const Periodic& p, std::size_t length)
{
  Word w;
  w.reserve(length + p.period.size());
  while (w.size() < length)
    w.append(p.period);
  return w;
}

// Builders from textual symbols.
inline SubshiftSpec substitution_spec(std::string name, std::string_view alphabet,
                                      const std::vector<std::string>& images)
{
  SubshiftSpec s{std::move(name), Alphabet(alphabet), Substitution{}};
  auto& sub = std::get<Substitution>(s.variant);
  for (const auto& img : images)
    sub.images.push_back(s.alphabet.encode(img));
  return s;
}

inline SubshiftSpec sturmian_spec(std::string name, std::string_view alphabet,
                                  std::vector<unsigned> coefficients)
{ return {std::move(name), Alphabet(alphabet), Sturmian{std::move(coefficients)}}; }

inline SubshiftSpec periodic_spec(std::string name, std::string_view alphabet,
                                  std::string_view period, std::size_t trust_depth = 1024)
{
  Alphabet a(alphabet);
  Word w = a.encode(period);
  return {std::move(name), std::move(a), Periodic{std::move(w), trust_depth}};
}

inline SubshiftSpec explicit_spec(std::string name, std::string_view alphabet,
                                  std::string_view sample, std::size_t trust_depth)
{
  Alphabet a(alphabet);
  Word w = a.encode(sample);
  return {std::move(name), std::move(a), Explicit{std::move(w), trust_depth}};
}

} // namespace subshift
