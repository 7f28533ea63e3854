#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "subshift/error.hpp"

namespace subshift {

// Index of a symbol in its alphabet. Indices follow the alphabet's fixed order.
using Symbol = std::uint8_t;

inline constexpr std::size_t max_alphabet_size = 64;

// A finite word stored as symbol indices. Ordering is lexicographic by index,
// which is the alphabet's declared order.
class Word {
public:
  Word() = default;

  Word(std::initializer_list<Symbol> symbols)
  {
    data_.reserve(symbols.size());
    for (Symbol s : symbols)
      data_.push_back(static_cast<char>(s));
  }

  static Word from_raw(std::string raw)
  {
    Word w;
    w.data_ = std::move(raw);
    return w;
  }

  static Word repeat(Symbol s, std::size_t count)
  { return from_raw(std::string(count, static_cast<char>(s))); }

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  Symbol operator[](std::size_t i) const
  { return static_cast<Symbol>(data_[i]); }

  Symbol front() const { return (*this)[0]; }
  Symbol back() const { return (*this)[size() - 1]; }

  Word substr(std::size_t pos, std::size_t len) const
  { return from_raw(data_.substr(pos, len)); }

  Word prefix(std::size_t len) const { return substr(0, len); }
  Word suffix(std::size_t len) const { return substr(size() - len, len); }

  std::string_view view() const { return data_; }
  std::string_view view(std::size_t pos, std::size_t len) const
  { return std::string_view(data_).substr(pos, len); }

  const std::string& raw() const { return data_; }

  void push_back(Symbol s) { data_.push_back(static_cast<char>(s)); }
  void push_front(Symbol s) { data_.insert(data_.begin(), static_cast<char>(s)); }
  void append(const Word& other) { data_ += other.data_; }
  void reserve(std::size_t n) { data_.reserve(n); }

  bool starts_with(const Word& p) const
  { return data_.compare(0, p.size(), p.data_) == 0 && p.size() <= size(); }

  bool ends_with(const Word& s) const
  { return s.size() <= size() && data_.compare(size() - s.size(), s.size(), s.data_) == 0; }

  bool contains(const Word& w) const
  { return data_.find(w.data_) != std::string::npos; }

  friend Word operator+(Word a, const Word& b)
  {
    a.data_ += b.data_;
    return a;
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b)
  {
    int c = a.data_.compare(b.data_);
    return c < 0 ? std::strong_ordering::less
         : c > 0 ? std::strong_ordering::greater
                 : std::strong_ordering::equal;
  }

private:
  std::string data_;
};

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept
  { return std::hash<std::string>{}(w.raw()); }
};

// Orders by length first, then lexicographically. Used for return-word sets.
struct ShortlexLess {
  bool operator()(const Word& a, const Word& b) const
  { return a.size() != b.size() ? a.size() < b.size() : a < b; }
};

// FNV-1a, 64 bit. Stable across platforms; used for cache keys.
inline std::uint64_t stable_hash(std::string_view bytes,
                                 std::uint64_t seed = 0xcbf29ce484222325ULL)
{
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Ordered set of single-character symbols. The declaration order fixes both
// the symbol indices and the canonical word order.
class Alphabet {
public:
  Alphabet() { lookup_.fill(-1); }

  explicit Alphabet(std::string_view symbols)
  {
    require(!symbols.empty(), ErrorKind::invalid_spec, "alphabet must be nonempty");
    require(symbols.size() <= max_alphabet_size, ErrorKind::invalid_spec,
            "alphabet larger than " + std::to_string(max_alphabet_size) + " symbols");
    lookup_.fill(-1);
    for (char c : symbols) {
      auto& slot = lookup_[static_cast<unsigned char>(c)];
      require(slot < 0, ErrorKind::invalid_spec,
              std::string("duplicate alphabet symbol '") + c + "'");
      slot = static_cast<int>(symbols_.size());
      symbols_.push_back(c);
    }
  }

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbols() const { return symbols_; }
  char symbol(Symbol s) const { return symbols_.at(s); }

  bool has(char c) const { return lookup_[static_cast<unsigned char>(c)] >= 0; }

  Symbol index(char c) const
  {
    int i = lookup_[static_cast<unsigned char>(c)];
    require(i >= 0, ErrorKind::invalid_spec,
            std::string("symbol '") + c + "' is not in the alphabet \"" + symbols_ + "\"");
    return static_cast<Symbol>(i);
  }

  Word encode(std::string_view text) const
  {
    Word w;
    w.reserve(text.size());
    for (char c : text)
      w.push_back(index(c));
    return w;
  }

  std::string decode(const Word& w) const
  {
    std::string out;
    out.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
      out.push_back(symbols_.at(w[i]));
    return out;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b)
  { return a.symbols_ == b.symbols_; }

private:
  std::string symbols_;
  std::array<int, 256> lookup_{};
};

} // namespace subshift
