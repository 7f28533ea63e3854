#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"

using namespace subshift;
using namespace fixtures;

namespace {

std::set<std::string> keys(const std::vector<Automorphism>& v)
{
  std::set<std::string> out;
  for (const auto& a : v)
    out.insert(canonical_key(a));
  return out;
}

} // namespace

TEST(LocalRule, ApplyExamples)
{
  auto tm = thue_morse();
  EXPECT_EQ(str(tm, apply_to_word(shift_power(tm, 1), w(tm, "0110"))), "10");
  EXPECT_EQ(str(tm, apply_to_word(promote_range(identity(tm), 2), w(tm, "01101"))), "1");
  EXPECT_EQ(str(tm, apply_to_word(exchange(tm), w(tm, "0110"))), "1001");
  EXPECT_EQ(str(tm, apply_to_word(shift_power(tm, -1), w(tm, "0110"))), "01");
}

TEST(LocalRule, ApplyErrors)
{
  auto f = fibonacci();
  try {
    apply_to_word(shift_power(f, 2), w(f, "010"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::range);
  }
  try {
    apply_to_word(identity(f), w(f, "0110"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_in_language);
  }
  EXPECT_THROW(LocalRule(f, 1, {0, 1}), Error);
}

TEST(LocalRule, RangeBookkeeping)
{
  auto f = fibonacci();
  auto id3 = promote_range(identity(f), 3);
  EXPECT_EQ(id3.range(), 3u);
  EXPECT_EQ(minimal_range(id3.forward.rule), 0u);
  EXPECT_EQ(canonical_key(id3), "0:01");
  EXPECT_TRUE(equals(id3, identity(f)));
  EXPECT_EQ(minimal_range(shift_power(f, -2).forward.rule), 2u);

  auto s2 = compose(shift_power(f, 1), shift_power(f, 1));
  EXPECT_EQ(s2.range(), 2u);
  EXPECT_TRUE(equals(s2, shift_power(f, 2)));
  EXPECT_TRUE(equals(compose(shift_power(f, 3), shift_power(f, -3)), identity(f)));
  EXPECT_EQ(compose(shift_power(f, 1).forward, shift_power(f, 1).forward).verified_depth,
            std::min(shift_power(f, 1).forward.verified_depth,
                     shift_power(f, 1).forward.verified_depth + 2));
}

TEST(LocalRule, CompositionIsActionHomomorphism)
{
  auto tm = thue_morse();
  auto aut1 = enumerate_automorphisms(tm, 1).automorphisms;
  std::mt19937 rng(7);
  const auto& words = tm->factors(30);
  for (const auto& a : aut1)
    for (const auto& b : aut1)
      for (int t = 0; t < 5; ++t) {
        const Word& x = words[rng() % words.size()];
        EXPECT_EQ(apply_to_word(compose(a, b), x), apply_to_word(a, apply_to_word(b, x)));
      }
}

TEST(Endomorphism, AcceptsAndRejects)
{
  auto f = fibonacci();
  auto swap = LocalRule(f, 0, {1, 0});
  auto check = is_endomorphism(swap, 20);
  EXPECT_FALSE(check);
  ASSERT_TRUE(check.witness);
  EXPECT_EQ(str(f, *check.witness), "00");

  auto ok = is_endomorphism(shift_power(f, 2).forward.rule, 20);
  ASSERT_TRUE(ok);
  EXPECT_EQ(ok.accepted->verified_depth, 20u);

  auto tm = thue_morse();
  EXPECT_TRUE(is_endomorphism(exchange(tm).forward.rule, 50));
}

TEST(Inverse, ForcedTable)
{
  auto f = fibonacci();
  auto s = shift_power(f, 1);
  auto inv = find_inverse(s.forward, 1);
  ASSERT_TRUE(inv.automorphism);
  EXPECT_TRUE(equals(inv.automorphism->inverted(), shift_power(f, -1)));

  auto s3 = shift_power(f, 3);
  EXPECT_FALSE(find_inverse(s3.forward, 2).automorphism);
  EXPECT_TRUE(find_inverse(s3.forward, 3).automorphism);
}

TEST(Enumeration, Counts)
{
  auto f = fibonacci(), tm = thue_morse();
  EXPECT_EQ(enumerate_automorphisms(f, 0).automorphisms.size(), 1u);
  EXPECT_EQ(enumerate_automorphisms(f, 1).automorphisms.size(), 3u);
  EXPECT_EQ(enumerate_automorphisms(tm, 0).automorphisms.size(), 2u);
  EXPECT_EQ(enumerate_automorphisms(tm, 1).automorphisms.size(), 6u);
  for (std::size_t r = 2; r <= 4; ++r) {
    EXPECT_EQ(enumerate_automorphisms(f, r).automorphisms.size(), 2 * r + 1);
    EXPECT_EQ(enumerate_automorphisms(tm, r).automorphisms.size(), 4 * r + 2);
  }
}

TEST(Enumeration, ThueMorseAutOneIsShiftsTimesExchange)
{
  auto tm = thue_morse();
  std::vector<Automorphism> expected;
  for (long j = -1; j <= 1; ++j) {
    expected.push_back(shift_power(tm, j));
    expected.push_back(compose(shift_power(tm, j), exchange(tm)));
  }
  EXPECT_EQ(keys(enumerate_automorphisms(tm, 1).automorphisms), keys(expected));
}

TEST(Enumeration, ModesAgree)
{
  for (const auto& o : {fibonacci(), thue_morse(), period_doubling()})
    for (std::size_t r = 0; r <= 2; ++r) {
      EnumerationOptions ex;
      ex.mode = EnumerationMode::exhaustive;
      auto a = enumerate_automorphisms(o, r, ex);
      auto b = enumerate_automorphisms(o, r);
      EXPECT_EQ(keys(a.automorphisms), keys(b.automorphisms)) << o->spec().name << " R=" << r;
      EXPECT_EQ(a.endomorphisms, b.endomorphisms);
      EXPECT_GE(a.depth, 4 * r + 2);
    }
}

TEST(Enumeration, CapAndDepthErrors)
{
  auto tm = thue_morse();
  EnumerationOptions ex;
  ex.mode = EnumerationMode::exhaustive;
  try {
    enumerate_automorphisms(tm, 4, ex);
    FAIL();
  } catch (const CapExceeded& e) {
    EXPECT_GT(e.estimate(), ex.cap);
  }
  auto shallow = thue_morse(8);
  EXPECT_THROW(enumerate_automorphisms(shallow, 2), OutOfCertifiedRange);
}

TEST(Enumeration, ClosedUnderInverseAndComposition)
{
  auto tm = thue_morse();
  auto a1 = enumerate_automorphisms(tm, 1).automorphisms;
  auto k2 = keys(enumerate_automorphisms(tm, 2).automorphisms);
  for (const auto& a : a1)
    for (const auto& b : a1)
      EXPECT_TRUE(k2.count(canonical_key(compose(a, b))));
}
