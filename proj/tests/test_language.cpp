#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace subshift;
using namespace fixtures;

namespace {

std::set<std::string> as_strings(const OracleRef& o, std::size_t n)
{
  std::set<std::string> out;
  for (const Word& x : o->factors(n))
    out.insert(str(o, x));
  return out;
}

OracleRef full_shift()
{
  return build_oracle(explicit_spec("full-2", "01", oracle::de_bruijn(12), 12), 12);
}

std::vector<OracleRef> aperiodic_instances()
{
  return {fibonacci(), thue_morse(), period_doubling(), sturmian_213()};
}

} // namespace

TEST(Oracle, FibonacciSmallLevels)
{
  auto o = fibonacci(10);
  EXPECT_GE(o->stabilized_to(), 10u);
  EXPECT_EQ(o->complexity(1), 2u);
  EXPECT_EQ(o->complexity(2), 3u);
  EXPECT_EQ(as_strings(o, 2), (std::set<std::string>{"00", "01", "10"}));
  EXPECT_EQ(o->complexity(5), 6u);
}

TEST(Oracle, ThueMorseMatchesPrefixScan)
{
  auto o = thue_morse(40);
  EXPECT_EQ(o->complexity(3), 6u);
  const std::string text = oracle::thue_morse_prefix(1 << 16);
  for (std::size_t n = 1; n <= 40; ++n)
    EXPECT_EQ(as_strings(o, n), oracle::factors_of(text, n)) << "n=" << n;
}

TEST(Oracle, FibonacciMatchesPrefixScan)
{
  auto o = fibonacci(60);
  const std::string text = oracle::fibonacci_prefix(1 << 16);
  for (std::size_t n = 1; n <= 60; ++n)
    EXPECT_EQ(as_strings(o, n), oracle::factors_of(text, n)) << "n=" << n;
}

TEST(Oracle, PeriodicAndFullShift)
{
  auto p = periodic_01(10);
  EXPECT_EQ(as_strings(p, 2), (std::set<std::string>{"01", "10"}));
  EXPECT_EQ(as_strings(p, 3), (std::set<std::string>{"010", "101"}));
  EXPECT_EQ(p->complexity(7), 2u);

  auto f = full_shift();
  EXPECT_EQ(as_strings(f, 2), (std::set<std::string>{"00", "01", "10", "11"}));
  EXPECT_EQ(f->complexity(3), 8u);
}

TEST(Oracle, BeyondDepthCarriesAchievedDepth)
{
  auto o = fibonacci(20);
  try {
    (void)o->factors(o->stabilized_to() + 1);
    FAIL();
  } catch (const OutOfCertifiedRange& e) {
    EXPECT_EQ(e.kind(), ErrorKind::out_of_certified_range);
    EXPECT_EQ(e.achieved(), o->stabilized_to());
  }
}

TEST(Oracle, ExplicitTrustDepthBinds)
{
  auto f = build_oracle(explicit_spec("full-2", "01", oracle::de_bruijn(8), 8), 20);
  EXPECT_EQ(f->stabilized_to(), 8u);
  EXPECT_TRUE(f->unstable());
}

TEST(Spec, RejectsNonPrimitiveSubstitution)
{
  try {
    build_oracle(substitution_spec("bad", "01", {"01", "1"}), 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_spec);
    EXPECT_NE(std::string(e.what()).find("symbol"), std::string::npos);
  }
}

TEST(Spec, RejectsBadInputs)
{
  EXPECT_THROW(build_oracle(periodic_spec("empty", "01", ""), 10), Error);
  EXPECT_THROW(build_oracle(sturmian_spec("zero", "ab", {0}), 10), Error);
  EXPECT_THROW(Alphabet("00"), Error);
  EXPECT_THROW(Alphabet("01").encode("012"), Error);
}

TEST(Spec, HashIgnoresName)
{
  auto a = substitution_spec("x", "01", {"01", "0"});
  auto b = substitution_spec("y", "01", {"01", "0"});
  auto c = substitution_spec("x", "01", {"01", "10"});
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), c.hash());
}

TEST(Spec, SturmianWithUnitCoefficientsIsFibonacciLanguage)
{
  auto s = build_oracle(sturmian_spec("golden", "01", {1}), 40);
  auto f = fibonacci(40);
  for (std::size_t n = 1; n <= 40; ++n) {
    auto a = as_strings(s, n), b = as_strings(f, n);
    // the two languages agree up to the letter exchange
    std::set<std::string> swapped;
    for (auto x : a) {
      for (char& ch : x)
        ch = ch == '0' ? '1' : '0';
      swapped.insert(x);
    }
    EXPECT_TRUE(a == b || swapped == b) << "n=" << n;
  }
}

TEST(Properties, FactorialExtendableCounting)
{
  for (const auto& o : aperiodic_instances()) {
    for (std::size_t n = 1; n < std::min<std::size_t>(o->stabilized_to(), 60); ++n) {
      std::size_t right_total = 0;
      for (const Word& x : o->factors(n)) {
        std::size_t rights = 0, lefts = 0;
        for (Symbol a = 0; a < o->alphabet().size(); ++a) {
          Word r = x, l = x;
          r.push_back(a);
          l.push_front(a);
          rights += o->contains(r);
          lefts += o->contains(l);
        }
        EXPECT_GE(rights, 1u);
        EXPECT_GE(lefts, 1u);
        right_total += rights;
      }
      EXPECT_EQ(right_total, o->complexity(n + 1)) << o->spec().name << " n=" << n;
      for (const Word& x : o->factors(n + 1)) {
        EXPECT_TRUE(o->contains(x.prefix(n)));
        EXPECT_TRUE(o->contains(x.suffix(n)));
      }
    }
  }
}

TEST(Properties, SturmianComplexityIsNPlusOne)
{
  for (const auto& o : {fibonacci(), sturmian_213()})
    for (std::size_t n = 1; n <= o->stabilized_to(); ++n)
      ASSERT_EQ(o->complexity(n), n + 1) << o->spec().name << " n=" << n;
}

TEST(Complexity, Periodicity)
{
  auto p = periodic_01(20);
  auto prof = complexity_series(*p, 20);
  EXPECT_EQ(detect_eventual_periodicity(prof), std::optional<std::size_t>(1));
  EXPECT_EQ(eventual_period(p->sample(), 0, prof.at(1)), std::optional<std::size_t>(2));
  EXPECT_TRUE(is_periodic(*p));

  EXPECT_FALSE(detect_eventual_periodicity(complexity_series(*fibonacci(), 50)));
  auto tm = complexity_series(*thue_morse(), 10);
  EXPECT_FALSE(detect_eventual_periodicity(tm));
  EXPECT_EQ(tm.values, (std::vector<std::uint64_t>{2, 4, 6, 10, 12, 16, 20, 22, 24, 28}));
}

TEST(Extensions, UniqueExtensionCounts)
{
  auto f = fibonacci();
  auto one = unique_extension_count(*f, w(f, "1"));
  EXPECT_EQ(one.right, 1u);
  EXPECT_EQ(one.left, 1u);
  EXPECT_FALSE(one.right_capped);
  auto zero = unique_extension_count(*f, w(f, "0"));
  EXPECT_EQ(zero.right, 0u);
  EXPECT_EQ(zero.left, 0u);

  auto p = periodic_01(20);
  auto pe = unique_extension_count(*p, w(p, "0"));
  EXPECT_TRUE(pe.right_capped);
  EXPECT_TRUE(pe.left_capped);

  EXPECT_THROW(unique_extension_count(*f, w(f, "11")), Error);
}

TEST(Extensions, KnValues)
{
  auto f = fibonacci();
  auto k1 = k_n(*f, 1);
  ASSERT_TRUE(k1.value);
  EXPECT_EQ(*k1.value, 2u);
  EXPECT_EQ(str(f, k1.witness), "1");

  auto p = periodic_01(20);
  try {
    k_n(*p, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::undefined_on_periodic);
  }
}

TEST(Extensions, ThueMorseKnByBruteForce)
{
  // k_n from the prefix scan: a word extends uniquely k times to the right if
  // exactly one factor of length n + k starts with it.
  auto o = thue_morse();
  const std::string text = oracle::thue_morse_prefix(1 << 16);
  for (std::size_t n = 1; n <= 6; ++n) {
    std::size_t best = 0;
    for (const auto& x : oracle::factors_of(text, n)) {
      auto run = [&](bool right) {
        std::size_t k = 0;
        for (;; ++k) {
          std::set<std::string> ext;
          for (const auto& y : oracle::factors_of(text, n + k + 1))
            if (right ? y.compare(0, n, x) == 0 : y.compare(k + 1, n, x) == 0)
              ext.insert(y);
          if (ext.size() != 1)
            return k;
        }
      };
      best = std::max(best, std::min(run(true), run(false)));
    }
    auto kn = k_n(*o, n);
    ASSERT_TRUE(kn.value);
    EXPECT_EQ(*kn.value, best + 1) << "n=" << n;
  }
}

TEST(Doubling, Examples)
{
  auto prof = complexity_series(*fibonacci(), 30);
  EXPECT_EQ(doubling_time(prof, 3), 4u);
  auto full = complexity_series(*full_shift(), 8);
  EXPECT_EQ(doubling_time(full, 5), 1u);
  auto per = complexity_series(*periodic_01(20), 20);
  EXPECT_THROW(doubling_time(per, 3), Error);
}

TEST(Properties, KnDoublingInequalities)
{
  for (const auto& o : aperiodic_instances()) {
    auto prof = complexity_series(*o, o->stabilized_to());
    for (std::size_t n = 1; n <= 20; ++n) {
      auto kn = k_n(*o, n);
      ASSERT_TRUE(kn.value) << o->spec().name << " n=" << n;
      std::size_t k = *kn.value;
      EXPECT_GE(prof.at(n + 2 * k), 2 * prof.at(n)) << o->spec().name << " n=" << n;
      EXPECT_LE(doubling_time(prof, n), 2 * k) << o->spec().name << " n=" << n;
    }
  }
}

TEST(Doubling, ReferenceFormula)
{
  EXPECT_EQ(reference_doubling_time(100, 0.5, 2.0), 21u);
  EXPECT_EQ(reference_doubling_time(1, 1.0, 2.0), 1u);
  double ratio = static_cast<double>(reference_doubling_time(10000, 0.5, 2.0)) /
                 reference_doubling_asymptotic(10000, 0.5, 2.0);
  EXPECT_NEAR(ratio, 1.0, 0.05);
  for (std::size_t n = 1; n <= 300; ++n)
    for (double beta : {0.3, 0.5, 1.0})
      for (double lambda : {1.5, 2.0, 3.0})
        EXPECT_EQ(reference_doubling_time(n, beta, lambda), oracle::doubling_scan(n, beta, lambda))
            << n << " " << beta << " " << lambda;
}

TEST(Diagnostics, Trends)
{
  auto fib = growth_diagnostics(complexity_series(*fibonacci(), 60), 0.5, 2);
  EXPECT_EQ(fib.poly_trend, Trend::decreasing);
  auto full = growth_diagnostics(complexity_series(*full_shift(), 12), 0.5, 2);
  EXPECT_EQ(full.log_trend, Trend::increasing);
  auto per = growth_diagnostics(complexity_series(*periodic_01(30), 30), 0.5, 1);
  EXPECT_EQ(per.poly_trend, Trend::decreasing);
  EXPECT_DOUBLE_EQ(per.poly_ratio[9], 0.2);
}
