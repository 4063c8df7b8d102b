#include <doctest.h>

#include <cstdlib>
#include <random>

#include "helpers.hpp"
#include "leglab/alpha.hpp"

using namespace leglab;
using leglab::test::R;
using leglab::test::T;

namespace {

AlphaSource sqrt2() { return AlphaSource::parse("cf:[1;(2)]"); }

// Leading partial quotients of the two series, taken from an independent
// exact-fraction computation (partial sum S_7 with tail bracket 2 t_8).
const std::vector<long long> kEx1A1 = {0, 1, 1, 1, 2, 1, 1, 1, 1, 1, 1, 1, 2, 1, 1, 1, 1, 2, 1, 1, 1, 1, 2, 1};
const std::vector<long long> kEx1A2 = {0, 7, 1, 1, 8, 1, 1, 7, 1, 1, 7, 1, 1, 6, 1, 1, 7, 1, 1, 8, 1, 1, 7, 1};
const std::vector<long long> kEx1A3 = {0, 17, 1, 1, 18, 1, 1, 17, 1, 1, 17, 1, 1, 16, 1, 1, 17, 1, 1, 18};
const std::vector<long long> kEx4A1 = {0, 3, 6, 4, 4, 2, 4, 6, 4, 2, 6, 4, 2, 4, 4, 6, 4, 2, 6, 4, 4, 2, 4, 6};
const std::vector<long long> kEx4A2 = {0, 15, 18, 16, 16, 14, 16, 18, 16, 14, 18, 16, 14, 16, 16, 18, 16, 14, 18, 16};

std::vector<BigInt> big(const std::vector<long long>& xs) { return {xs.begin(), xs.end()}; }

}  // namespace

TEST_SUITE("alpha") {
  TEST_CASE("terms of each kind") {
    CHECK(sqrt2().terms(4) == T({1, 2, 2, 2}));
    const AlphaSource third = AlphaSource::rational(R(1, 3));
    CHECK(third.terms(10) == T({0, 3}));
    CHECK(third.term(1) == BigInt(3));
    CHECK(!third.term(2).has_value());
    CHECK(third.length() == 2u);
    CHECK(AlphaSource::periodic({}, T({1})).terms(3) == T({1, 1, 1}));
    const AlphaSource e = AlphaSource::stream(
        [](std::size_t i) -> BigInt {
          if (i == 0) return 2;
          return (i % 3 == 2) ? BigInt(2 * (i / 3 + 1)) : BigInt(1);
        },
        "e");
    CHECK(e.terms(8) == T({2, 1, 2, 1, 1, 4, 1, 1}));
  }

  TEST_CASE("series terms match the exact-fraction oracle") {
    CHECK(series_source(SeriesFamily::Example1, 1).terms(kEx1A1.size()) == big(kEx1A1));
    CHECK(series_source(SeriesFamily::Example1, 2).terms(kEx1A2.size()) == big(kEx1A2));
    CHECK(series_source(SeriesFamily::Example1, 3).terms(kEx1A3.size()) == big(kEx1A3));
    CHECK(series_source(SeriesFamily::Example4, 1).terms(kEx4A1.size()) == big(kEx4A1));
    CHECK(series_source(SeriesFamily::Example4, 2).terms(kEx4A2.size()) == big(kEx4A2));
  }

  TEST_CASE("partial sums") {
    CHECK(partial_sum(SeriesFamily::Example1, 1, 1) == R(1, 2));
    CHECK(partial_sum(SeriesFamily::Example1, 1, 2) == R(5, 8));
    CHECK(partial_sum(SeriesFamily::Example1, 1, 3) == R(81, 128));
    CHECK(partial_sum(SeriesFamily::Example1, 2, 1) == R(1, 8));
    CHECK(partial_sum(SeriesFamily::Example4, 1, 1) == R(1, 4));
    CHECK(partial_sum(SeriesFamily::Example4, 1, 2) == R(5, 16));
    for (long long A = 1; A <= 3; ++A) {
      for (std::size_t N = 1; N <= 6; ++N) {
        const unsigned e = 1u << N;
        const Rational s1 = partial_sum(SeriesFamily::Example1, A, N);
        CHECK(s1.den() == (BigInt(1) << (e - 1)) * boost::multiprecision::pow(BigInt(A), e));
        const Rational s4 = partial_sum(SeriesFamily::Example4, A, N);
        CHECK(s4.den() == (BigInt(1) << e) * boost::multiprecision::pow(BigInt(A), e));
        CHECK(boost::multiprecision::bit_test(s1.num(), 0));
        CHECK(boost::multiprecision::bit_test(s4.num(), 0));
      }
    }
    CHECK_THROWS(partial_sum(SeriesFamily::Example1, 1, 0));
    CHECK_THROWS(series_source(SeriesFamily::Example1, 0));
  }

  TEST_CASE("tail bound 0 < sum_{n>N} t_n < 2 t_{N+1}") {
    for (auto family : {SeriesFamily::Example1, SeriesFamily::Example4}) {
      for (long long A = 1; A <= 3; ++A) {
        for (std::size_t N = 1; N <= 6; ++N) {
          Rational tail;
          for (std::size_t n = N + 1; n <= N + 10; ++n) tail += series_term(family, A, n);
          // Beyond N+10 each term is at most half the previous one, so the rest is below 2 t_{N+11}.
          const Rational rest_majorant = Rational(2) * series_term(family, A, N + 11);
          CHECK(tail.sign() > 0);
          CHECK(tail + rest_majorant < Rational(2) * series_term(family, A, N + 1));
          for (std::size_t n = N + 1; n <= N + 10; ++n) {
            CHECK(series_term(family, A, n + 1) * Rational(2) <= series_term(family, A, n));
          }
        }
      }
    }
  }

  TEST_CASE("bracket examples") {
    const Bracket b = sqrt2().bracket(2);
    CHECK(b.lo == R(7, 5));
    CHECK(b.hi == R(3, 2));
    CHECK(b.width() == R(1, 10));
    const Bracket d = AlphaSource::rational(R(1, 3)).bracket(2);
    CHECK(d.degenerate());
    CHECK(d.lo == R(1, 3));
    CHECK_THROWS(sqrt2().bracket(0));

    const AlphaSource s = series_source(SeriesFamily::Example1, 2);
    const Rational limit(BigInt(1), boost::multiprecision::pow(BigInt(10), 30));
    std::size_t depth = 1;
    while (s.bracket(depth).width() >= limit) ++depth;
    CHECK(depth < 60);
  }

  TEST_CASE("brackets nest and contain alpha for random sources") {
    std::mt19937 rng(20241016);
    std::uniform_int_distribution<int> term(1, 9);
    std::uniform_int_distribution<int> len(1, 4);
    for (int k = 0; k < 100; ++k) {
      std::vector<BigInt> prefix{BigInt(term(rng) - 5)};
      std::vector<BigInt> period;
      for (int i = 0, n = len(rng); i < n; ++i) period.emplace_back(term(rng));
      const AlphaSource a = AlphaSource::periodic(prefix, period);
      Bracket prev = a.bracket(1);
      for (std::size_t d = 2; d <= 12; ++d) {
        const Bracket b = a.bracket(d);
        REQUIRE(prev.lo <= b.lo);
        REQUIRE(b.hi <= prev.hi);
        REQUIRE(a.locate(b.lo) == Comparison::Greater);
        REQUIRE(a.locate(b.hi) == Comparison::Less);
        REQUIRE(b.width().num() == 1);
        prev = b;
      }
    }
  }

  TEST_CASE("sqrt2 convergents satisfy |p^2 - 2q^2| = 1") {
    const auto t = sqrt2().terms(60);
    const ConvergentTable table(t);
    for (std::ptrdiff_t n = 0; n < 60; ++n) {
      const BigInt v = table.p(n) * table.p(n) - 2 * table.q(n) * table.q(n);
      REQUIRE(abs(v) == 1);
    }
  }

  TEST_CASE("compare_error examples") {
    CHECK(compare_error(AlphaSource::rational(R(1, 3)), R(1, 2), R(1, 6)) == Comparison::Equal);
    CHECK(compare_error(AlphaSource::rational(R(1, 2)), R(1), R(1, 2)) == Comparison::Equal);
    CHECK(compare_error(sqrt2(), R(7, 5), R(1, 100)) == Comparison::Greater);
    CHECK(compare_error(sqrt2(), R(7, 5), R(1, 70)) == Comparison::Less);
    CHECK(compare_error(sqrt2(), R(7, 5), R(1, 71)) == Comparison::Greater);
    CHECK(compare_error(sqrt2(), R(3, 2), Rational(0)) == Comparison::Greater);
    CHECK_THROWS(compare_error(sqrt2(), R(1), R(-1)));
  }

  TEST_CASE("compare_error agrees with exact arithmetic on finite alpha") {
    std::size_t n = 0;
    for (long long b = 1; b <= 50; ++b) {
      for (long long a = 0; a <= b; ++a) {
        if (std::gcd(a, b) != 1) continue;
        const AlphaSource alpha = AlphaSource::rational(R(a, b));
        for (long long q = 1; q <= 50; ++q) {
          // p near alpha, where the comparisons are interesting.
          const long long centre = (a * q) / b;
          for (long long p = centre - 1; p <= centre + 2; ++p) {
            if (std::gcd(p, q) != 1) continue;
            const Rational err = (R(a, b) - R(p, q)).abs();
            for (const Rational& bound : {R(1, 2 * q * q), R(1, 2 * q * q - q), R(2, 3 * q * q), R(2, 2 * q * q - q)}) {
              const Comparison expected =
                  err < bound ? Comparison::Less : (err == bound ? Comparison::Equal : Comparison::Greater);
              REQUIRE(compare_error(alpha, R(p, q), bound) == expected);
              ++n;
            }
          }
        }
      }
    }
    CHECK(n > 100000);
  }

  TEST_CASE("locate on series uses the enclosure") {
    const AlphaSource s = series_source(SeriesFamily::Example1, 1);
    for (std::size_t N = 1; N <= 6; ++N) {
      const Rational sn = partial_sum(SeriesFamily::Example1, 1, N);
      CHECK(s.locate(sn) == Comparison::Greater);
      CHECK(s.locate(sn + Rational(2) * series_term(SeriesFamily::Example1, 1, N + 1)) == Comparison::Less);
      auto [lo, hi] = s.enclosure(N);
      CHECK(lo == sn);
      CHECK(hi > lo);
    }
  }

  TEST_CASE("budget exhaustion is a distinct signal") {
    AlphaSource a = sqrt2();
    a.set_budget(RefinementBudget{5, 4096});
    CHECK_THROWS_AS(a.terms(10), BudgetExhausted);
    // Separating sqrt2 from 99/70 needs more than five terms.
    AlphaSource b = sqrt2();
    b.set_budget(RefinementBudget{4, 4096});
    CHECK_THROWS_AS(b.locate(R(99, 70)), BudgetExhausted);
    AlphaSource c = series_source(SeriesFamily::Example1, 1);
    c.set_budget(RefinementBudget{10000, 16});
    CHECK_THROWS_AS(c.locate(partial_sum(SeriesFamily::Example1, 1, 6)), BudgetExhausted);
  }

  TEST_CASE("LEGLAB_BUDGET overrides max_terms") {
    ::setenv("LEGLAB_BUDGET", "123", 1);
    CHECK(RefinementBudget::from_env().max_terms == 123);
    ::setenv("LEGLAB_BUDGET", "junk", 1);
    CHECK(RefinementBudget::from_env().max_terms == 10000);
    ::unsetenv("LEGLAB_BUDGET");
  }

  TEST_CASE("literals") {
    CHECK(AlphaSource::parse("rat:5/8").literal() == "rat:5/8");
    CHECK(AlphaSource::parse("cf:[0;1,1,1,2]").exact() == R(5, 8));
    // Non-canonical finite input is canonicalized.
    CHECK(AlphaSource::parse("cf:[0;1,1]").terms(5) == T({0, 2}));
    CHECK(AlphaSource::parse("cf:[1;(2)]").literal() == "cf:[1;(2)]");
    CHECK(AlphaSource::parse("cf:[(1)]").terms(3) == T({1, 1, 1}));
    CHECK(AlphaSource::parse("cf:[0;1,(2,3)]").terms(6) == T({0, 1, 2, 3, 2, 3}));
    CHECK(AlphaSource::parse("series:ex4:A=2").literal() == "series:ex4:A=2");
    for (const char* bad : {"5/8", "rat:", "cf:[0;(0)]", "cf:[0;()]", "series:ex2:A=1", "series:ex1:A=0", "cf:[(1)"}) {
      CHECK_THROWS(AlphaSource::parse(bad));
    }
  }

  TEST_CASE("copies refine independently") {
    const AlphaSource s = series_source(SeriesFamily::Example1, 1);
    (void)s.terms(5);
    const AlphaSource copy = s;
    CHECK(copy.terms(12) == s.terms(12));
  }
}
