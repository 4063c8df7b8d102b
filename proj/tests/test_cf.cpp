#include <doctest.h>

#include <numeric>

#include "helpers.hpp"
#include "leglab/cf.hpp"

using namespace leglab;
using leglab::test::R;
using leglab::test::T;

namespace {

// All prefixes [a0; a1..a_{len-1}] with a0 in {-1, 0, 1}, later terms 1..max_term.
template <class Fn>
void for_each_prefix(int max_term, int max_len, Fn fn) {
  std::vector<BigInt> t;
  auto rec = [&](auto&& self, int len) -> void {
    fn(t);
    if (len == max_len) return;
    for (int a = 1; a <= max_term; ++a) {
      t.emplace_back(a);
      self(self, len + 1);
      t.pop_back();
    }
  };
  for (int a0 = -1; a0 <= 1; ++a0) {
    t = {BigInt(a0)};
    rec(rec, 1);
  }
}

}  // namespace

TEST_SUITE("cf") {
  TEST_CASE("expand_rational examples") {
    CHECK(expand_rational(R(5, 8)).str() == "[0;1,1,1,2]");
    CHECK(expand_rational(R(3)).str() == "[3]");
    CHECK(expand_rational(R(1, 3)).str() == "[0;3]");
    CHECK(expand_rational(R(7, 5)).str() == "[1;2,2]");
    CHECK(expand_rational(R(-1, 2)).str() == "[-1;2]");
    CHECK(expand_rational(R(-7, 5)).str() == "[-2;1,1,2]");
  }

  TEST_CASE("evaluate examples") {
    CHECK(evaluate(CFExpansion::parse("[0;2]")) == R(1, 2));
    CHECK(evaluate(CFExpansion::parse("[1]")) == R(1));
    CHECK(evaluate(CFExpansion::parse("[0;2,2]")) == R(2, 5));
    CHECK(evaluate(CFExpansion::parse("[-1;2]")) == R(-1, 2));
  }

  TEST_CASE("text format") {
    CHECK(parse_terms(" [ 0 ; 1 , 1 ] ") == T({0, 1, 1}));
    CHECK(parse_terms("[-3]") == T({-3}));
    CHECK_THROWS(parse_terms("[0;0]"));
    CHECK_THROWS(parse_terms("0;2"));
    CHECK_THROWS(parse_terms("[0;2,]"));
    CHECK_THROWS(CFExpansion::parse("[0;2,1]"));
    CHECK_NOTHROW(CFExpansion::parse("[5]"));
    CHECK_THROWS(CFExpansion(std::vector<BigInt>{}));
  }

  TEST_CASE("round trip over |p| <= 10^4, q <= 10^4 sample grid") {
    // Every q up to 10^4 with a spread of numerators, plus every p for small q.
    std::size_t checked = 0;
    for (long long q = 1; q <= 10000; ++q) {
      const long long step = q <= 60 ? 1 : 997;
      for (long long p = -10000; p <= 10000; p += step) {
        if (std::gcd(p, q) != 1) continue;
        const Rational r = R(p, q);
        const CFExpansion cf = expand_rational(r);
        REQUIRE(evaluate(cf) == r);
        REQUIRE((cf.size() == 1 || cf.terms().back() >= 2));
        ++checked;
      }
    }
    CHECK(checked > 500000);
  }

  TEST_CASE("non-canonical tail rule") {
    for_each_prefix(4, 4, [](const std::vector<BigInt>& t) {
      std::vector<BigInt> with_one = t;
      with_one.emplace_back(1);
      std::vector<BigInt> bumped = t;
      if (bumped.size() == 1) return;  // [a0;1] = [a0+1] is covered below
      bumped.back() += 1;
      REQUIRE(evaluate_terms(with_one) == evaluate_terms(bumped));
      REQUIRE(expand_rational(evaluate_terms(with_one)).terms() == bumped);
    });
    CHECK(evaluate_terms(T({2, 1})) == R(3));
  }

  TEST_CASE("convergent table examples") {
    const auto t = T({1, 2, 2, 2});
    const ConvergentTable table = convergent_table(t);
    CHECK(table.size() == 4);
    CHECK(table.value(0) == R(1));
    CHECK(table.value(1) == R(3, 2));
    CHECK(table.value(2) == R(7, 5));
    CHECK(table.value(3) == R(17, 12));
    CHECK(table.p(-2) == 0);
    CHECK(table.q(-2) == 1);
    CHECK(table.p(-1) == 1);
    CHECK(table.q(-1) == 0);

    const ConvergentTable small = convergent_table(T({0, 3}));
    CHECK(small.value(0) == R(0));
    CHECK(small.value(1) == R(1, 3));
    CHECK(small.q(1) * small.p(0) - small.p(1) * small.q(0) == -1);
    CHECK_THROWS(convergent_table(T({0, 0})));
  }

  TEST_CASE("determinant identity and growth on every prefix") {
    for_each_prefix(6, 6, [](const std::vector<BigInt>& t) {
      const ConvergentTable table(t);
      for (std::ptrdiff_t n = -2; n + 1 < static_cast<std::ptrdiff_t>(t.size()); ++n) {
        const BigInt det = table.q(n + 1) * table.p(n) - table.p(n + 1) * table.q(n);
        REQUIRE(det == ((n + 1) % 2 == 0 ? 1 : -1));
      }
      REQUIRE(table.q(0) == 1);
      for (std::ptrdiff_t n = 1; n + 1 < static_cast<std::ptrdiff_t>(t.size()); ++n) {
        REQUIRE(table.q(n + 1) > table.q(n));
      }
      REQUIRE(table.value(t.size() - 1) == evaluate_terms(t));
    });
  }

  TEST_CASE("mediants_at examples") {
    const auto m3 = mediants_at(T({0, 3}), 0);
    REQUIRE(m3.size() == 2);
    CHECK(m3[0].value == R(1));
    CHECK(m3[1].value == R(1, 2));
    CHECK(m3[0].nearest());
    CHECK(m3[1].nearest());
    CHECK(m3[0].first());
    CHECK(!m3[1].first());

    const auto m5 = mediants_at(T({0, 5}), 0);
    REQUIRE(m5.size() == 4);
    CHECK(m5[2].value == R(1, 3));
    CHECK(m5[0].nearest());
    CHECK(!m5[1].nearest());
    CHECK(!m5[2].nearest());
    CHECK(m5[3].nearest());
    CHECK(m5[3].value == R(1, 4));

    const auto m22 = mediants_at(T({0, 2, 2}), 1);
    REQUIRE(m22.size() == 1);
    CHECK(m22[0].value == R(1, 3));
    CHECK(m22[0].b == 1);

    CHECK(mediants_at(T({0, 1, 2}), 0).empty());
    CHECK_THROWS_AS(mediants_at(T({0, 3}), 1), std::out_of_range);
  }

  TEST_CASE("mediants are reduced and interleave the convergents") {
    for_each_prefix(6, 5, [](const std::vector<BigInt>& t) {
      if (t.size() < 2) return;
      const ConvergentTable table(t);
      for (std::size_t n = 0; n + 1 < t.size(); ++n) {
        const auto ms = mediants_at(t, n);
        REQUIRE(ms.size() == static_cast<std::size_t>(t[n + 1] - 1));
        const auto i = static_cast<std::ptrdiff_t>(n);
        BigInt prev_q = table.q(i);
        for (const auto& m : ms) {
          const BigInt num = m.b * table.p(i) + table.p(i - 1);
          const BigInt den = m.b * table.q(i) + table.q(i - 1);
          REQUIRE(boost::multiprecision::gcd(num, den) == 1);
          REQUIRE(m.value.num() == num);
          REQUIRE(m.value.den() == den);
          // At n = 0 the first mediant b = 1 has denominator q_0 = 1.
          REQUIRE((den > prev_q || (n == 0 && m.b == 1)));
          REQUIRE(den < table.q(i + 1));
          REQUIRE(m.nearest() == (m.b == 1 || m.b == t[n + 1] - 1));
          prev_q = den;
        }
      }
    });
  }

  TEST_CASE("shared_prefix examples") {
    auto sp = shared_prefix(CFExpansion::parse("[0;2,2]"), CFExpansion::parse("[0;3]"));
    CHECK(sp.length == 1);
    CHECK(sp.p == 0);
    CHECK(sp.q == 1);
    sp = shared_prefix(CFExpansion::parse("[1;2,2]"), CFExpansion::parse("[1;2,3]"));
    CHECK(sp.length == 2);
    CHECK(sp.p == 3);
    CHECK(sp.q == 2);
    sp = shared_prefix(CFExpansion::parse("[1;2,2]"), CFExpansion::parse("[1;2,2]"));
    CHECK(sp.length == 3);
    sp = shared_prefix(CFExpansion::parse("[1;2]"), CFExpansion::parse("[0;2]"));
    CHECK(sp.length == 0);
    CHECK(sp.p == 1);
    CHECK(sp.q == 0);
  }
}
