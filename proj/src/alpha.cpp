#include "leglab/alpha.hpp"

#include <cstdlib>
#include <mutex>

namespace leglab {

namespace {

bool narrower_than(const Rational& width, std::size_t bits) {
  if (width.sign() == 0) return true;
  const auto num_bits = boost::multiprecision::msb(width.num());
  const auto den_bits = boost::multiprecision::msb(width.den());
  return den_bits > num_bits + bits;
}

/// Partial quotients shared by every real number in the open interval
/// (lo, hi). Stops at the first term the interval does not pin down.
std::vector<BigInt> common_terms(Rational lo, Rational hi) {
  std::vector<BigInt> out;
  while (true) {
    BigInt a = lo.floor();
    if (hi > Rational(a + 1)) break;
    Rational lo_frac = lo - Rational(a);
    Rational hi_frac = hi - Rational(a);
    out.push_back(std::move(a));
    if (lo_frac.sign() == 0) break;
    lo = hi_frac.reciprocal();
    hi = lo_frac.reciprocal();
  }
  return out;
}

std::pair<Rational, Rational> ordered(Rational a, Rational b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

}  // namespace

RefinementBudget RefinementBudget::from_env() {
  RefinementBudget budget;
  if (const char* env = std::getenv("LEGLAB_BUDGET"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) budget.max_terms = static_cast<std::size_t>(v);
  }
  return budget;
}

std::string_view to_string(SeriesFamily family) {
  return family == SeriesFamily::Example1 ? "ex1" : "ex4";
}

std::string_view to_string(Comparison c) {
  switch (c) {
    case Comparison::Less: return "LESS";
    case Comparison::Equal: return "EQUAL";
    case Comparison::Greater: return "GREATER";
  }
  return "?";
}

Rational series_term(SeriesFamily family, const BigInt& A, std::size_t n) {
  if (n < 1) throw std::invalid_argument("series terms start at n = 1");
  if (A < 1) throw std::invalid_argument("series parameter A must be >= 1");
  if (n > 30) throw std::overflow_error("series term index " + std::to_string(n) + " is out of range");
  const unsigned e = 1u << n;  // 2^n
  const unsigned two_power = family == SeriesFamily::Example1 ? e - 1 : e;
  BigInt den = (BigInt(1) << two_power) * boost::multiprecision::pow(A, e);
  return Rational(BigInt(1), std::move(den));
}

Rational partial_sum(SeriesFamily family, const BigInt& A, std::size_t N) {
  if (N < 1) throw std::invalid_argument("partial sums start at N = 1");
  Rational sum;
  for (std::size_t n = 1; n <= N; ++n) sum += series_term(family, A, n);
  return sum;
}

struct AlphaSource::State {
  Kind kind = Kind::FiniteRational;
  std::optional<Rational> exact;
  std::vector<BigInt> prefix;
  std::vector<BigInt> period;
  SeriesFamily family = SeriesFamily::Example1;
  BigInt A;
  Generator generator;
  std::string label;
  RefinementBudget budget = RefinementBudget::from_env();

  mutable std::mutex mu;
  mutable std::vector<BigInt> cache;
  mutable std::size_t series_level = 0;

  State() = default;
  State(const State& o)
      : kind(o.kind), exact(o.exact), prefix(o.prefix), period(o.period), family(o.family), A(o.A),
        generator(o.generator), label(o.label), budget(o.budget) {
    std::lock_guard lock(o.mu);
    cache = o.cache;
    series_level = o.series_level;
  }

  BigInt generated_term(std::size_t i) const {
    if (kind == Kind::Periodic) {
      if (i < prefix.size()) return prefix[i];
      return period[(i - prefix.size()) % period.size()];
    }
    BigInt a = generator(i);
    if (i >= 1 && a < 1) throw std::runtime_error("stream '" + label + "' produced a partial quotient < 1");
    return a;
  }

  std::pair<Rational, Rational> series_enclosure(std::size_t level) const {
    Rational lo = partial_sum(family, A, level);
    Rational hi = lo + Rational(2) * series_term(family, A, level + 1);
    return {std::move(lo), std::move(hi)};
  }

  // Requires mu held.
  void fill(std::size_t k) const {
    if (cache.size() >= k) return;
    switch (kind) {
      case Kind::FiniteRational:
        return;
      case Kind::Periodic:
      case Kind::ExplicitStream:
        if (k > budget.max_terms) {
          throw BudgetExhausted("needs " + std::to_string(k) + " terms, budget is " + std::to_string(budget.max_terms));
        }
        while (cache.size() < k) cache.push_back(generated_term(cache.size()));
        return;
      case Kind::Series:
        if (k > budget.max_terms) {
          throw BudgetExhausted("needs " + std::to_string(k) + " terms, budget is " + std::to_string(budget.max_terms));
        }
        while (cache.size() < k) {
          const std::size_t level = series_level + 1;
          auto [lo, hi] = series_enclosure(level);
          if (narrower_than(hi - lo, budget.max_width_bits)) {
            throw BudgetExhausted("series enclosure reached the width budget at level " + std::to_string(level));
          }
          std::vector<BigInt> confirmed = common_terms(lo, hi);
          if (confirmed.size() > cache.size()) {
            for (std::size_t i = 0; i < cache.size(); ++i) {
              if (confirmed[i] != cache[i]) throw std::logic_error("series refinement changed a confirmed term");
            }
            cache = std::move(confirmed);
          }
          series_level = level;
        }
        return;
    }
  }
};

AlphaSource::AlphaSource(std::unique_ptr<State> state) : state_(std::move(state)) {}
AlphaSource::AlphaSource(const AlphaSource& other) : state_(std::make_unique<State>(*other.state_)) {}
AlphaSource& AlphaSource::operator=(const AlphaSource& other) {
  if (this != &other) state_ = std::make_unique<State>(*other.state_);
  return *this;
}
AlphaSource::AlphaSource(AlphaSource&&) noexcept = default;
AlphaSource& AlphaSource::operator=(AlphaSource&&) noexcept = default;
AlphaSource::~AlphaSource() = default;

AlphaSource AlphaSource::rational(const Rational& value) {
  auto s = std::make_unique<State>();
  s->kind = Kind::FiniteRational;
  s->exact = value;
  s->cache = expand_rational(value).terms();
  return AlphaSource(std::move(s));
}

AlphaSource AlphaSource::finite(const CFExpansion& cf) {
  auto s = std::make_unique<State>();
  s->kind = Kind::FiniteRational;
  s->exact = evaluate(cf);
  s->cache = cf.terms();
  return AlphaSource(std::move(s));
}

AlphaSource AlphaSource::periodic(std::vector<BigInt> prefix, std::vector<BigInt> period) {
  if (period.empty()) throw std::invalid_argument("periodic part must be non-empty");
  for (const auto& a : period) {
    if (a < 1) throw std::invalid_argument("periodic terms must be >= 1");
  }
  if (!prefix.empty()) validate_prefix(prefix);
  auto s = std::make_unique<State>();
  s->kind = Kind::Periodic;
  s->prefix = std::move(prefix);
  s->period = std::move(period);
  return AlphaSource(std::move(s));
}

AlphaSource AlphaSource::series(SeriesFamily family, BigInt A) {
  if (A < 1) throw std::invalid_argument("series parameter A must be >= 1");
  auto s = std::make_unique<State>();
  s->kind = Kind::Series;
  s->family = family;
  s->A = std::move(A);
  return AlphaSource(std::move(s));
}

AlphaSource AlphaSource::stream(Generator generator, std::string label) {
  if (!generator) throw std::invalid_argument("stream needs a generator");
  auto s = std::make_unique<State>();
  s->kind = Kind::ExplicitStream;
  s->generator = std::move(generator);
  s->label = std::move(label);
  return AlphaSource(std::move(s));
}

AlphaSource series_source(SeriesFamily family, BigInt A) { return AlphaSource::series(family, std::move(A)); }

AlphaSource AlphaSource::parse(std::string_view literal) {
  auto fail = [&](const std::string& why) {
    return std::invalid_argument("bad alpha literal '" + std::string(literal) + "': " + why);
  };
  if (literal.starts_with("rat:")) return rational(Rational::parse(literal.substr(4)));
  if (literal.starts_with("series:")) {
    std::string_view rest = literal.substr(7);
    SeriesFamily family;
    if (rest.starts_with("ex1:")) family = SeriesFamily::Example1;
    else if (rest.starts_with("ex4:")) family = SeriesFamily::Example4;
    else throw fail("series family must be ex1 or ex4");
    rest = rest.substr(4);
    if (!rest.starts_with("A=")) throw fail("expected A=<integer>");
    BigInt A = parse_bigint(rest.substr(2));
    if (A < 1) throw fail("A must be >= 1");
    return series(family, std::move(A));
  }
  if (literal.starts_with("cf:")) {
    std::string_view body = literal.substr(3);
    const auto open = body.find('(');
    if (open == std::string_view::npos) return rational(evaluate_terms(parse_terms(body)));
    const auto close = body.find(')', open);
    if (close == std::string_view::npos || body.substr(close + 1) != "]" || body.empty() || body.front() != '[') {
      throw fail("periodic part must be a final parenthesized group, e.g. cf:[1;(2)]");
    }
    std::string head(body.substr(1, open - 1));
    while (!head.empty() && (head.back() == ',' || head.back() == ';' || head.back() == ' ')) head.pop_back();
    std::vector<BigInt> prefix;
    if (!head.empty()) prefix = parse_terms("[" + head + "]");
    std::vector<BigInt> period;
    std::string_view inner = body.substr(open + 1, close - open - 1);
    while (true) {
      const auto comma = inner.find(',');
      std::string_view item = inner.substr(0, comma);
      while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
      while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
      period.push_back(parse_bigint(item));
      if (comma == std::string_view::npos) break;
      inner = inner.substr(comma + 1);
    }
    return periodic(std::move(prefix), std::move(period));
  }
  throw fail("expected rat:, cf: or series: prefix");
}

AlphaSource::Kind AlphaSource::kind() const { return state_->kind; }
const std::optional<Rational>& AlphaSource::exact() const { return state_->exact; }

std::optional<std::size_t> AlphaSource::length() const {
  if (!is_finite()) return std::nullopt;
  return state_->cache.size();
}

std::string AlphaSource::literal() const {
  const State& s = *state_;
  switch (s.kind) {
    case Kind::FiniteRational:
      return "rat:" + s.exact->str();
    case Kind::Periodic: {
      std::string out = "cf:[";
      for (std::size_t i = 0; i < s.prefix.size(); ++i) {
        out += s.prefix[i].str();
        out += i == 0 ? ";" : ",";
      }
      out += "(";
      for (std::size_t i = 0; i < s.period.size(); ++i) {
        if (i > 0) out += ",";
        out += s.period[i].str();
      }
      return out + ")]";
    }
    case Kind::Series:
      return "series:" + std::string(to_string(s.family)) + ":A=" + s.A.str();
    case Kind::ExplicitStream:
      return "stream:" + s.label;
  }
  return {};
}

const RefinementBudget& AlphaSource::budget() const { return state_->budget; }
void AlphaSource::set_budget(const RefinementBudget& budget) { state_->budget = budget; }

std::vector<BigInt> AlphaSource::terms(std::size_t k) const {
  std::lock_guard lock(state_->mu);
  state_->fill(k);
  const std::size_t n = std::min(k, state_->cache.size());
  return {state_->cache.begin(), state_->cache.begin() + static_cast<std::ptrdiff_t>(n)};
}

std::optional<BigInt> AlphaSource::term(std::size_t i) const {
  std::lock_guard lock(state_->mu);
  state_->fill(i + 1);
  if (i >= state_->cache.size()) return std::nullopt;
  return state_->cache[i];
}

Bracket AlphaSource::bracket(std::size_t depth) const {
  if (depth < 1) throw std::invalid_argument("bracket depth must be >= 1");
  if (is_finite() && depth + 1 >= state_->cache.size()) return Bracket{*exact(), *exact(), depth};
  const auto t = terms(depth + 1);
  const ConvergentTable table(t);
  auto [lo, hi] = ordered(table.value(depth - 1), table.value(depth));
  return Bracket{std::move(lo), std::move(hi), depth};
}

std::pair<Rational, Rational> AlphaSource::enclosure(std::size_t level) const {
  if (is_finite()) throw std::logic_error("enclosure is only defined for infinite expansions");
  if (level < 1) throw std::invalid_argument("enclosure level must be >= 1");
  if (kind() == Kind::Series) return state_->series_enclosure(level);
  const auto t = terms(level + 1);
  const ConvergentTable table(t);
  return ordered(table.value(level - 1), table.value(level));
}

Comparison AlphaSource::locate(const Rational& x) const {
  if (is_finite()) {
    const auto c = *exact() <=> x;
    return c < 0 ? Comparison::Less : (c > 0 ? Comparison::Greater : Comparison::Equal);
  }
  const RefinementBudget& b = budget();
  if (kind() == Kind::Series) {
    for (std::size_t level = 1;; ++level) {
      auto [lo, hi] = state_->series_enclosure(level);
      if (hi <= x) return Comparison::Less;
      if (lo >= x) return Comparison::Greater;
      if (narrower_than(hi - lo, b.max_width_bits)) {
        throw BudgetExhausted("cannot separate " + literal() + " from " + x.str() + " within the width budget");
      }
    }
  }
  // Consecutive convergents straddle alpha strictly when the expansion is infinite.
  ConvergentTable table;
  for (std::size_t i = 0;; ++i) {
    if (i + 1 > b.max_terms) {
      throw BudgetExhausted("cannot separate " + literal() + " from " + x.str() + " within " +
                            std::to_string(b.max_terms) + " terms");
    }
    table.push(*term(i));
    if (i == 0) continue;
    const auto n = static_cast<std::ptrdiff_t>(i);
    auto [lo, hi] = ordered(table.value(i - 1), table.value(i));
    if (hi <= x) return Comparison::Less;
    if (lo >= x) return Comparison::Greater;
    if (narrower_than(Rational(BigInt(1), table.q(n) * table.q(n - 1)), b.max_width_bits)) {
      throw BudgetExhausted("cannot separate " + literal() + " from " + x.str() + " within the width budget");
    }
  }
}

Comparison compare_error(const AlphaSource& alpha, const Rational& pq, const Rational& bound) {
  if (bound.sign() < 0) throw std::invalid_argument("error bound must be non-negative");
  if (const auto& exact = alpha.exact()) {
    const auto c = (*exact - pq).abs() <=> bound;
    return c < 0 ? Comparison::Less : (c > 0 ? Comparison::Greater : Comparison::Equal);
  }
  // alpha is irrational here, so it never lands on a rational endpoint.
  if (bound.sign() == 0) return Comparison::Greater;
  if (alpha.locate(pq - bound) == Comparison::Less) return Comparison::Greater;
  if (alpha.locate(pq + bound) == Comparison::Greater) return Comparison::Greater;
  return Comparison::Less;
}

}  // namespace leglab
