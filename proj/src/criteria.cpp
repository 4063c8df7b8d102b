#include "leglab/criteria.hpp"

#include <functional>

namespace leglab {

std::string_view to_string(TheoremId id) {
  switch (id) {
    case TheoremId::Legendre: return "legendre";
    case TheoremId::Koksma: return "koksma";
    case TheoremId::BarbolosiJager: return "barbolosi-jager";
    case TheoremId::RefinedT1: return "refined-t1";
    case TheoremId::RefinedT2: return "refined-t2";
    case TheoremId::RefinedT3: return "refined-t3";
    case TheoremId::RefinedT6: return "refined-t6";
  }
  return "?";
}

std::optional<TheoremId> parse_theorem(std::string_view name) {
  for (TheoremId id : kAllTheorems) {
    if (to_string(id) == name) return id;
  }
  if (name == "bj") return TheoremId::BarbolosiJager;
  return std::nullopt;
}

bool strict_hypothesis(TheoremId id) {
  return id == TheoremId::Legendre || id == TheoremId::Koksma || id == TheoremId::BarbolosiJager;
}

int exception_count(TheoremId id) {
  switch (id) {
    case TheoremId::RefinedT1: return 1;
    case TheoremId::RefinedT2: return 5;
    case TheoremId::RefinedT3: return 3;
    case TheoremId::RefinedT6: return 7;
    default: return 0;
  }
}

Rational bound(TheoremId id, const BigInt& q, const std::optional<BigInt>& q_prev) {
  if (q < 1) throw std::invalid_argument("bound needs q >= 1");
  if ((id == TheoremId::RefinedT3) != q_prev.has_value()) {
    throw std::invalid_argument(id == TheoremId::RefinedT3 ? "refined-t3 bound needs q_prev"
                                                           : "q_prev is only meaningful for refined-t3");
  }
  const BigInt q2 = q * q;
  switch (id) {
    case TheoremId::Legendre:
      return Rational(BigInt(1), 2 * q2);
    case TheoremId::Koksma:
    case TheoremId::BarbolosiJager:
      return Rational(BigInt(2), 3 * q2);
    case TheoremId::RefinedT1:
      // 1 / ((2 - (q-1)/q^2) q^2)
      return Rational(BigInt(1), 2 * q2 - q + 1);
    case TheoremId::RefinedT2:
      // 1 / ((2 - 1/q) q^2)
      return Rational(BigInt(1), 2 * q2 - q);
    case TheoremId::RefinedT3:
      if (*q_prev < 0 || *q_prev > q) throw std::invalid_argument("refined-t3 needs 0 <= q_prev <= q");
      // 1 / ((2 - q_prev/q) q^2)
      return Rational(BigInt(1), 2 * q2 - *q_prev * q);
    case TheoremId::RefinedT6:
      // 1 / ((1 - 1/(2q)) q^2)
      return Rational(BigInt(2), 2 * q2 - q);
  }
  throw std::logic_error("unknown theorem");
}

std::string_view to_string(Classification::Kind kind) {
  switch (kind) {
    case Classification::Kind::Convergent: return "convergent";
    case Classification::Kind::NearestMediant: return "nearest_mediant";
    case Classification::Kind::InteriorMediant: return "interior_mediant";
    case Classification::Kind::Other: return "other";
  }
  return "?";
}

std::string_view to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::HoldsStrict: return "holds_strict";
    case Hypothesis::HoldsEquality: return "holds_equality";
    case Hypothesis::Fails: return "fails";
  }
  return "?";
}

namespace {

Classification make_mediant(std::size_t n, BigInt b, BigInt next_term, const Rational& value) {
  Classification c;
  c.n = n;
  c.mediant = MediantRef{n, std::move(b), std::move(next_term), value};
  c.kind = c.mediant->nearest() ? Classification::Kind::NearestMediant : Classification::Kind::InteriorMediant;
  return c;
}

Classification make_convergent(std::size_t n) {
  Classification c;
  c.kind = Classification::Kind::Convergent;
  c.n = n;
  return c;
}

// Convergents of alpha are [a0;...,an] and, when a_{n+1} = 1 follows,
// [a0;...,a_{n-1},a_n + 1]. Mediants are [a0;...,an,b] for 2 <= b < a_{n+1}
// and [a0;...,a_n + 1] for b = 1. Everything else differs from alpha before
// its own last term.
Classification classify_cf(const Rational& pq, const CFExpansion& cf, const AlphaSource& alpha) {
  const auto& c = cf.terms();
  const std::size_t m = c.size() - 1;
  std::size_t j = 0;
  while (j <= m) {
    const auto a = alpha.term(j);
    if (!a || *a != c[j]) break;
    ++j;
  }
  if (j == m + 1) return make_convergent(m);
  if (j < m) return {};

  const auto am = alpha.term(m);
  if (!am) return {};
  if (*am == c[m] - 1) {
    auto next = alpha.term(m + 1);
    if (!next) return {};
    if (*next == 1) return make_convergent(m + 1);
    return make_mediant(m, 1, std::move(*next), pq);
  }
  if (m >= 1 && *am > c[m]) return make_mediant(m - 1, c[m], *am, pq);
  return {};
}

/// Lazily read view of alpha's expansion for the exception patterns.
class AlphaShape {
 public:
  explicit AlphaShape(const AlphaSource& alpha) : alpha_(alpha) {}

  std::optional<BigInt> at(std::size_t i) const { return alpha_.term(i); }
  bool has(std::size_t i) const { return at(i).has_value(); }
  bool term_is(std::size_t i, const BigInt& v) const {
    const auto a = at(i);
    return a && *a == v;
  }
  /// Exactly `n` terms, i.e. finite with a_{n-1} last.
  bool length_is(std::size_t n) const { return alpha_.length() == n; }

 private:
  const AlphaSource& alpha_;
};

bool pq_is(const CFExpansion& cf, std::initializer_list<BigInt> terms) {
  if (cf.size() != terms.size()) return false;
  std::size_t i = 0;
  for (const auto& t : terms) {
    if (cf[i++] != t) return false;
  }
  return true;
}

struct Pattern {
  int index;
  std::function<std::optional<std::string>(const CFExpansion&, const AlphaShape&)> match;
};

using Match = std::optional<std::string>;
const Match kNoMatch = std::nullopt;
const Match kMatch = std::string{};

Match alpha_a0_2_pq_a0_plus_1(const CFExpansion& c, const AlphaShape& a) {
  // alpha = [a0;2], p/q = [a0+1]
  const BigInt a0 = *a.at(0);
  return a.length_is(2) && a.term_is(1, 2) && pq_is(c, {a0 + 1}) ? kMatch : kNoMatch;
}

Match alpha_a0_3_pq_a0_2(const CFExpansion& c, const AlphaShape& a) {
  // alpha = [a0;3], p/q = [a0;2]
  const BigInt a0 = *a.at(0);
  return a.length_is(2) && a.term_is(1, 3) && pq_is(c, {a0, 2}) ? kMatch : kNoMatch;
}

Match a2_presence(const AlphaShape& a) { return a.has(2) ? std::string("a2 present") : std::string("a2 absent"); }

const std::vector<Pattern>& patterns(TheoremId id) {
  static const std::vector<Pattern> none;
  static const std::vector<Pattern> t1 = {
      {1, alpha_a0_2_pq_a0_plus_1},
  };
  static const std::vector<Pattern> t2 = {
      {1,
       [](const CFExpansion& c, const AlphaShape& a) {
         // alpha = [a0], p/q = [a0-1]
         return a.length_is(1) && pq_is(c, {*a.at(0) - 1}) ? kMatch : kNoMatch;
       }},
      {2,
       [](const CFExpansion& c, const AlphaShape& a) {
         // alpha = [a0], p/q = [a0+1]
         return a.length_is(1) && pq_is(c, {*a.at(0) + 1}) ? kMatch : kNoMatch;
       }},
      {3,
       [](const CFExpansion& c, const AlphaShape& a) {
         // alpha = [a0;a1,...] with a1 >= 2, p/q = [a0+1]
         const auto a1 = a.at(1);
         return a1 && *a1 >= 2 && pq_is(c, {*a.at(0) + 1}) ? kMatch : kNoMatch;
       }},
      {4, alpha_a0_3_pq_a0_2},
      {5,
       [](const CFExpansion& c, const AlphaShape& a) {
         // alpha = [a0;a1,2], p/q = [a0;a1+1]
         return a.length_is(3) && a.term_is(2, 2) && pq_is(c, {*a.at(0), *a.at(1) + 1}) ? kMatch : kNoMatch;
       }},
  };
  static const std::vector<Pattern> t3 = {
      {1, alpha_a0_2_pq_a0_plus_1},
      {2, alpha_a0_3_pq_a0_2},
      {3,
       [](const CFExpansion& c, const AlphaShape& a) -> Match {
         // alpha = [a0;a1,...,a_{n-1},a_n,2], p/q = [a0;a1,...,a_{n-1},a_n+1]
         if (c.size() < 2 || !a.length_is(c.size() + 1)) return kNoMatch;
         const std::size_t n = c.size() - 1;
         if (!a.term_is(n + 1, 2)) return kNoMatch;
         for (std::size_t i = 0; i < n; ++i) {
           if (!a.term_is(i, c[i])) return kNoMatch;
         }
         if (!a.term_is(n, c[n] - 1)) return kNoMatch;
         return "n=" + std::to_string(n);
       }},
  };
  static const std::vector<Pattern> t6 = {
      {1,
       [](const CFExpansion& c, const AlphaShape& a) {
         // alpha = [a0], p/q = [a0-2]
         return a.length_is(1) && pq_is(c, {*a.at(0) - 2}) ? kMatch : kNoMatch;
       }},
      {2,
       [](const CFExpansion& c, const AlphaShape& a) -> Match {
         // alpha = [a0;a1,a2,...], p/q = [a0+2]
         if (!pq_is(c, {*a.at(0) + 2})) return kNoMatch;
         return a.has(1) ? std::string("a1 present") : std::string("a1 absent");
       }},
      {3,
       [](const CFExpansion& c, const AlphaShape& a) {
         // alpha = [a0;6], p/q = [a0;2]
         return a.length_is(2) && a.term_is(1, 6) && pq_is(c, {*a.at(0), 2}) ? kMatch : kNoMatch;
       }},
      {4,
       [](const CFExpansion& c, const AlphaShape& a) {
         // alpha = [a0;5,a2,...], p/q = [a0;2]
         return a.term_is(1, 5) && pq_is(c, {*a.at(0), 2}) ? a2_presence(a) : kNoMatch;
       }},
      {5,
       [](const CFExpansion& c, const AlphaShape& a) {
         // alpha = [a0;a1,4], p/q = [a0;a1,2]
         return a.length_is(3) && a.term_is(2, 4) && pq_is(c, {*a.at(0), *a.at(1), 2}) ? kMatch : kNoMatch;
       }},
      {6,
       [](const CFExpansion& c, const AlphaShape& a) {
         // alpha = [a0;5], p/q = [a0;3]
         return a.length_is(2) && a.term_is(1, 5) && pq_is(c, {*a.at(0), 3}) ? kMatch : kNoMatch;
       }},
      {7,
       [](const CFExpansion& c, const AlphaShape& a) {
         // alpha = [a0;4,a2,...], p/q = [a0;2]
         return a.term_is(1, 4) && pq_is(c, {*a.at(0), 2}) ? a2_presence(a) : kNoMatch;
       }},
  };
  switch (id) {
    case TheoremId::RefinedT1: return t1;
    case TheoremId::RefinedT2: return t2;
    case TheoremId::RefinedT3: return t3;
    case TheoremId::RefinedT6: return t6;
    default: return none;
  }
}

}  // namespace

Classification classify(const Rational& pq, const AlphaSource& alpha) {
  return classify_cf(pq, expand_rational(pq), alpha);
}

std::optional<ExceptionMatch> exception_match(TheoremId id, const CFExpansion& pq_cf, const AlphaSource& alpha) {
  const AlphaShape shape(alpha);
  std::optional<ExceptionMatch> result;
  for (const auto& pattern : patterns(id)) {
    auto m = pattern.match(pq_cf, shape);
    if (!m) continue;
    if (!result) result = ExceptionMatch{pattern.index, std::move(*m), {}};
    result->all_cases.push_back(pattern.index);
  }
  return result;
}

CaseEquality expected_equality(TheoremId id, const ExceptionMatch& match) {
  switch (id) {
    case TheoremId::RefinedT2:
      return match.case_index == 3 ? CaseEquality::Strict : CaseEquality::Equal;
    case TheoremId::RefinedT6:
      switch (match.case_index) {
        case 2: return match.shape == "a1 absent" ? CaseEquality::Equal : CaseEquality::Strict;
        case 4:
        case 7: return CaseEquality::Strict;
        default: return CaseEquality::Equal;
      }
    default:
      return CaseEquality::Equal;
  }
}

int bj_sign(const CFExpansion& pq_cf, const AlphaSource& alpha) {
  const Rational pq = evaluate(pq_cf);
  int s = 0;
  switch (alpha.locate(pq)) {
    case Comparison::Less: s = -1; break;
    case Comparison::Equal: s = 0; break;
    case Comparison::Greater: s = 1; break;
  }
  const bool odd = (pq_cf.size() - 1) % 2 == 1;
  return odd ? -s : s;
}

Verdict check(TheoremId id, const Rational& pq, const AlphaSource& alpha) {
  Verdict v;
  v.theorem = id;
  const CFExpansion cf = expand_rational(pq);
  const BigInt& q = pq.den();

  if (id == TheoremId::RefinedT3) {
    std::size_t n = 0;
    while (n < cf.size()) {
      const auto a = alpha.term(n);
      if (!a || *a != cf[n]) break;
      ++n;
    }
    if (n == 0) {
      throw InapplicableError("refined-t3 needs a common convergent: " + pq.str() + " and " + alpha.literal() +
                              " differ in a0");
    }
    const ConvergentTable table(std::span(cf.terms()).first(n));
    BigInt q_prev = table.q(static_cast<std::ptrdiff_t>(n) - 1);
    v.bound = bound(id, q, q_prev);
    v.notes.push_back("n=" + std::to_string(n) + " q_prev=" + q_prev.str());
    v.t3_n = n;
    v.t3_q_prev = std::move(q_prev);
  } else {
    v.bound = bound(id, q);
  }

  bool precondition = true;
  if (id == TheoremId::BarbolosiJager && bj_sign(cf, alpha) != 1) {
    precondition = false;
    v.notes.emplace_back("parity precondition unmet");
  }
  if (precondition) {
    const Comparison cmp = compare_error(alpha, pq, v.bound);
    if (cmp == Comparison::Less) v.hypothesis = Hypothesis::HoldsStrict;
    else if (cmp == Comparison::Equal && !strict_hypothesis(id)) v.hypothesis = Hypothesis::HoldsEquality;
    else v.hypothesis = Hypothesis::Fails;
  }

  v.classification = classify_cf(pq, cf, alpha);
  const Classification& cl = v.classification;
  switch (id) {
    case TheoremId::Koksma:
      v.conclusion_satisfied = cl.is_convergent() || cl.is_first_mediant();
      if (v.hypothesis_holds() && cl.is_nearest_mediant()) {
        v.notes.emplace_back("outcome depends on reading 'first mediant' as b = 1 at any index");
      }
      break;
    case TheoremId::RefinedT6:
      v.conclusion_satisfied = cl.is_convergent() || cl.is_nearest_mediant();
      break;
    default:
      v.conclusion_satisfied = cl.is_convergent();
      break;
  }

  if (auto match = exception_match(id, cf, alpha)) {
    v.exception = match->case_index;
    v.exception_shape = match->shape;
    if (!match->shape.empty()) v.notes.push_back("exception " + std::to_string(match->case_index) + ": " + match->shape);
    if (match->all_cases.size() > 1) {
      std::string all = "matching cases:";
      for (int c : match->all_cases) all += " " + std::to_string(c);
      v.notes.push_back(std::move(all));
    }
  }
  return v;
}

}  // namespace leglab
