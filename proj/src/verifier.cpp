#include "leglab/verifier.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace leglab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

/// Enclosure [lo, hi] of alpha, refined until narrower than `target` or
/// until the budget stops it. Exact for finite alpha.
std::pair<Rational, Rational> enclosure_within(const AlphaSource& alpha, const Rational& target) {
  if (const auto& exact = alpha.exact()) return {*exact, *exact};
  std::pair<Rational, Rational> best = alpha.enclosure(1);
  try {
    for (std::size_t level = 2; best.second - best.first >= target; ++level) best = alpha.enclosure(level);
  } catch (const BudgetExhausted&) {
    // Any enclosure is still a valid superset for candidate ranges.
  }
  return best;
}

/// Smallest p with alpha - p/q <= W, searching upward from `start`.
BigInt lowest_in_window(const AlphaSource& alpha, const BigInt& q, const Rational& W, BigInt p) {
  while (alpha.locate(Rational(p, q) + W) == Comparison::Greater) ++p;
  return p;
}

/// Largest p with p/q - alpha <= W, searching downward from `start`.
BigInt highest_in_window(const AlphaSource& alpha, const BigInt& q, const Rational& W, BigInt p) {
  while (alpha.locate(Rational(p, q) - W) == Comparison::Less) --p;
  return p;
}

std::pair<BigInt, BigInt> window_range_in(const AlphaSource& alpha, const std::pair<Rational, Rational>& encl,
                                          const BigInt& q, const Rational& W) {
  const Rational qr(q);
  BigInt lo = ceil_div((qr * (encl.first - W)).num(), (qr * (encl.first - W)).den());
  BigInt hi = (qr * (encl.second + W)).floor();
  if (lo > hi) return {std::move(lo), std::move(hi)};
  lo = lowest_in_window(alpha, q, W, std::move(lo));
  if (lo > hi) return {std::move(lo), std::move(hi)};
  hi = highest_in_window(alpha, q, W, std::move(hi));
  return {std::move(lo), std::move(hi)};
}

bool coprime(const BigInt& p, const BigInt& q) {
  if (p >= INT64_MIN && p <= INT64_MAX && q <= INT64_MAX) {
    return std::gcd(static_cast<std::int64_t>(p), static_cast<std::int64_t>(q)) == 1;
  }
  return boost::multiprecision::gcd(p, q) == 1;
}

/// q values owned by a shard: (q - 1) mod count == index.
struct Shard {
  unsigned index = 0;
  unsigned count = 1;
};

BigInt ceil_of(const Rational& r) { return ceil_div(r.num(), r.den()); }

/// Visits every window pair of the shard, alpha outermost, then q and p
/// ascending. Pairs within `radius(q)` of alpha's enclosure go to
/// near(pq, i, alpha); runs of the remaining pairs go to far(i, alpha, q, lo,
/// hi) as p ranges already known to lie inside the window. Edge pairs whose
/// window membership cannot be decided go to budget(pq, i, alpha, message).
template <class WindowFn, class RadiusFn, class NearFn, class FarFn, class BudgetFn>
void scan(const Universe& u, const std::vector<AlphaSource>& alphas, Shard shard, WindowFn window, RadiusFn radius,
          NearFn near, FarFn far, BudgetFn budget) {
  const Rational target(BigInt(1), 64 * u.max_q * u.max_q);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const AlphaSource& alpha = alphas[i];
    const auto [lo, hi] = enclosure_within(alpha, target);
    for (BigInt q = 1 + shard.index; q <= u.max_q; q += shard.count) {
      const Rational W = window(q);
      const Rational R = radius(q);
      const Rational qr(q);
      // Every p in [sure_lo, sure_hi] is inside the window; [cand_lo, cand_hi] covers all that might be.
      const BigInt cand_lo = ceil_of(qr * (lo - W));
      const BigInt cand_hi = (qr * (hi + W)).floor();
      const BigInt sure_lo = ceil_of(qr * (hi - W));
      const BigInt sure_hi = (qr * (lo + W)).floor();
      const BigInt near_lo = std::max(cand_lo, ceil_of(qr * (lo - R)));
      const BigInt near_hi = std::min(cand_hi, (qr * (hi + R)).floor());

      auto inside = [&](const BigInt& p) -> std::optional<bool> {
        if (p >= sure_lo && p <= sure_hi) return true;
        try {
          return compare_error(alpha, Rational(p, q), W) != Comparison::Greater;
        } catch (const BudgetExhausted& e) {
          budget(Rational(p, q), i, alpha, e.what());
          return std::nullopt;
        }
      };
      // Far pairs: the sure part goes through in bulk, edges one by one.
      auto far_run = [&](const BigInt& a, const BigInt& b) {
        if (a > b) return;
        const BigInt bulk_lo = std::max(a, sure_lo);
        const BigInt bulk_hi = std::min(b, sure_hi);
        for (BigInt p = a; p <= b && p < bulk_lo; ++p) {
          if (coprime(p, q) && inside(p).value_or(false)) far(i, alpha, q, p, p);
        }
        if (bulk_lo <= bulk_hi) far(i, alpha, q, bulk_lo, bulk_hi);
        for (BigInt p = std::max(a, BigInt(bulk_hi + 1)); p <= b; ++p) {
          if (coprime(p, q) && inside(p).value_or(false)) far(i, alpha, q, p, p);
        }
      };
      if (near_lo > near_hi) {
        far_run(cand_lo, cand_hi);
        continue;
      }
      far_run(cand_lo, near_lo - 1);
      for (BigInt p = near_lo; p <= near_hi; ++p) {
        if (coprime(p, q) && inside(p).value_or(false)) near(Rational(p, q), i, alpha);
      }
      far_run(near_hi + 1, cand_hi);
    }
  }
}

struct FarCount {
  std::size_t total = 0;
  /// Pairs with floor(p/q) == a0.
  std::size_t same_a0 = 0;
};

FarCount count_far(const BigInt& a0, const BigInt& q, const BigInt& p_lo, const BigInt& p_hi) {
  FarCount out;
  const BigInt same_lo = a0 * q;
  const BigInt same_hi = same_lo + q - 1;
  const bool small = p_lo >= INT64_MIN / 2 && p_hi <= INT64_MAX / 2 && q <= INT64_MAX / 2;
  if (small) {
    const auto qi = static_cast<std::int64_t>(q);
    const auto lo = static_cast<std::int64_t>(p_lo), hi = static_cast<std::int64_t>(p_hi);
    const bool same_fits = same_lo >= INT64_MIN / 2 && same_hi <= INT64_MAX / 2;
    const std::int64_t s_lo = same_fits ? static_cast<std::int64_t>(same_lo) : 0;
    const std::int64_t s_hi = same_fits ? static_cast<std::int64_t>(same_hi) : -1;
    for (std::int64_t p = lo; p <= hi; ++p) {
      if (std::gcd(p, qi) != 1) continue;
      ++out.total;
      if (p >= s_lo && p <= s_hi) ++out.same_a0;
    }
    return out;
  }
  for (BigInt p = p_lo; p <= p_hi; ++p) {
    if (boost::multiprecision::gcd(p, q) != 1) continue;
    ++out.total;
    if (p >= same_lo && p <= same_hi) ++out.same_a0;
  }
  return out;
}

template <class T>
void push_capped(CappedList<T>& list, T item) {
  ++list.total;
  if (list.entries.size() < kMaxListed) list.entries.push_back(std::move(item));
}

template <class T>
bool key_less(const T& a, const T& b) {
  if (a.alpha_index != b.alpha_index) return a.alpha_index < b.alpha_index;
  if (a.pq.den() != b.pq.den()) return a.pq.den() < b.pq.den();
  return a.pq.num() < b.pq.num();
}

template <class T>
void merge_list(CappedList<T>& into, const CappedList<T>& part) {
  into.total += part.total;
  into.entries.insert(into.entries.end(), part.entries.begin(), part.entries.end());
  std::stable_sort(into.entries.begin(), into.entries.end(), key_less<T>);
  if (into.entries.size() > kMaxListed) into.entries.resize(kMaxListed);
}

VerificationReport audit_shard(TheoremId id, const Universe& u, const std::vector<AlphaSource>& alphas, Shard shard) {
  VerificationReport r;
  auto window = [&](const BigInt& q) { return std::max(u.window, max_bound(id, q)); };
  auto radius = [&](const BigInt& q) { return max_bound(id, q); };
  auto near = [&](const Rational& pq, std::size_t i, const AlphaSource& alpha) {
    ++r.pairs_enumerated;
    Verdict v;
    try {
      v = check(id, pq, alpha);
    } catch (const InapplicableError&) {
      ++r.inapplicable;
      return;
    } catch (const BudgetExhausted& e) {
      push_capped(r.budget_exhausted, BudgetRecord{pq, i, alpha.literal(), e.what()});
      return;
    }
    ++r.pairs_checked;
    if (!v.hypothesis_holds()) return;
    ++r.hypothesis_holds;
    if (v.exception) ++r.exception_histogram[*v.exception];
    if (v.conclusion_satisfied) {
      if (v.equality()) ++r.boundary_equalities;
      return;
    }
    if (auto reason = counterexample_reason(v)) {
      push_capped(r.counterexamples, PairRecord{pq, i, alpha.literal(), v, std::move(*reason)});
    } else if (v.equality()) {
      push_capped(r.equality_witnesses, PairRecord{pq, i, alpha.literal(), v, {}});
    }
  };
  auto far = [&](std::size_t, const AlphaSource& alpha, const BigInt& q, const BigInt& lo, const BigInt& hi) {
    const FarCount c = count_far(*alpha.term(0), q, lo, hi);
    r.pairs_enumerated += c.total;
    if (id == TheoremId::RefinedT3) {
      r.inapplicable += c.total - c.same_a0;
      r.pairs_checked += c.same_a0;
      r.screened += c.same_a0;
    } else {
      r.pairs_checked += c.total;
      r.screened += c.total;
    }
  };
  auto budget = [&](const Rational& pq, std::size_t i, const AlphaSource& alpha, const std::string& msg) {
    push_capped(r.budget_exhausted, BudgetRecord{pq, i, alpha.literal(), msg});
  };
  scan(u, alphas, shard, window, radius, near, far, budget);
  return r;
}

}  // namespace

void Universe::validate() const {
  if (max_q < 1) throw std::invalid_argument("max_q must be >= 1");
  if (window.sign() < 0) throw std::invalid_argument("window must be >= 0");
  std::visit(Overloaded{
                 [](const RationalsUpTo& f) {
                   if (f.max_den < 1) throw std::invalid_argument("rationals:M needs M >= 1");
                 },
                 [](const CFShapes& f) {
                   if (f.max_term < 1 || f.max_length < 1) throw std::invalid_argument("shapes:T:L needs T, L >= 1");
                 },
                 [](const SourceList&) {},
                 [](const SeriesSet& f) {
                   for (const auto& [family, A] : f.members) {
                     if (A < 1) throw std::invalid_argument("series parameter A must be >= 1");
                   }
                 },
             },
             family);
}

namespace {

// Every tuple over 1..T of the given length, lexicographic.
template <class Fn>
void for_each_tuple(std::uint32_t T, std::size_t length, Fn fn) {
  std::vector<BigInt> t(length, 1);
  while (true) {
    fn(t);
    std::size_t k = length;
    while (k > 0 && t[k - 1] == T) t[--k] = 1;
    if (k == 0) return;
    ++t[k - 1];
  }
}

bool primitive_period(const std::vector<BigInt>& t) {
  const std::size_t m = t.size();
  for (std::size_t d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < m && repeats; ++i) repeats = t[i] == t[i - d];
    if (repeats) return false;
  }
  return true;
}

}  // namespace

std::vector<AlphaSource> Universe::alphas() const {
  validate();
  std::vector<AlphaSource> out;
  std::visit(Overloaded{
                 [&](const RationalsUpTo& f) {
                   // Farey sequence of order M.
                   const std::int64_t M = f.max_den;
                   std::int64_t a = 0, b = 1, c = 1, d = M;
                   out.push_back(AlphaSource::rational(Rational(0)));
                   while (c <= M) {
                     const std::int64_t k = (M + b) / d;
                     std::tie(a, b, c, d) = std::make_tuple(c, d, k * c - a, k * d - b);
                     out.push_back(AlphaSource::rational(Rational(BigInt(a), BigInt(b))));
                   }
                 },
                 [&](const CFShapes& f) {
                   if (f.periodic) {
                     for (std::size_t m = 1; m + 1 <= f.max_length; ++m) {
                       for_each_tuple(f.max_term, m, [&](const std::vector<BigInt>& t) {
                         if (primitive_period(t)) out.push_back(AlphaSource::periodic({BigInt(0)}, t));
                       });
                     }
                     return;
                   }
                   out.push_back(AlphaSource::rational(Rational(0)));
                   for (std::size_t m = 1; m + 1 <= f.max_length; ++m) {
                     for_each_tuple(f.max_term, m, [&](const std::vector<BigInt>& t) {
                       if (t.back() < 2) return;
                       std::vector<BigInt> terms{0};
                       terms.insert(terms.end(), t.begin(), t.end());
                       out.push_back(AlphaSource::finite(CFExpansion(std::move(terms))));
                     });
                   }
                 },
                 [&](const SourceList& f) {
                   for (const auto& lit : f.literals) out.push_back(AlphaSource::parse(lit));
                 },
                 [&](const SeriesSet& f) {
                   for (const auto& [family, A] : f.members) out.push_back(AlphaSource::series(family, A));
                 },
             },
             family);
  return out;
}

AlphaFamily parse_family(const std::string& text) {
  auto number = [&](const std::string& s) -> std::uint32_t {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || v < 1 || v > 1'000'000) throw std::invalid_argument("bad number '" + s + "' in " + text);
    return static_cast<std::uint32_t>(v);
  };
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() == 2 && parts[0] == "rationals") return RationalsUpTo{number(parts[1])};
  if (parts.size() == 3 && (parts[0] == "shapes" || parts[0] == "pshapes")) {
    return CFShapes{number(parts[1]), number(parts[2]), parts[0] == "pshapes"};
  }
  if (text.starts_with("series:") || text.starts_with("cf:") || text.starts_with("rat:")) {
    (void)AlphaSource::parse(text);
    return SourceList{{text}};
  }
  throw std::invalid_argument("alpha family must be rationals:M, shapes:T:L, pshapes:T:L or a source literal, got '" +
                              text + "'");
}

std::string Universe::family_label() const {
  return std::visit(Overloaded{
                        [](const RationalsUpTo& f) { return "rationals:" + std::to_string(f.max_den); },
                        [](const CFShapes& f) {
                          return std::string(f.periodic ? "pshapes:" : "shapes:") + std::to_string(f.max_term) + ":" +
                                 std::to_string(f.max_length);
                        },
                        [](const SourceList& f) {
                          std::string out;
                          for (const auto& lit : f.literals) out += (out.empty() ? "" : ",") + lit;
                          return out;
                        },
                        [](const SeriesSet& f) {
                          std::string out;
                          for (const auto& [family, A] : f.members) {
                            out += (out.empty() ? "series:" : ",series:") + std::string(to_string(family)) +
                                   ":A=" + A.str();
                          }
                          return out;
                        },
                    },
                    family);
}

std::pair<BigInt, BigInt> window_range(const AlphaSource& alpha, const BigInt& q, const Rational& window) {
  if (q < 1) throw std::invalid_argument("q must be >= 1");
  const Rational target(BigInt(1), 64 * q * q);
  return window_range_in(alpha, enclosure_within(alpha, target), q, window);
}

void for_each_pair(const Universe& u,
                   const std::function<void(const Rational&, std::size_t, const AlphaSource&)>& fn) {
  const auto alphas = u.alphas();
  auto window = [&](const BigInt&) { return u.window; };
  auto radius = [&](const BigInt&) { return u.window; };
  // Radius = window sends every pair through fn; undecidable edges are skipped.
  scan(u, alphas, Shard{}, window, radius, fn,
       [](std::size_t, const AlphaSource&, const BigInt&, const BigInt&, const BigInt&) {},
       [](const Rational&, std::size_t, const AlphaSource&, const std::string&) {});
}

std::vector<Pair> enumerate_pairs(const Universe& u) {
  std::vector<Pair> out;
  for_each_pair(u, [&](const Rational& pq, std::size_t i, const AlphaSource&) { out.push_back(Pair{pq, i}); });
  return out;
}

std::optional<std::string> counterexample_reason(const Verdict& v) {
  if (!v.hypothesis_holds() || v.conclusion_satisfied) return std::nullopt;
  if (!v.exception) return "hypothesis holds, conclusion fails, no listed exception";
  const ExceptionMatch match{*v.exception, v.exception_shape, {}};
  const bool expect_equal = expected_equality(v.theorem, match) == CaseEquality::Equal;
  if (v.equality() == expect_equal) return std::nullopt;
  return "equality placement: exception " + std::to_string(*v.exception) + " is listed as " +
         (expect_equal ? "equality" : "strict") + " but the pair is " +
         (v.equality() ? "on the bound" : "strictly inside");
}

Rational max_bound(TheoremId id, const BigInt& q) {
  if (id == TheoremId::RefinedT3) return bound(id, q, q);
  return bound(id, q);
}

void merge_into(VerificationReport& into, const VerificationReport& part) {
  into.pairs_enumerated += part.pairs_enumerated;
  into.pairs_checked += part.pairs_checked;
  into.screened += part.screened;
  into.hypothesis_holds += part.hypothesis_holds;
  into.inapplicable += part.inapplicable;
  into.boundary_equalities += part.boundary_equalities;
  merge_list(into.counterexamples, part.counterexamples);
  merge_list(into.equality_witnesses, part.equality_witnesses);
  merge_list(into.budget_exhausted, part.budget_exhausted);
  for (const auto& [k, v] : part.exception_histogram) into.exception_histogram[k] += v;
}

VerificationReport audit(TheoremId id, const Universe& u, unsigned jobs) {
  const auto alphas = u.alphas();
  VerificationReport report;
  report.theorem = id;
  report.max_q = u.max_q;
  report.family = u.family_label();
  report.window = u.window;
  report.alpha_count = alphas.size();

  if (jobs <= 1) {
    merge_into(report, audit_shard(id, u, alphas, Shard{}));
    return report;
  }
  std::vector<VerificationReport> parts(jobs);
  std::vector<std::thread> threads;
  threads.reserve(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  for (unsigned k = 0; k < jobs; ++k) {
    threads.emplace_back([&, k] {
      try {
        // Private copies: shards share no mutable state.
        const std::vector<AlphaSource> local = alphas;
        parts[k] = audit_shard(id, u, local, Shard{k, jobs});
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const auto& part : parts) merge_into(report, part);
  return report;
}

namespace {

Rational midpoint_estimate(const AlphaSource& alpha) {
  const Rational target(BigInt(1), BigInt(1) << 128);
  const auto [lo, hi] = enclosure_within(alpha, target);
  return (lo + hi) / Rational(2);
}

}  // namespace

std::vector<SharpnessWitness> sharpness_scan(TheoremId id, const Universe& u) {
  const auto alphas = u.alphas();
  const Rational widen(11, 10);
  std::vector<SharpnessWitness> out;
  auto window = [&](const BigInt& q) { return std::max(u.window, widen * max_bound(id, q)); };
  auto radius = [&](const BigInt& q) { return widen * max_bound(id, q); };
  auto near = [&](const Rational& pq, std::size_t i, const AlphaSource& alpha) {
    Verdict v;
    try {
      v = check(id, pq, alpha);
    } catch (const InapplicableError&) {
      return;
    } catch (const BudgetExhausted&) {
      return;
    }
    if (v.hypothesis_holds() || v.conclusion_satisfied) return;
    if (id == TheoremId::BarbolosiJager && bj_sign(expand_rational(pq), alpha) != 1) return;
    if (compare_error(alpha, pq, widen * v.bound) == Comparison::Greater) return;

    SharpnessWitness w{pq, i, alpha.literal(), v, {}, alpha.is_finite(), {}};
    const Rational value = alpha.is_finite() ? *alpha.exact() : midpoint_estimate(alpha);
    const Rational err = (value - pq).abs();
    w.scaled_error = err * Rational(pq.den() * pq.den());
    w.margin = err / v.bound - Rational(1);
    out.push_back(std::move(w));
  };
  scan(u, alphas, Shard{}, window, radius, near,
       [](std::size_t, const AlphaSource&, const BigInt&, const BigInt&, const BigInt&) {},
       [](const Rational&, std::size_t, const AlphaSource&, const std::string&) {});
  std::stable_sort(out.begin(), out.end(), [](const SharpnessWitness& a, const SharpnessWitness& b) {
    if (a.margin != b.margin) return a.margin < b.margin;
    return key_less(a, b);
  });
  return out;
}

CrossOrderReport cross_order_check(std::uint64_t q_max, std::size_t keep_rows) {
  CrossOrderReport report;
  if (q_max < 2) return report;
  const std::uint64_t total = q_max - 1;
  const bool keep_all = total <= keep_rows;
  for (std::uint64_t qi = 2; qi <= q_max; ++qi) {
    const BigInt q(qi);
    CrossOrderRow row;
    row.q = qi;
    row.legendre = bound(TheoremId::Legendre, q);
    row.t1 = bound(TheoremId::RefinedT1, q);
    row.t2 = bound(TheoremId::RefinedT2, q);
    row.t3_prev0 = bound(TheoremId::RefinedT3, q, BigInt(0));
    row.t3_prev1 = bound(TheoremId::RefinedT3, q, BigInt(1));
    row.t3_prevq = bound(TheoremId::RefinedT3, q, q);
    row.ok = row.legendre < row.t1 && row.t1 < row.t2 && row.t3_prev0 == row.legendre && row.t3_prev1 == row.t2 &&
             row.t3_prevq > row.t2;
    report.ok = report.ok && row.ok;
    ++report.rows_checked;
    const std::uint64_t k = qi - 2;
    if (keep_all || k < keep_rows / 2 || k >= total - keep_rows / 2 || !row.ok) report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace leglab
