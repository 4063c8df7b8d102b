#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "leglab/alpha.hpp"
#include "leglab/criteria.hpp"
#include "leglab/rational.hpp"

namespace leglab {

/// Reduced a/b in [0, 1] with 1 <= b <= max_den, ascending.
struct RationalsUpTo {
  std::uint32_t max_den = 1;
};

/// [0; a1, ..., a_{k-1}] for 1 <= k <= max_length with 1 <= a_i <= max_term.
/// Finite shapes are canonical (last term >= 2) and treated as rational alpha.
/// With `periodic` set the family is instead [0; (a1, ..., am)] for every
/// primitive period of length 1 <= m <= max_length - 1.
struct CFShapes {
  std::uint32_t max_term = 1;
  std::uint32_t max_length = 1;
  bool periodic = false;
};

/// Explicit source literals, e.g. "cf:[1;(2)]" or "rat:2/5".
struct SourceList {
  std::vector<std::string> literals;
};

struct SeriesSet {
  std::vector<std::pair<SeriesFamily, BigInt>> members;
};

using AlphaFamily = std::variant<RationalsUpTo, CFShapes, SourceList, SeriesSet>;

struct Universe {
  BigInt max_q = 1;
  AlphaFamily family = RationalsUpTo{1};
  /// Half-width W on |p/q - alpha|.
  Rational window = Rational(1);

  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
  /// Materialized alpha list in family order.
  std::vector<AlphaSource> alphas() const;
  /// "rationals:100", "shapes:4:4", "pshapes:3:3", "sources:2", "series:2".
  std::string family_label() const;
};

/// Parses "rationals:M", "shapes:T:L", "pshapes:T:L" or a single source
/// literal. Throws std::invalid_argument.
AlphaFamily parse_family(const std::string& text);

struct Pair {
  Rational pq;
  std::size_t alpha_index = 0;
};

/// Smallest and largest p with |p/q - alpha| <= window (p_lo > p_hi if none).
std::pair<BigInt, BigInt> window_range(const AlphaSource& alpha, const BigInt& q, const Rational& window);

/// Calls fn(pq, alpha_index, alpha) for every coprime p/q with q <= max_q in
/// the window, alpha outermost, then q and p ascending.
void for_each_pair(const Universe& u, const std::function<void(const Rational&, std::size_t, const AlphaSource&)>& fn);
std::vector<Pair> enumerate_pairs(const Universe& u);

/// Why a verdict contradicts its theorem: the hypothesis holds, the
/// conclusion fails, and either no exception matches or the matched
/// exception's listed equality disagrees with the pair. nullopt otherwise.
std::optional<std::string> counterexample_reason(const Verdict& v);

/// Largest value bound(id, q, .) can take, over q_prev as well for RefinedT3.
Rational max_bound(TheoremId id, const BigInt& q);

struct PairRecord {
  Rational pq;
  std::size_t alpha_index = 0;
  std::string alpha_literal;
  Verdict verdict;
  /// Why a counterexample was recorded; empty otherwise.
  std::string reason;
};

struct BudgetRecord {
  Rational pq;
  std::size_t alpha_index = 0;
  std::string alpha_literal;
  std::string message;
};

/// A list truncated to kMaxListed entries plus the untruncated count.
template <typename T>
struct CappedList {
  std::vector<T> entries;
  std::size_t total = 0;
};

inline constexpr std::size_t kMaxListed = 1000;

struct VerificationReport {
  TheoremId theorem = TheoremId::Legendre;
  BigInt max_q = 1;
  std::string family;
  Rational window;
  std::size_t alpha_count = 0;

  /// Every pair inside the (effective) window.
  std::size_t pairs_enumerated = 0;
  /// Pairs with a verdict: enumerated minus inapplicable minus budget-exhausted.
  std::size_t pairs_checked = 0;
  /// Checked pairs settled as FAILS by the exact distance pre-test.
  std::size_t screened = 0;
  std::size_t hypothesis_holds = 0;
  std::size_t inapplicable = 0;
  /// HOLDS_EQUALITY pairs whose conclusion holds anyway.
  std::size_t boundary_equalities = 0;

  CappedList<PairRecord> counterexamples;
  CappedList<PairRecord> equality_witnesses;
  std::map<int, std::size_t> exception_histogram;
  CappedList<BudgetRecord> budget_exhausted;

  bool passed() const { return counterexamples.total == 0; }
};

/// Folds `part` into `into`; lists are re-sorted by (alpha_index, q, p).
void merge_into(VerificationReport& into, const VerificationReport& part);

/// jobs <= 1 runs in the calling thread; otherwise q is split across `jobs`
/// shards. The result does not depend on `jobs`.
VerificationReport audit(TheoremId id, const Universe& u, unsigned jobs = 1);

struct SharpnessWitness {
  Rational pq;
  std::size_t alpha_index = 0;
  std::string alpha_literal;
  Verdict verdict;
  /// q^2 |alpha - p/q|; exact when `exact` is set, else the midpoint of an
  /// enclosure narrower than 2^-128.
  Rational scaled_error;
  bool exact = true;
  /// |alpha - p/q| / bound - 1.
  Rational margin;
};

/// Pairs with bound < |alpha - p/q| <= 11/10 bound whose conclusion fails,
/// ordered by margin. BarbolosiJager pairs failing only on parity are skipped.
std::vector<SharpnessWitness> sharpness_scan(TheoremId id, const Universe& u);

struct CrossOrderRow {
  std::uint64_t q = 0;
  Rational legendre, t1, t2, t3_prev0, t3_prev1, t3_prevq;
  bool ok = false;
};

struct CrossOrderReport {
  bool ok = true;
  /// All rows when q_max - 1 <= keep_rows, else the first and last keep_rows / 2.
  std::vector<CrossOrderRow> rows;
  std::size_t rows_checked = 0;
};

/// For 2 <= q <= q_max: legendre < t1 < t2, t3(q,0) == legendre,
/// t3(q,1) == t2 and t3(q,q) > t2. q_max < 2 is vacuously ok.
CrossOrderReport cross_order_check(std::uint64_t q_max, std::size_t keep_rows = 64);

}  // namespace leglab
