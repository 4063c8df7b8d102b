#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "leglab/alpha.hpp"
#include "leglab/cf.hpp"
#include "leglab/rational.hpp"

namespace leglab {

enum class TheoremId {
  Legendre,
  Koksma,
  BarbolosiJager,
  RefinedT1,
  RefinedT2,
  RefinedT3,
  RefinedT6,
};

inline constexpr std::array<TheoremId, 7> kAllTheorems = {
    TheoremId::Legendre,  TheoremId::Koksma,    TheoremId::BarbolosiJager, TheoremId::RefinedT1,
    TheoremId::RefinedT2, TheoremId::RefinedT3, TheoremId::RefinedT6,
};

/// "legendre", "koksma", "barbolosi-jager", "refined-t1", ... "refined-t6".
std::string_view to_string(TheoremId id);
std::optional<TheoremId> parse_theorem(std::string_view name);

/// True for the classical statements (hypothesis uses <); the refined ones use <=.
bool strict_hypothesis(TheoremId id);
/// Number of listed exceptional cases (0 for the classical theorems).
int exception_count(TheoremId id);

/// Threshold on |alpha - p/q|. q_prev is required for RefinedT3 only.
/// Throws std::invalid_argument on a missing or extraneous q_prev.
Rational bound(TheoremId id, const BigInt& q, const std::optional<BigInt>& q_prev = std::nullopt);

struct Classification {
  enum class Kind { Convergent, NearestMediant, InteriorMediant, Other };

  Kind kind = Kind::Other;
  /// Convergent index, or the mediant's index n.
  std::size_t n = 0;
  std::optional<MediantRef> mediant;

  bool is_convergent() const { return kind == Kind::Convergent; }
  bool is_mediant() const { return mediant.has_value(); }
  bool is_nearest_mediant() const { return kind == Kind::NearestMediant; }
  /// b == 1; every first mediant is also nearest.
  bool is_first_mediant() const { return mediant && mediant->first(); }
};

std::string_view to_string(Classification::Kind kind);

/// Convergent, mediant slot or Other, read off by matching the canonical CF of
/// pq against alpha's partial quotients.
Classification classify(const Rational& pq, const AlphaSource& alpha);

struct ExceptionMatch {
  int case_index = 0;
  /// Which sub-shape matched, e.g. "a2 absent"; empty when the case has one shape.
  std::string shape;
  /// Every matching case, lowest first.
  std::vector<int> all_cases;
};

std::optional<ExceptionMatch> exception_match(TheoremId id, const CFExpansion& pq_cf, const AlphaSource& alpha);

/// Whether the listed exception is stated to hit the bound exactly.
enum class CaseEquality { Equal, Strict };
CaseEquality expected_equality(TheoremId id, const ExceptionMatch& match);

/// (-1)^n sgn(alpha - p/q) where pq_cf = [b0; ..., bn].
int bj_sign(const CFExpansion& pq_cf, const AlphaSource& alpha);

/// Raised by check() for RefinedT3 when pq and alpha share no leading term.
class InapplicableError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Hypothesis { HoldsStrict, HoldsEquality, Fails };
std::string_view to_string(Hypothesis h);

struct Verdict {
  TheoremId theorem = TheoremId::Legendre;
  Hypothesis hypothesis = Hypothesis::Fails;
  Classification classification;
  std::optional<int> exception;
  /// Sub-shape of the matched exception, empty when the case has one shape.
  std::string exception_shape;
  bool conclusion_satisfied = false;
  std::vector<std::string> notes;

  Rational bound;
  /// RefinedT3 only: the shared-prefix length n and q_{n-1}.
  std::optional<std::size_t> t3_n;
  std::optional<BigInt> t3_q_prev;

  bool equality() const { return hypothesis == Hypothesis::HoldsEquality; }
  bool hypothesis_holds() const { return hypothesis != Hypothesis::Fails; }
};

/// Evaluates one theorem on one (p/q, alpha) pair.
/// Throws InapplicableError (RefinedT3 only) and BudgetExhausted.
Verdict check(TheoremId id, const Rational& pq, const AlphaSource& alpha);

}  // namespace leglab
