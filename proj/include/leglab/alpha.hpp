#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "leglab/cf.hpp"
#include "leglab/rational.hpp"

namespace leglab {

/// Raised when a source cannot separate alpha from a rational within its
/// refinement budget. It means "needs more precision", never a wrong answer.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RefinementBudget {
  std::size_t max_terms = 10000;
  /// Refinement stops once an enclosure is narrower than 2^-max_width_bits.
  std::size_t max_width_bits = 4096;

  /// Defaults, with max_terms taken from LEGLAB_BUDGET when it is set.
  static RefinementBudget from_env();
};

enum class SeriesFamily {
  /// sum_{n>=1} 1 / (2^(2^n - 1) A^(2^n))
  Example1,
  /// sum_{n>=1} 1 / (2^(2^n) A^(2^n))
  Example4,
};

std::string_view to_string(SeriesFamily family);

/// n-th term of the series (n >= 1).
Rational series_term(SeriesFamily family, const BigInt& A, std::size_t n);
/// S_N = sum of the first N terms (N >= 1).
Rational partial_sum(SeriesFamily family, const BigInt& A, std::size_t N);

enum class Comparison { Less, Equal, Greater };
std::string_view to_string(Comparison c);

/// Consecutive convergents enclosing alpha, ordered lo <= hi.
struct Bracket {
  Rational lo;
  Rational hi;
  std::size_t depth = 0;

  Rational width() const { return hi - lo; }
  bool degenerate() const { return lo == hi; }
};

/// A real number alpha given as a lazily refined stream of partial quotients.
///
/// Kinds: a finite rational, an eventually periodic CF, one of the two
/// series families, or an arbitrary generator. Confirmed terms are cached and
/// never change. Term emission is serialized internally, so one source may be
/// read from several threads; copying a source clones its cache.
class AlphaSource {
 public:
  enum class Kind { FiniteRational, Periodic, Series, ExplicitStream };
  using Generator = std::function<BigInt(std::size_t)>;

  static AlphaSource rational(const Rational& value);
  static AlphaSource finite(const CFExpansion& cf);
  /// prefix may be empty, in which case a0 comes from the period.
  static AlphaSource periodic(std::vector<BigInt> prefix, std::vector<BigInt> period);
  static AlphaSource series(SeriesFamily family, BigInt A);
  /// The generator must return a_i for every i, with a_i >= 1 for i >= 1, and
  /// describe an infinite expansion.
  static AlphaSource stream(Generator generator, std::string label);

  /// "rat:5/8", "cf:[0;2,2]", "cf:[1;(2)]", "series:ex1:A=2", "series:ex4:A=1".
  static AlphaSource parse(std::string_view literal);

  AlphaSource(const AlphaSource& other);
  AlphaSource& operator=(const AlphaSource& other);
  AlphaSource(AlphaSource&&) noexcept;
  AlphaSource& operator=(AlphaSource&&) noexcept;
  ~AlphaSource();

  Kind kind() const;
  bool is_finite() const { return kind() == Kind::FiniteRational; }
  /// Exact value for finite sources.
  const std::optional<Rational>& exact() const;
  /// Number of terms for finite sources.
  std::optional<std::size_t> length() const;
  std::string literal() const;

  const RefinementBudget& budget() const;
  void set_budget(const RefinementBudget& budget);

  /// First k partial quotients (fewer if the expansion is finite and shorter).
  std::vector<BigInt> terms(std::size_t k) const;
  /// a_i, or nullopt past the end of a finite expansion.
  std::optional<BigInt> term(std::size_t i) const;

  /// Convergents depth-1 and depth as an ordered pair; depth >= 1. For a
  /// finite alpha with depth at or past its last index the bracket is
  /// degenerate [alpha, alpha].
  Bracket bracket(std::size_t depth) const;

  /// Open interval strictly containing an irrational alpha at refinement
  /// `level` (>= 1). For series this is (S_N, S_N + 2 t_{N+1}) with N = level;
  /// otherwise consecutive convergents. Not defined for finite sources.
  std::pair<Rational, Rational> enclosure(std::size_t level) const;

  /// Exact sign of alpha - x.
  Comparison locate(const Rational& x) const;

 private:
  struct State;
  explicit AlphaSource(std::unique_ptr<State> state);
  std::unique_ptr<State> state_;
};

AlphaSource series_source(SeriesFamily family, BigInt A);

/// Exact trichotomy of |alpha - pq| against bound (bound >= 0).
Comparison compare_error(const AlphaSource& alpha, const Rational& pq, const Rational& bound);

}  // namespace leglab
