#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leglab/rational.hpp"

namespace leglab {

/// Checks the partial-quotient rule for a CF prefix: a0 is any integer and
/// every later term is >= 1. Throws std::invalid_argument.
void validate_prefix(std::span<const BigInt> terms);

/// Parses "[a0]" or "[a0;a1,a2,...]" (whitespace allowed) into raw terms.
/// Only the prefix rule is enforced, so "[0;1,1]" is accepted here.
std::vector<BigInt> parse_terms(std::string_view text);

/// Formats terms as "[a0;a1,...]" with no spaces.
std::string format_terms(std::span<const BigInt> terms);

/// Value of a CF prefix, canonical or not.
Rational evaluate_terms(std::span<const BigInt> terms);

/// Finite simple continued fraction in canonical form: non-empty, and when
/// it has two or more terms the last one is >= 2.
class CFExpansion {
 public:
  /// Throws std::invalid_argument when terms are not canonical.
  explicit CFExpansion(std::vector<BigInt> terms);
  /// Parses the CF text format and requires canonical form.
  static CFExpansion parse(std::string_view text);

  const std::vector<BigInt>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  const BigInt& operator[](std::size_t i) const { return terms_[i]; }
  std::string str() const { return format_terms(terms_); }

  friend bool operator==(const CFExpansion&, const CFExpansion&) = default;

 private:
  std::vector<BigInt> terms_;
};

CFExpansion expand_rational(const Rational& r);
Rational evaluate(const CFExpansion& cf);

/// Convergent numerators and denominators, including the two virtual rows
/// (p_{-2}, q_{-2}) = (0, 1) and (p_{-1}, q_{-1}) = (1, 0). Row indices are
/// signed so that p(-1) and q(-2) read like the recurrences.
class ConvergentTable {
 public:
  ConvergentTable();
  explicit ConvergentTable(std::span<const BigInt> terms);

  /// Appends one partial quotient and its convergent row.
  void push(const BigInt& term);

  /// Number of real rows (one per term).
  std::size_t size() const { return p_.size() - 2; }
  const BigInt& p(std::ptrdiff_t n) const { return p_.at(static_cast<std::size_t>(n + 2)); }
  const BigInt& q(std::ptrdiff_t n) const { return q_.at(static_cast<std::size_t>(n + 2)); }
  /// p_n / q_n for a real row n >= 0.
  Rational value(std::size_t n) const;

 private:
  std::vector<BigInt> p_;
  std::vector<BigInt> q_;
};

ConvergentTable convergent_table(std::span<const BigInt> terms);

/// The mediant (b p_n + p_{n-1}) / (b q_n + q_{n-1}) with 1 <= b <= a_{n+1} - 1.
struct MediantRef {
  std::size_t n = 0;
  BigInt b;
  /// a_{n+1}, the partial quotient that bounds b.
  BigInt next_term;
  Rational value;

  bool nearest() const { return b == 1 || b == next_term - 1; }
  /// b == 1 at any index n.
  bool first() const { return b == 1; }
};

/// All mediants at index n, ordered by increasing b (and denominator).
/// Throws std::out_of_range when a_{n+1} is not among `terms`.
std::vector<MediantRef> mediants_at(std::span<const BigInt> terms, std::size_t n);

struct SharedPrefix {
  std::size_t length = 0;
  /// p_{length-1} / q_{length-1} as raw integers; (1, 0) when length is 0.
  BigInt p;
  BigInt q;
};

SharedPrefix shared_prefix(const CFExpansion& x, const CFExpansion& y);

}  // namespace leglab
