#include "leglab/cf.hpp"

#include <cctype>
#include <stdexcept>

namespace leglab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

void validate_prefix(std::span<const BigInt> terms) {
  if (terms.empty()) throw std::invalid_argument("continued fraction needs at least one term");
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i] < 1) throw std::invalid_argument("partial quotient a" + std::to_string(i) + " must be >= 1");
  }
}

std::vector<BigInt> parse_terms(std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw std::invalid_argument("continued fraction must look like [a0;a1,...]: '" + std::string(text) + "'");
  }
  std::string_view body = text.substr(1, text.size() - 2);
  std::vector<BigInt> terms;
  const auto semi = body.find(';');
  terms.push_back(parse_bigint(trim(body.substr(0, semi))));
  if (semi != std::string_view::npos) {
    std::string_view rest = body.substr(semi + 1);
    while (true) {
      const auto comma = rest.find(',');
      terms.push_back(parse_bigint(trim(rest.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  validate_prefix(terms);
  return terms;
}

std::string format_terms(std::span<const BigInt> terms) {
  std::string out = "[";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i == 1) out += ';';
    else if (i > 1) out += ',';
    out += terms[i].str();
  }
  out += ']';
  return out;
}

Rational evaluate_terms(std::span<const BigInt> terms) {
  validate_prefix(terms);
  const ConvergentTable table(terms);
  return table.value(table.size() - 1);
}

CFExpansion::CFExpansion(std::vector<BigInt> terms) : terms_(std::move(terms)) {
  validate_prefix(terms_);
  if (terms_.size() >= 2 && terms_.back() < 2) {
    throw std::invalid_argument("canonical continued fraction must end with a term >= 2");
  }
}

CFExpansion CFExpansion::parse(std::string_view text) { return CFExpansion(parse_terms(text)); }

CFExpansion expand_rational(const Rational& r) {
  std::vector<BigInt> terms;
  BigInt num = r.num();
  BigInt den = r.den();
  while (true) {
    BigInt a = floor_div(num, den);
    BigInt rem = num - a * den;
    terms.push_back(std::move(a));
    if (rem == 0) break;
    num = std::move(den);
    den = std::move(rem);
  }
  // The Euclidean steps never leave a trailing 1 after a0: the last quotient
  // is num/den with den < num.
  return CFExpansion(std::move(terms));
}

Rational evaluate(const CFExpansion& cf) { return evaluate_terms(cf.terms()); }

ConvergentTable::ConvergentTable() : p_{0, 1}, q_{1, 0} {}

ConvergentTable::ConvergentTable(std::span<const BigInt> terms) : ConvergentTable() {
  p_.reserve(terms.size() + 2);
  q_.reserve(terms.size() + 2);
  for (const auto& a : terms) push(a);
}

void ConvergentTable::push(const BigInt& term) {
  const std::size_t k = p_.size();
  p_.push_back(term * p_[k - 1] + p_[k - 2]);
  q_.push_back(term * q_[k - 1] + q_[k - 2]);
}

Rational ConvergentTable::value(std::size_t n) const {
  const auto i = static_cast<std::ptrdiff_t>(n);
  return Rational(p(i), q(i));
}

ConvergentTable convergent_table(std::span<const BigInt> terms) {
  validate_prefix(terms);
  return ConvergentTable(terms);
}

std::vector<MediantRef> mediants_at(std::span<const BigInt> terms, std::size_t n) {
  if (n + 1 >= terms.size()) {
    throw std::out_of_range("mediants at index " + std::to_string(n) + " need term a" + std::to_string(n + 1));
  }
  validate_prefix(terms.first(n + 2));
  const ConvergentTable table(terms.first(n + 1));
  const auto i = static_cast<std::ptrdiff_t>(n);
  const BigInt& next = terms[n + 1];
  std::vector<MediantRef> out;
  for (BigInt b = 1; b < next; ++b) {
    // Coprime by the determinant identity, so the reducing constructor is a no-op.
    out.push_back(MediantRef{n, b, next, Rational(b * table.p(i) + table.p(i - 1), b * table.q(i) + table.q(i - 1))});
  }
  return out;
}

SharedPrefix shared_prefix(const CFExpansion& x, const CFExpansion& y) {
  std::size_t n = 0;
  while (n < x.size() && n < y.size() && x[n] == y[n]) ++n;
  const ConvergentTable table(std::span(x.terms()).first(n));
  const auto last = static_cast<std::ptrdiff_t>(n) - 1;
  return SharedPrefix{n, table.p(last), table.q(last)};
}

}  // namespace leglab
