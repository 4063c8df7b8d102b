#include "leglab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>

#include "leglab/alpha.hpp"
#include "leglab/cf.hpp"
#include "leglab/criteria.hpp"
#include "leglab/report.hpp"
#include "leglab/verifier.hpp"

namespace leglab {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Format { Plain, Json, Csv };

const std::map<std::string, Format> kFormats = {{"plain", Format::Plain}, {"json", Format::Json}, {"csv", Format::Csv}};

void add_format(CLI::App* cmd, Format& format) {
  cmd->add_option("--format", format, "Output format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case))
      ->default_str("plain");
}

/// "rat:..", "cf:..", "series:.." literals, a bare "[a0;..]" or a rational "p/q".
AlphaSource parse_alpha(const std::string& text) {
  if (text.starts_with("rat:") || text.starts_with("cf:") || text.starts_with("series:")) {
    return AlphaSource::parse(text);
  }
  if (text.starts_with("[")) return AlphaSource::parse("cf:" + text);
  return AlphaSource::rational(Rational::parse(text));
}

TheoremId parse_theorem_arg(const std::string& name) {
  if (auto id = parse_theorem(name)) return *id;
  std::string known;
  for (TheoremId id : kAllTheorems) known += (known.empty() ? "" : ", ") + std::string(to_string(id));
  throw UsageError("unknown theorem '" + name + "' (expected one of " + known + ")");
}

Json terms_json(const std::vector<BigInt>& terms) {
  Json arr = Json::array();
  for (const auto& t : terms) arr.push_back(json_integer(t));
  return arr;
}

std::string approx(const Rational& r, std::size_t digits) { return r.decimal(static_cast<unsigned>(digits)); }

/// |alpha - pq| for display only.
std::string error_display(const AlphaSource& alpha, const Rational& pq, std::size_t digits) {
  if (alpha.is_finite()) return (*alpha.exact() - pq).abs().str() + " ~ " + approx((*alpha.exact() - pq).abs(), digits);
  // Enough convergents to pin the requested digits.
  const Bracket b = alpha.bracket(std::max<std::size_t>(4, digits * 2));
  const Rational mid = (b.lo + b.hi) / Rational(2);
  return "~ " + approx((mid - pq).abs(), digits);
}

struct Options {
  Format format = Format::Plain;
  std::string input;
  std::size_t term_count = 20;
  std::optional<std::size_t> count;
  std::size_t n = 0;
  std::string theorem;
  std::string pq;
  std::string alpha;
  std::optional<std::size_t> require_n;
  std::optional<std::size_t> decimals;
  std::string max_q = "50";
  std::string alpha_family;
  std::vector<std::string> alpha_sources;
  std::string window = "1";
  unsigned jobs = 1;
  std::string out_path;
  bool sharpness = false;
  std::optional<std::uint64_t> cross_order;
  std::string example;
  std::string A = "1";
  std::size_t N = 1;
};

int cmd_expand(const Options& o, std::ostream& out) {
  const AlphaSource alpha = parse_alpha(o.input);
  const std::vector<BigInt> terms = alpha.terms(alpha.is_finite() ? *alpha.length() : o.term_count);
  std::string cf = format_terms(terms);
  if (!alpha.is_finite()) cf.insert(cf.size() - 1, ",...");
  switch (o.format) {
    case Format::Json:
      out << Json{{"input", o.input}, {"finite", alpha.is_finite()}, {"terms", terms_json(terms)}, {"cf", cf}}.dump()
          << '\n';
      break;
    case Format::Csv:
      out << "index,term\n";
      for (std::size_t i = 0; i < terms.size(); ++i) out << i << ',' << terms[i] << '\n';
      break;
    case Format::Plain:
      out << cf << '\n';
      break;
  }
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out, std::istream& in) {
  std::string text = o.input;
  if (text.empty()) text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  // Non-canonical input is fine here: [0;1,1] evaluates like [0;2].
  const Rational value = evaluate_terms(parse_terms(text));
  switch (o.format) {
    case Format::Json: {
      Json j{{"cf", format_terms(parse_terms(text))}, {"value", value.str()}};
      if (o.decimals) j["decimal"] = approx(value, *o.decimals);
      out << j.dump() << '\n';
      break;
    }
    case Format::Csv:
      out << "p,q\n" << value.num() << ',' << value.den() << '\n';
      break;
    case Format::Plain:
      out << value;
      if (o.decimals) out << " ~ " << approx(value, *o.decimals);
      out << '\n';
      break;
  }
  return kExitOk;
}

int cmd_convergents(const Options& o, std::ostream& out) {
  const AlphaSource alpha = parse_alpha(o.input);
  const std::size_t k = o.count.value_or(alpha.is_finite() ? *alpha.length() : 10);
  const auto terms = alpha.terms(k);
  const ConvergentTable table(terms);
  Json rows = Json::array();
  if (o.format == Format::Csv) out << "n,a,p,q\n";
  for (std::size_t n = 0; n < terms.size(); ++n) {
    const auto i = static_cast<std::ptrdiff_t>(n);
    switch (o.format) {
      case Format::Json:
        rows.push_back({{"n", n}, {"a", json_integer(terms[n])}, {"p", json_integer(table.p(i))}, {"q", json_integer(table.q(i))}});
        break;
      case Format::Csv:
        out << n << ',' << terms[n] << ',' << table.p(i) << ',' << table.q(i) << '\n';
        break;
      case Format::Plain:
        out << "n=" << n << " a=" << terms[n] << " p/q=" << table.p(i) << '/' << table.q(i);
        if (o.decimals) out << " ~ " << approx(table.value(n), *o.decimals);
        out << '\n';
        break;
    }
  }
  if (o.format == Format::Json) out << Json{{"alpha", alpha.literal()}, {"convergents", rows}}.dump() << '\n';
  return kExitOk;
}

int cmd_mediants(const Options& o, std::ostream& out) {
  const AlphaSource alpha = parse_alpha(o.input);
  const auto terms = alpha.terms(o.n + 2);
  if (terms.size() < o.n + 2) {
    throw UsageError("alpha has no term a" + std::to_string(o.n + 1) + ", so index n=" + std::to_string(o.n) +
                     " has no mediants");
  }
  const auto mediants = mediants_at(terms, o.n);
  Json rows = Json::array();
  if (o.format == Format::Csv) out << "n,b,p,q,nearest,first\n";
  for (const auto& m : mediants) {
    switch (o.format) {
      case Format::Json:
        rows.push_back({{"n", m.n},
                        {"b", json_integer(m.b)},
                        {"p", json_integer(m.value.num())},
                        {"q", json_integer(m.value.den())},
                        {"nearest", m.nearest()},
                        {"first", m.first()}});
        break;
      case Format::Csv:
        out << m.n << ',' << m.b << ',' << m.value.num() << ',' << m.value.den() << ','
            << (m.nearest() ? "true" : "false") << ',' << (m.first() ? "true" : "false") << '\n';
        break;
      case Format::Plain:
        out << "b=" << m.b << ' ' << m.value << (m.first() ? " first" : "") << (m.nearest() ? " nearest" : "")
            << '\n';
        break;
    }
  }
  if (o.format == Format::Json) {
    out << Json{{"alpha", alpha.literal()}, {"n", o.n}, {"next_term", json_integer(terms[o.n + 1])}, {"mediants", rows}}.dump()
        << '\n';
  } else if (o.format == Format::Plain && mediants.empty()) {
    out << "none (a" << o.n + 1 << " = 1)\n";
  }
  return kExitOk;
}

int cmd_classify(const Options& o, std::ostream& out) {
  const Rational pq = Rational::parse(o.pq);
  const AlphaSource alpha = parse_alpha(o.alpha);
  const Classification c = classify(pq, alpha);
  switch (o.format) {
    case Format::Json:
      out << to_json(c).dump() << '\n';
      break;
    case Format::Csv:
      out << "kind,n,b,first\n" << to_string(c.kind) << ',';
      if (c.kind != Classification::Kind::Other) out << c.n;
      out << ',';
      if (c.mediant) out << c.mediant->b << ',' << (c.mediant->first() ? "true" : "false");
      else out << ',';
      out << '\n';
      break;
    case Format::Plain:
      out << to_string(c.kind);
      if (c.kind != Classification::Kind::Other) out << " n=" << c.n;
      if (c.mediant) out << " b=" << c.mediant->b << (c.mediant->first() ? " (first)" : "");
      out << '\n';
      break;
  }
  return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  const TheoremId id = parse_theorem_arg(o.theorem);
  const Rational pq = Rational::parse(o.pq);
  const AlphaSource alpha = parse_alpha(o.alpha);
  if (o.require_n && id != TheoremId::RefinedT3) throw UsageError("--require-n only applies to refined-t3");
  Verdict v;
  try {
    v = check(id, pq, alpha);
  } catch (const InapplicableError& e) {
    throw UsageError(e.what());
  }
  if (o.require_n && *o.require_n != *v.t3_n) {
    throw UsageError("--require-n " + std::to_string(*o.require_n) + " does not match the derived n=" +
                     std::to_string(*v.t3_n));
  }
  switch (o.format) {
    case Format::Json: {
      Json j = to_json(v);
      if (v.t3_n) {
        j["n"] = *v.t3_n;
        j["q_prev"] = json_integer(*v.t3_q_prev);
      }
      if (o.decimals) {
        j["error_decimal"] = error_display(alpha, pq, *o.decimals);
        j["bound_decimal"] = approx(v.bound, *o.decimals);
      }
      out << j.dump() << '\n';
      break;
    }
    case Format::Csv:
      out << kCsvHeader << '\n'
          << to_string(id) << ',' << pq.num() << ',' << pq.den() << ',' << alpha.literal() << ','
          << to_string(v.hypothesis) << ',' << to_string(v.classification.kind) << ','
          << (v.exception ? std::to_string(*v.exception) : "") << ',' << (v.equality() ? "true" : "false")
          << ",verdict\n";
      break;
    case Format::Plain:
      write_plain(out, v);
      if (v.t3_n) out << "n: " << *v.t3_n << " (q_prev=" << *v.t3_q_prev << ")\n";
      if (o.decimals) {
        out << "|alpha - p/q|: " << error_display(alpha, pq, *o.decimals) << '\n'
            << "bound: ~ " << approx(v.bound, *o.decimals) << '\n';
      }
      break;
  }
  return counterexample_reason(v) ? kExitCounterexamples : kExitOk;
}

Universe build_universe(const Options& o) {
  Universe u;
  u.max_q = parse_bigint(o.max_q);
  u.window = Rational::parse(o.window);
  if (!o.alpha_sources.empty()) {
    if (!o.alpha_family.empty()) throw UsageError("use either --alpha or --alpha-source, not both");
    for (const auto& lit : o.alpha_sources) (void)AlphaSource::parse(lit);
    u.family = SourceList{o.alpha_sources};
  } else {
    u.family = parse_family(o.alpha_family.empty() ? "rationals:100" : o.alpha_family);
  }
  u.validate();
  return u;
}

int cmd_verify(const Options& o, std::ostream& stdout_stream) {
  std::ofstream file;
  if (!o.out_path.empty()) {
    file.open(o.out_path);
    if (!file) throw UsageError("cannot open --out " + o.out_path);
  }
  std::ostream& out = o.out_path.empty() ? stdout_stream : file;

  if (o.cross_order) {
    const CrossOrderReport r = cross_order_check(*o.cross_order);
    if (o.format == Format::Json) out << to_json(r).dump(2) << '\n';
    else write_plain(out, r);
    return r.ok ? kExitOk : kExitCounterexamples;
  }
  if (o.theorem.empty()) throw UsageError("verify needs --theorem (or --cross-order)");
  const Universe u = build_universe(o);
  std::vector<TheoremId> ids;
  if (o.theorem == "all") ids.assign(kAllTheorems.begin(), kAllTheorems.end());
  else ids.push_back(parse_theorem_arg(o.theorem));

  if (o.sharpness) {
    Json all = Json::array();
    bool header = true;
    for (TheoremId id : ids) {
      const auto witnesses = sharpness_scan(id, u);
      switch (o.format) {
        case Format::Json:
          all.push_back({{"theorem", to_string(id)}, {"witnesses", to_json(witnesses)}});
          break;
        case Format::Csv:
          write_csv(out, id, witnesses, header);
          header = false;
          break;
        case Format::Plain:
          out << "theorem: " << to_string(id) << '\n';
          write_plain(out, witnesses);
          break;
      }
    }
    if (o.format == Format::Json) out << (ids.size() == 1 ? all[0] : all).dump(2) << '\n';
    return kExitOk;
  }

  int code = kExitOk;
  Json all = Json::array();
  bool header = true;
  for (TheoremId id : ids) {
    const VerificationReport r = audit(id, u, std::max(1u, o.jobs));
    switch (o.format) {
      case Format::Json:
        all.push_back(to_json(r));
        break;
      case Format::Csv:
        write_csv(out, r, header);
        header = false;
        break;
      case Format::Plain:
        write_plain(out, r);
        break;
    }
    if (!r.passed()) code = kExitCounterexamples;
    else if (r.budget_exhausted.total > 0 && code == kExitOk) code = kExitBudget;
  }
  if (o.format == Format::Json) out << (ids.size() == 1 ? all[0] : all).dump(2) << '\n';
  return code;
}

int cmd_example(const Options& o, std::ostream& out) {
  SeriesFamily family;
  BigInt A = parse_bigint(o.A);
  if (o.example == "ex1") {
    family = SeriesFamily::Example1;
  } else if (o.example == "ex2") {
    if (A != 1) throw UsageError("ex2 is the A = 1 case of ex1; use ex1 for other A");
    family = SeriesFamily::Example1;
  } else if (o.example == "ex4") {
    family = SeriesFamily::Example4;
  } else {
    throw UsageError("example must be ex1, ex2 or ex4");
  }
  if (A < 1) throw UsageError("--A must be >= 1");
  if (o.N < 1 || o.N > 12) throw UsageError("--N must be between 1 and 12");

  const AlphaSource alpha = series_source(family, A);
  const Rational s = partial_sum(family, A, o.N);
  const CFExpansion cf = expand_rational(s);
  const Classification c = classify(s, alpha);

  struct Line {
    std::string label;
    bool value;
  };
  std::vector<Line> lines;
  std::vector<Verdict> verdicts;
  bool reproduced = false;
  if (family == SeriesFamily::Example1) {
    const Verdict legendre = check(TheoremId::Legendre, s, alpha);
    const Verdict t1 = check(TheoremId::RefinedT1, s, alpha);
    const Verdict t2 = check(TheoremId::RefinedT2, s, alpha);
    lines = {{"convergent", c.is_convergent()},
             {"legendre hypothesis holds", legendre.hypothesis_holds()},
             {"refined-t1 hypothesis holds", t1.hypothesis_holds()},
             {"refined-t2 hypothesis holds", t2.hypothesis_holds()}};
    verdicts = {legendre, t1, t2};
    reproduced = c.is_convergent() && !legendre.hypothesis_holds() && t2.hypothesis_holds();
  } else {
    const BigInt& q = s.den();
    const bool beyond = compare_error(alpha, s, Rational(BigInt(1), q * q)) == Comparison::Greater;
    const Verdict bj = check(TheoremId::BarbolosiJager, s, alpha);
    const Verdict t6 = check(TheoremId::RefinedT6, s, alpha);
    lines = {{"convergent or nearest mediant", c.is_convergent() || c.is_nearest_mediant()},
             {"|alpha - p/q| > 1/q^2", beyond},
             {"barbolosi-jager hypothesis holds", bj.hypothesis_holds()},
             {"refined-t6 hypothesis holds", t6.hypothesis_holds()}};
    verdicts = {bj, t6};
    reproduced = (c.is_convergent() || c.is_nearest_mediant()) && beyond && t6.hypothesis_holds();
  }

  if (o.format == Format::Json) {
    Json j{{"example", o.example},
           {"alpha", alpha.literal()},
           {"N", o.N},
           {"partial_sum", s.str()},
           {"cf", cf.str()},
           {"classification", to_json(c)}};
    for (const auto& l : lines) j[l.label] = l.value;
    j["verdicts"] = Json::array();
    for (const auto& v : verdicts) j["verdicts"].push_back(to_json(v));
    j["reproduced"] = reproduced;
    out << j.dump(2) << '\n';
  } else {
    out << "alpha: " << alpha.literal() << '\n'
        << "N: " << o.N << '\n'
        << "partial sum: " << s << '\n'
        << "cf: " << cf.str() << '\n'
        << "classification: " << to_string(c.kind);
    if (c.kind != Classification::Kind::Other) out << " n=" << c.n;
    out << '\n';
    for (const auto& l : lines) out << l.label << ": " << (l.value ? "yes" : "no") << '\n';
    if (o.decimals) out << "|alpha - p/q|: " << error_display(alpha, s, *o.decimals) << '\n';
    out << "reproduced: " << (reproduced ? "yes" : "no") << '\n';
  }
  return reproduced ? kExitOk : kExitCounterexamples;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"Exact continued-fraction tools and audits of Legendre-type approximation criteria", "leglab"};
  app.require_subcommand(1);
  Options o;

  auto* expand = app.add_subcommand("expand", "Continued fraction of a rational or source literal");
  expand->add_option("value", o.input, "p/q, [a0;..], rat:, cf: or series: literal")->required();
  expand->add_option("--terms", o.term_count, "Terms shown for infinite expansions")->default_val(20);
  add_format(expand, o.format);

  auto* eval = app.add_subcommand("eval", "Value of a continued fraction (reads stdin when omitted)");
  eval->add_option("cf", o.input, "[a0;a1,...], canonical or not");
  eval->add_option("--decimals", o.decimals, "Also show K decimal digits");
  add_format(eval, o.format);

  auto* convergents = app.add_subcommand("convergents", "Convergent table p_n/q_n");
  convergents->add_option("alpha", o.input, "Rational or source literal")->required();
  convergents->add_option("--count", o.count, "Number of rows (default: all, or 10 for infinite)");
  convergents->add_option("--decimals", o.decimals, "Also show K decimal digits");
  add_format(convergents, o.format);

  auto* mediants = app.add_subcommand("mediants", "Mediants between consecutive convergents");
  mediants->add_option("alpha", o.input, "Rational or source literal")->required();
  mediants->add_option("--n", o.n, "Convergent index n")->required();
  add_format(mediants, o.format);

  auto* classify_cmd = app.add_subcommand("classify", "Convergent / mediant classification of p/q against alpha");
  classify_cmd->add_option("--pq", o.pq, "Rational p/q")->required();
  classify_cmd->add_option("--alpha", o.alpha, "Source literal")->required();
  add_format(classify_cmd, o.format);

  auto* check_cmd = app.add_subcommand("check", "Evaluate one theorem on one pair");
  check_cmd->add_option("--theorem", o.theorem, "Theorem id")->required();
  check_cmd->add_option("--pq", o.pq, "Rational p/q")->required();
  check_cmd->add_option("--alpha", o.alpha, "Source literal")->required();
  check_cmd->add_option("--require-n", o.require_n, "refined-t3: fail unless the derived n equals this");
  check_cmd->add_option("--decimals", o.decimals, "Show errors and bounds to K decimals");
  add_format(check_cmd, o.format);

  auto* verify = app.add_subcommand("verify", "Exhaustive audit over a finite universe");
  verify->add_option("--theorem", o.theorem, "Theorem id or 'all'");
  verify->add_option("--max-q", o.max_q, "Largest denominator q")->default_val("50");
  verify->add_option("--alpha", o.alpha_family, "rationals:M | shapes:T:L | pshapes:T:L | source literal");
  verify->add_option("--alpha-source", o.alpha_sources, "Source literal (repeatable)");
  verify->add_option("--window", o.window, "Half-width W on |p/q - alpha|")->default_val("1");
  verify->add_option("--jobs", o.jobs, "Worker threads (shards by q)")->default_val(1);
  verify->add_option("--out", o.out_path, "Write the report here instead of stdout");
  verify->add_flag("--sharpness", o.sharpness, "List near-miss witnesses instead of auditing");
  verify->add_option("--cross-order", o.cross_order, "Check the bound ordering for 2 <= q <= Q");
  add_format(verify, o.format);

  auto* example = app.add_subcommand("example", "Reproduce the series examples");
  example->add_option("which", o.example, "ex1, ex2 or ex4")->required();
  example->add_option("--A", o.A, "Series parameter A")->default_val("1");
  example->add_option("--N", o.N, "Partial sum index N")->default_val(1);
  example->add_option("--decimals", o.decimals, "Show |alpha - S_N| to K decimals");
  add_format(example, o.format);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*expand) return cmd_expand(o, out);
    if (*eval) return cmd_eval(o, out, in);
    if (*convergents) return cmd_convergents(o, out);
    if (*mediants) return cmd_mediants(o, out);
    if (*classify_cmd) return cmd_classify(o, out);
    if (*check_cmd) return cmd_check(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*example) return cmd_example(o, out);
  } catch (const BudgetExhausted& e) {
    err << "budget exhausted: " << e.what() << " (raise LEGLAB_BUDGET)\n";
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n" << "Run with --help for usage.\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace leglab
