#include "leglab/report.hpp"

#include <string_view>

namespace leglab {

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json pair_json(const Rational& pq, std::size_t alpha_index, const std::string& alpha) {
  Json j;
  j["p"] = json_integer(pq.num());
  j["q"] = json_integer(pq.den());
  j["alpha"] = alpha;
  j["alpha_index"] = alpha_index;
  return j;
}

template <class T, class Fn>
Json capped_json(const CappedList<T>& list, Fn entry) {
  Json j;
  j["total"] = list.total;
  j["entries"] = Json::array();
  for (const auto& e : list.entries) j["entries"].push_back(entry(e));
  return j;
}

void csv_row(std::ostream& os, TheoremId id, const Rational& pq, const std::string& alpha, const Verdict* v,
             std::string_view record) {
  os << to_string(id) << ',' << pq.num() << ',' << pq.den() << ',' << csv_field(alpha) << ',';
  if (v != nullptr) {
    os << to_string(v->hypothesis) << ',' << to_string(v->classification.kind) << ',';
    if (v->exception) os << *v->exception;
    os << ',' << (v->equality() ? "true" : "false");
  } else {
    os << ",,,";
  }
  os << ',' << record << '\n';
}

std::string describe(const Classification& c) {
  std::string out(to_string(c.kind));
  if (c.kind == Classification::Kind::Other) return out;
  out += " n=" + std::to_string(c.n);
  if (c.mediant) out += " b=" + c.mediant->b.str() + (c.mediant->first() ? " (first)" : "");
  return out;
}

}  // namespace

Json json_integer(const BigInt& v) {
  if (const auto small = to_int64(v)) return *small;
  return v.str();
}

Json to_json(const Classification& c) {
  Json j;
  j["kind"] = to_string(c.kind);
  if (c.kind == Classification::Kind::Other) j["n"] = nullptr;
  else j["n"] = c.n;
  if (c.mediant) {
    j["b"] = json_integer(c.mediant->b);
    j["first"] = c.mediant->first();
  } else {
    j["b"] = nullptr;
    j["first"] = nullptr;
  }
  return j;
}

Json to_json(const Verdict& v) {
  Json j;
  j["theorem"] = to_string(v.theorem);
  j["hypothesis"] = to_string(v.hypothesis);
  j["classification"] = to_json(v.classification);
  if (v.exception) j["exception"] = *v.exception;
  else j["exception"] = nullptr;
  j["conclusion_satisfied"] = v.conclusion_satisfied;
  j["equality"] = v.equality();
  j["notes"] = v.notes;
  j["bound"] = v.bound.str();
  return j;
}

Json to_json(const VerificationReport& r) {
  Json j;
  j["theorem"] = to_string(r.theorem);
  j["universe"] = {{"max_q", json_integer(r.max_q)},
                   {"family", r.family},
                   {"window", r.window.str()},
                   {"alphas", r.alpha_count}};
  j["passed"] = r.passed();
  j["pairs_enumerated"] = r.pairs_enumerated;
  j["pairs_checked"] = r.pairs_checked;
  j["screened"] = r.screened;
  j["hypothesis_holds"] = r.hypothesis_holds;
  j["inapplicable"] = r.inapplicable;
  j["boundary_equalities"] = r.boundary_equalities;
  auto record = [](const PairRecord& e) {
    Json x = pair_json(e.pq, e.alpha_index, e.alpha_literal);
    if (!e.reason.empty()) x["reason"] = e.reason;
    x["verdict"] = to_json(e.verdict);
    return x;
  };
  j["counterexamples"] = capped_json(r.counterexamples, record);
  j["equality_witnesses"] = capped_json(r.equality_witnesses, [&](const PairRecord& e) {
    Json x = record(e);
    x["case"] = *e.verdict.exception;
    return x;
  });
  Json hist = Json::object();
  for (const auto& [k, v] : r.exception_histogram) hist[std::to_string(k)] = v;
  j["exception_histogram"] = hist;
  j["budget_exhausted"] = capped_json(r.budget_exhausted, [](const BudgetRecord& e) {
    Json x = pair_json(e.pq, e.alpha_index, e.alpha_literal);
    x["message"] = e.message;
    return x;
  });
  return j;
}

Json to_json(const std::vector<SharpnessWitness>& witnesses) {
  Json arr = Json::array();
  for (const auto& w : witnesses) {
    Json x = pair_json(w.pq, w.alpha_index, w.alpha_literal);
    x["scaled_error"] = w.scaled_error.str();
    x["scaled_error_decimal"] = w.scaled_error.decimal(6);
    x["exact"] = w.exact;
    x["margin"] = w.margin.str();
    x["verdict"] = to_json(w.verdict);
    arr.push_back(std::move(x));
  }
  return arr;
}

Json to_json(const CrossOrderReport& r) {
  Json j;
  j["ok"] = r.ok;
  j["rows_checked"] = r.rows_checked;
  j["rows"] = Json::array();
  for (const auto& row : r.rows) {
    j["rows"].push_back({{"q", row.q},
                         {"legendre", row.legendre.str()},
                         {"refined_t1", row.t1.str()},
                         {"refined_t2", row.t2.str()},
                         {"refined_t3_qprev0", row.t3_prev0.str()},
                         {"refined_t3_qprev1", row.t3_prev1.str()},
                         {"refined_t3_qprevq", row.t3_prevq.str()},
                         {"ok", row.ok}});
  }
  return j;
}

void write_csv(std::ostream& os, const VerificationReport& r, bool header) {
  if (header) os << kCsvHeader << '\n';
  for (const auto& e : r.counterexamples.entries) csv_row(os, r.theorem, e.pq, e.alpha_literal, &e.verdict, "counterexample");
  for (const auto& e : r.equality_witnesses.entries) {
    csv_row(os, r.theorem, e.pq, e.alpha_literal, &e.verdict, "equality_witness");
  }
  for (const auto& e : r.budget_exhausted.entries) csv_row(os, r.theorem, e.pq, e.alpha_literal, nullptr, "budget");
}

void write_csv(std::ostream& os, TheoremId id, const std::vector<SharpnessWitness>& witnesses, bool header) {
  if (header) os << kCsvHeader << '\n';
  for (const auto& w : witnesses) csv_row(os, id, w.pq, w.alpha_literal, &w.verdict, "sharpness");
}

void write_plain(std::ostream& os, const Verdict& v) {
  os << "theorem: " << to_string(v.theorem) << '\n'
     << "hypothesis: " << to_string(v.hypothesis) << '\n'
     << "bound: " << v.bound << '\n'
     << "classification: " << describe(v.classification) << '\n'
     << "exception: " << (v.exception ? std::to_string(*v.exception) : "none") << '\n'
     << "conclusion_satisfied: " << (v.conclusion_satisfied ? "yes" : "no") << '\n';
  for (const auto& n : v.notes) os << "note: " << n << '\n';
}

void write_plain(std::ostream& os, const VerificationReport& r) {
  os << "theorem: " << to_string(r.theorem) << '\n'
     << "universe: max_q=" << r.max_q << " alpha=" << r.family << " window=" << r.window << " (" << r.alpha_count
     << " alphas)\n"
     << "pairs: " << r.pairs_enumerated << " enumerated, " << r.pairs_checked << " checked, " << r.inapplicable
     << " inapplicable, " << r.budget_exhausted.total << " budget-exhausted\n"
     << "hypothesis holds: " << r.hypothesis_holds << '\n'
     << "equality witnesses: " << r.equality_witnesses.total << '\n'
     << "boundary equalities: " << r.boundary_equalities << '\n';
  os << "exception histogram:";
  if (r.exception_histogram.empty()) os << " none";
  for (const auto& [k, v] : r.exception_histogram) os << ' ' << k << ':' << v;
  os << '\n' << "counterexamples: " << r.counterexamples.total << '\n';
  const std::size_t shown = std::min<std::size_t>(r.counterexamples.entries.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& e = r.counterexamples.entries[i];
    os << "  " << e.pq << " vs " << e.alpha_literal << ": " << describe(e.verdict.classification) << ", " << e.reason
       << '\n';
  }
  if (shown < r.counterexamples.total) os << "  ... " << (r.counterexamples.total - shown) << " more\n";
  os << "result: " << (r.passed() ? "PASS" : "FAIL");
  if (r.budget_exhausted.total > 0) os << " (" << r.budget_exhausted.total << " pairs undecided: budget exhausted)";
  os << '\n';
}

void write_plain(std::ostream& os, const std::vector<SharpnessWitness>& witnesses) {
  os << "sharpness witnesses: " << witnesses.size() << '\n';
  for (const auto& w : witnesses) {
    os << "  " << w.pq << " vs " << w.alpha_literal << ": q^2|alpha-p/q| " << (w.exact ? "= " : "~ ")
       << w.scaled_error << " (" << w.scaled_error.decimal(6) << "), " << describe(w.verdict.classification) << '\n';
  }
}

void write_plain(std::ostream& os, const CrossOrderReport& r) {
  os << "bound ordering: " << (r.ok ? "ok" : "VIOLATED") << " over " << r.rows_checked << " values of q\n";
  for (const auto& row : r.rows) {
    os << "  q=" << row.q << ": " << row.legendre << " < " << row.t1 << " < " << row.t2 << "; t3(q_prev=0,1,q) = "
       << row.t3_prev0 << ", " << row.t3_prev1 << ", " << row.t3_prevq << (row.ok ? "" : "  VIOLATED") << '\n';
  }
}

}  // namespace leglab
