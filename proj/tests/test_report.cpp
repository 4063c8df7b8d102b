#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "leglab/report.hpp"

using namespace leglab;
using leglab::test::R;

namespace {

Universe small_universe() {
  Universe u;
  u.max_q = 6;
  u.family = RationalsUpTo{8};
  return u;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("json_integer switches to strings beyond int64") {
    CHECK(json_integer(BigInt(42)) == Json(42));
    CHECK(json_integer(BigInt(-7)) == Json(-7));
    const BigInt huge = BigInt(1) << 80;
    CHECK(json_integer(huge) == Json(huge.str()));
  }

  TEST_CASE("verdict json") {
    const Verdict v = check(TheoremId::RefinedT2, R(1, 3), AlphaSource::rational(R(4, 15)));
    const Json j = to_json(v);
    CHECK(j["theorem"] == "refined-t2");
    CHECK(j["hypothesis"] == "holds_equality");
    CHECK(j["classification"]["kind"] == "convergent");
    CHECK(j["classification"]["n"] == 1);
    CHECK(j["classification"]["b"].is_null());
    CHECK(j["exception"].is_null());
    CHECK(j["conclusion_satisfied"] == true);
    CHECK(j["equality"] == true);
    CHECK(j["bound"] == "1/15");

    const Json m = to_json(check(TheoremId::Koksma, R(1, 3), AlphaSource::rational(R(2, 5))));
    CHECK(m["classification"]["kind"] == "nearest_mediant");
    CHECK(m["classification"]["first"] == true);
  }

  TEST_CASE("report json schema") {
    const VerificationReport r = audit(TheoremId::RefinedT2, small_universe());
    const Json j = to_json(r);
    for (const char* key : {"theorem", "universe", "passed", "pairs_enumerated", "pairs_checked", "screened",
                            "hypothesis_holds", "inapplicable", "boundary_equalities", "counterexamples",
                            "equality_witnesses", "exception_histogram", "budget_exhausted"}) {
      CHECK_MESSAGE(j.contains(key), key);
    }
    CHECK(j["universe"]["max_q"] == 6);
    CHECK(j["universe"]["family"] == "rationals:8");
    CHECK(j["universe"]["window"] == "1/1");
    CHECK(j["passed"] == false);
    CHECK(j["counterexamples"]["total"] == r.counterexamples.total);
    REQUIRE(j["counterexamples"]["entries"].size() == r.counterexamples.entries.size());
    const Json& c = j["counterexamples"]["entries"][0];
    CHECK(c["reason"].get<std::string>().starts_with("hypothesis holds"));
    CHECK(c.contains("verdict"));
    for (const auto& w : j["equality_witnesses"]["entries"]) CHECK(w["case"] == w["verdict"]["exception"]);
    // Round trip through text.
    CHECK(Json::parse(j.dump()) == j);
  }

  TEST_CASE("big max_q is emitted as a string") {
    VerificationReport r;
    r.max_q = BigInt(1) << 70;
    CHECK(to_json(r)["universe"]["max_q"].is_string());
  }

  TEST_CASE("csv rows") {
    const VerificationReport r = audit(TheoremId::RefinedT2, small_universe());
    std::ostringstream os;
    write_csv(os, r);
    const auto rows = lines(os.str());
    REQUIRE(!rows.empty());
    CHECK(rows[0] == kCsvHeader);
    CHECK(rows.size() == 1 + r.counterexamples.entries.size() + r.equality_witnesses.entries.size());
    CHECK(rows[1] == "refined-t2,2,3,rat:3/5,holds_equality,nearest_mediant,,true,counterexample");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::count(rows[i].begin(), rows[i].end(), ',') == 8);

    std::ostringstream no_header;
    write_csv(no_header, r, false);
    CHECK(lines(no_header.str()).size() == rows.size() - 1);
  }

  TEST_CASE("csv quotes literals with commas") {
    VerificationReport r;
    r.theorem = TheoremId::Legendre;
    r.budget_exhausted.entries.push_back(BudgetRecord{R(1, 2), 0, "cf:[0;(1,2)]", "budget"});
    r.budget_exhausted.total = 1;
    std::ostringstream os;
    write_csv(os, r, false);
    CHECK(os.str() == "legendre,1,2,\"cf:[0;(1,2)]\",,,,,budget\n");
  }

  TEST_CASE("plain report ends with the result line") {
    std::ostringstream pass, fail;
    write_plain(pass, audit(TheoremId::Legendre, small_universe()));
    write_plain(fail, audit(TheoremId::RefinedT2, small_universe()));
    CHECK(lines(pass.str()).back() == "result: PASS");
    CHECK(lines(fail.str()).back() == "result: FAIL");
    CHECK(fail.str().find("counterexamples: 2") != std::string::npos);
  }

  TEST_CASE("sharpness and cross-order json") {
    Universe u;
    u.max_q = 30;
    u.family = CFShapes{3, 3};
    const auto w = sharpness_scan(TheoremId::Koksma, u);
    const Json j = to_json(w);
    REQUIRE(j.is_array());
    CHECK(j.size() == w.size());
    if (!w.empty()) CHECK(j[0].contains("scaled_error"));
    const Json c = to_json(cross_order_check(3));
    CHECK(c["ok"] == true);
    CHECK(c["rows"][0]["legendre"] == "1/8");
    CHECK(c["rows"][0]["refined_t3_qprev1"] == "1/6");
  }
}
