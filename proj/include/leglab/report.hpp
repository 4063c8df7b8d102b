#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "leglab/criteria.hpp"
#include "leglab/verifier.hpp"

namespace leglab {

using Json = nlohmann::ordered_json;

/// A JSON number when the value fits in int64, otherwise a decimal string.
Json json_integer(const BigInt& v);

/// {kind, n, b, first}; b and first are null for non-mediants.
Json to_json(const Classification& c);
/// {theorem, hypothesis, classification, exception, conclusion_satisfied,
///  equality, notes, bound}
Json to_json(const Verdict& v);
Json to_json(const VerificationReport& r);
Json to_json(const std::vector<SharpnessWitness>& witnesses);
Json to_json(const CrossOrderReport& r);

/// Header row of every CSV this module writes.
inline constexpr const char* kCsvHeader = "theorem,p,q,alpha_literal,hypothesis,classification,exception,equality,record";

/// One row per counterexample, equality witness and budget-exhausted pair,
/// in that order. `record` is counterexample, equality_witness or budget.
void write_csv(std::ostream& os, const VerificationReport& r, bool header = true);
/// One row per witness with record = sharpness.
void write_csv(std::ostream& os, TheoremId id, const std::vector<SharpnessWitness>& witnesses, bool header = true);

void write_plain(std::ostream& os, const Verdict& v);
void write_plain(std::ostream& os, const VerificationReport& r);
void write_plain(std::ostream& os, const std::vector<SharpnessWitness>& witnesses);
void write_plain(std::ostream& os, const CrossOrderReport& r);

}  // namespace leglab
