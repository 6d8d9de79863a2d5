#pragma once

#include <complex>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "shiftlab/error.hpp"
#include "shiftlab/forest.hpp"
#include "shiftlab/gauge.hpp"
#include "shiftlab/hypo.hpp"
#include "shiftlab/moments.hpp"
#include "shiftlab/shift.hpp"
#include "shiftlab/subnormal.hpp"

namespace shiftlab {

using Json = nlohmann::json;

// Parse failures of any kind surface as Error(ParseError).
Json parse_json(const std::string& text);
Json read_json_file(const std::filesystem::path& path);

// Rationals travel as "p/q" strings; plain JSON numbers are accepted on
// input (integers exactly, decimals by their shortest decimal spelling).
Json to_json(const Rational& value);
Rational rational_from_json(const Json& j);

// {"vertices":[...], "parent":{child: parent}} with roots as self-loops.
// "vertices" may be omitted when every vertex appears as a key of "parent".
Json to_json(const DirectedForest& f);
DirectedForest forest_from_json(const Json& j);

Json to_json(const TailProfile& t);
TailProfile tail_from_json(const Json& j);

// Forest and weights in one object: {"vertices","parent","sq","tails"}, plus
// "allow_leaves": true for shifts with leaves. The nested form
// {"forest":{...}, "weights":{"sq","tails"}} is accepted on input. `policy`
// overrides the flag in the document.
Json to_json(const WeightedShift& s);
WeightedShift shift_from_json(const Json& j, std::optional<LeafPolicy> policy = std::nullopt);

// {"atoms":[{"t":"p/q","w":"p/q"}, ...]}
Json to_json(const AtomicMeasure& m);
AtomicMeasure measure_from_json(const Json& j);

// A bare array or {"moments":[...]}.
Json to_json(const MomentSeq& a);
MomentSeq moments_from_json(const Json& j);

Json to_json(const HankelVerdict& v);
Json to_json(const MomentExtension& e);

// {"k", "verdict", "witness", "hip":{label: value}}; exact values as "p/q",
// float values as numbers.
Json to_json(const HipReport& r);
Json to_json(const FloatHipReport& r);
Json to_json(const PowerHypoReport& r);
Json to_json(const FloatPowerHypoReport& r);

Json to_json(const NodeMeasure& m);
// Per-position measures, defects and statuses with the overall verdict.
Json certificate_json(const WeightedShift& s, const SubnormalCert& cert);

// {"k", "edge_sq":[...], "C", "C0", "chain":[...]}
Json to_json(const ExtensionPlan& p);

// {"error": code, "message": ..., "witness": [...]}
Json to_json(const Error& e);

// Complex weights: {"lambda":{v: {"re":x,"im":y} | [x, y] | x}} next to the
// forest fields. Missing vertices have weight 0.
std::map<VertexId, std::complex<double>> complex_weights_from_json(const Json& j);
std::map<VertexId, GaussianRational> gaussian_weights_from_json(const Json& j);
Json to_json(const std::complex<double>& z);
Json to_json(const GaussianRational& z);

}  // namespace shiftlab
