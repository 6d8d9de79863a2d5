#include "shiftlab/io.hpp"

#include <fstream>
#include <sstream>

namespace shiftlab {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string string_of(const Json& j, const char* what) {
  if (!j.is_string()) parse_error(std::string(what) + " must be a string");
  return j.get<std::string>();
}

double double_of(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return to_double(parse_rational(j.get<std::string>()));
  parse_error("expected a number");
}

Json value_json(const Rational& x) { return to_string(x); }
Json value_json(double x) { return x; }

template <class Report>
Json hip_report_json(const Report& r) {
  Json hip = Json::object();
  for (const auto& v : r.values) hip[v.label] = value_json(v.value);
  return Json{{"k", r.k},
              {"verdict", std::string(to_string(r.verdict))},
              {"witness", r.witness.empty() ? Json(nullptr) : Json(r.witness)},
              {"hip", std::move(hip)}};
}

template <class Report>
Json power_report_json(const Report& r) {
  Json reports = Json::array();
  for (const auto& rep : r.reports) reports.push_back(to_json(rep));
  const auto* bad = r.first_failure();
  return Json{{"k_max", r.reports.size()},
              {"holds", r.holds()},
              {"forkless", r.forkless},
              {"conclusive", r.conclusive()},
              {"failing_k", bad ? Json(bad->k) : Json(nullptr)},
              {"witness", bad ? Json(bad->witness) : Json(nullptr)},
              {"reports", std::move(reports)}};
}

// Accepts the forest fields either at top level or under "forest".
const Json& forest_part(const Json& j) {
  if (j.is_object() && j.contains("forest")) return j.at("forest");
  return j;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    parse_error(std::string("invalid JSON: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot read '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str());
}

Json to_json(const Rational& value) { return to_string(value); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Rational(mpz_class(std::to_string(j.get<std::uint64_t>())));
    return Rational(mpz_class(std::to_string(j.get<std::int64_t>())));
  }
  if (j.is_number_float()) return parse_rational(j.dump());
  parse_error("expected a rational, got " + j.dump());
}

Json to_json(const DirectedForest& f) {
  Json parent = Json::object();
  for (std::size_t i = 0; i < f.size(); ++i) parent[f.id(i)] = f.id(f.parent(i));
  return Json{{"vertices", f.vertices()}, {"parent", std::move(parent)}};
}

DirectedForest forest_from_json(const Json& doc) {
  const Json& j = forest_part(doc);
  const Json& parent_json = field(j, "parent");
  if (!parent_json.is_object()) parse_error("'parent' must be an object");
  std::map<VertexId, VertexId> parent;
  for (const auto& [child, p] : parent_json.items()) parent[child] = string_of(p, "parent id");
  if (!j.contains("vertices")) return DirectedForest::from_parent_map(parent);
  const Json& vs = j.at("vertices");
  if (!vs.is_array()) parse_error("'vertices' must be an array");
  std::vector<VertexId> vertices;
  for (const auto& v : vs) vertices.push_back(string_of(v, "vertex id"));
  return DirectedForest::from_parent_map(std::move(vertices), parent);
}

Json to_json(const TailProfile& t) {
  Json prefix = Json::array();
  for (const auto& x : t.prefix_sq) prefix.push_back(to_json(x));
  return Json{{"prefix_sq", std::move(prefix)}, {"constant_sq", to_json(t.constant_sq)}};
}

TailProfile tail_from_json(const Json& j) {
  if (!j.is_object()) parse_error("a tail must be an object");
  TailProfile t;
  if (j.contains("prefix_sq")) {
    const Json& p = j.at("prefix_sq");
    if (!p.is_array()) parse_error("'prefix_sq' must be an array");
    for (const auto& x : p) t.prefix_sq.push_back(rational_from_json(x));
  }
  if (j.contains("constant_sq")) t.constant_sq = rational_from_json(j.at("constant_sq"));
  return t;
}

Json to_json(const WeightedShift& s) {
  Json out = to_json(s.forest());
  Json sq = Json::object();
  for (const auto& [id, w] : s.sq_map()) sq[id] = to_json(w);
  Json tails = Json::object();
  for (const auto& [id, t] : s.tails()) tails[id] = to_json(t);
  out["sq"] = std::move(sq);
  out["tails"] = std::move(tails);
  if (s.leaf_policy() == LeafPolicy::Allow) out["allow_leaves"] = true;
  return out;
}

WeightedShift shift_from_json(const Json& doc, std::optional<LeafPolicy> policy) {
  if (!doc.is_object()) parse_error("a shift must be a JSON object");
  auto forest = forest_from_json(doc);
  const Json& weights = doc.contains("weights") ? doc.at("weights") : doc;
  const Json& sq_json = field(weights, "sq");
  if (!sq_json.is_object()) parse_error("'sq' must be an object");
  std::map<VertexId, Rational> sq;
  for (const auto& [id, w] : sq_json.items()) sq[id] = rational_from_json(w);
  // Roots may be omitted; their weight is 0 by definition.
  for (const auto& r : roots(forest)) sq.try_emplace(r, Rational(0));
  std::map<VertexId, TailProfile> tails;
  if (weights.contains("tails")) {
    const Json& tj = weights.at("tails");
    if (!tj.is_object()) parse_error("'tails' must be an object");
    for (const auto& [id, t] : tj.items()) tails[id] = tail_from_json(t);
  }
  LeafPolicy leaves = LeafPolicy::Forbid;
  if (policy) {
    leaves = *policy;
  } else if (doc.contains("allow_leaves") && doc.at("allow_leaves").is_boolean() &&
             doc.at("allow_leaves").get<bool>()) {
    leaves = LeafPolicy::Allow;
  }
  return WeightedShift(std::move(forest), sq, std::move(tails), leaves);
}

Json to_json(const AtomicMeasure& m) {
  Json atoms = Json::array();
  for (const auto& a : m.atoms()) atoms.push_back(Json{{"t", to_json(a.t)}, {"w", to_json(a.w)}});
  return Json{{"atoms", std::move(atoms)}};
}

AtomicMeasure measure_from_json(const Json& j) {
  const Json& atoms_json = field(j, "atoms");
  if (!atoms_json.is_array()) parse_error("'atoms' must be an array");
  std::vector<Atom> atoms;
  for (const auto& a : atoms_json) {
    atoms.push_back({rational_from_json(field(a, "t")), rational_from_json(field(a, "w"))});
  }
  return AtomicMeasure::from_atoms(std::move(atoms));
}

Json to_json(const MomentSeq& a) {
  Json values = Json::array();
  for (const auto& x : a.values()) values.push_back(to_json(x));
  return Json{{"moments", std::move(values)}};
}

MomentSeq moments_from_json(const Json& j) {
  const Json& values = j.is_array() ? j : field(j, "moments");
  if (!values.is_array()) parse_error("'moments' must be an array");
  std::vector<Rational> a;
  for (const auto& x : values) a.push_back(rational_from_json(x));
  return MomentSeq::from_values(std::move(a));
}

Json to_json(const HankelVerdict& v) {
  Json out{{"consistent", v.consistent}};
  if (v.consistent) {
    out["upto"] = v.upto;
  } else {
    out["matrix"] = v.matrix == 0 ? "a_{i+j}" : "a_{i+j+1}";
    out["minor_size"] = v.minor_size;
  }
  return out;
}

Json to_json(const MomentExtension& e) {
  Json prefix = Json::array();
  for (const auto& x : e.prefix) prefix.push_back(to_json(x));
  return Json{{"k", e.k},
              {"prefix", std::move(prefix)},
              {"measure", to_json(e.measure)},
              {"defect", to_json(e.defect)}};
}

Json to_json(const HipReport& r) { return hip_report_json(r); }
Json to_json(const FloatHipReport& r) { return hip_report_json(r); }
Json to_json(const PowerHypoReport& r) { return power_report_json(r); }
Json to_json(const FloatPowerHypoReport& r) { return power_report_json(r); }

Json to_json(const NodeMeasure& m) {
  Json out{{"status", std::string(to_string(m.status))}};
  if (m.status == NodeMeasure::Status::Feasible) {
    out["measure"] = to_json(m.mu);
    out["defect"] = to_json(m.defect);
  } else if (m.status == NodeMeasure::Status::MassExceeds) {
    out["measure"] = to_json(m.mu);
    out["excess"] = to_json(*m.excess);
  }
  return out;
}

Json certificate_json(const WeightedShift& s, const SubnormalCert& cert) {
  Json positions = Json::object();
  for (const auto& x : cert.table.nodes()) positions[s.label(x)] = to_json(cert.table.at(x));
  return Json{{"verdict", std::string(to_string(cert.verdict))},
              {"witness", cert.witness ? Json(s.label(*cert.witness)) : Json(nullptr)},
              {"excess", cert.excess ? to_json(*cert.excess) : Json(nullptr)},
              {"vertices", std::move(positions)}};
}

Json to_json(const ExtensionPlan& p) {
  Json edges = Json::array();
  for (const auto& x : p.new_edge_sq) edges.push_back(to_json(x));
  return Json{{"k", p.k},
              {"edge_sq", std::move(edges)},
              {"C", to_json(p.C)},
              {"C0", to_json(p.C0)},
              {"chain", p.chain_ids}};
}

Json to_json(const Error& e) {
  return Json{{"error", std::string(to_string(e.code()))},
              {"message", e.what()},
              {"witness", e.witness()}};
}

namespace {

template <class Value, class Convert>
std::map<VertexId, Value> weights_from_json(const Json& doc, Convert convert) {
  const Json& lambda = field(doc.contains("weights") ? doc.at("weights") : doc, "lambda");
  if (!lambda.is_object()) parse_error("'lambda' must be an object");
  std::map<VertexId, Value> out;
  for (const auto& [id, z] : lambda.items()) {
    if (z.is_object()) {
      out[id] = convert(field(z, "re"), z.contains("im") ? z.at("im") : Json(0));
    } else if (z.is_array() && z.size() == 2) {
      out[id] = convert(z[0], z[1]);
    } else {
      out[id] = convert(z, Json(0));
    }
  }
  return out;
}

}  // namespace

std::map<VertexId, std::complex<double>> complex_weights_from_json(const Json& j) {
  return weights_from_json<std::complex<double>>(j, [](const Json& re, const Json& im) {
    return std::complex<double>(double_of(re), double_of(im));
  });
}

std::map<VertexId, GaussianRational> gaussian_weights_from_json(const Json& j) {
  return weights_from_json<GaussianRational>(j, [](const Json& re, const Json& im) {
    return GaussianRational(rational_from_json(re), rational_from_json(im));
  });
}

Json to_json(const std::complex<double>& z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json to_json(const GaussianRational& z) {
  return Json{{"re", to_json(z.re)}, {"im", to_json(z.im)}};
}

}  // namespace shiftlab
