#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <shiftlab/shiftlab.hpp>
#include <string>
#include <vector>

using namespace shiftlab;

namespace {

constexpr int kHolds = 0;
constexpr int kInternal = 1;
constexpr int kStructural = 2;
constexpr int kFails = 3;
constexpr int kInfeasible = 4;

struct Globals {
  std::string mode = "exact";
  double tolerance = kDefaultTolerance;
  std::uint64_t seed = 1;
  std::string out;

  bool exact() const { return mode == "exact"; }
};

struct Outcome {
  Json body;
  int code = kHolds;
};

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Infeasible:
    case ErrorCode::MemberInfeasible:
    case ErrorCode::MemberNotExtendable:
    case ErrorCode::ForklessInput:
    case ErrorCode::NotSubnormalInput:
      return kInfeasible;
    case ErrorCode::InternalCheckFailed:
      return kInternal;
    default:
      return kStructural;
  }
}

// Exit code of several results: a structural problem dominates a failure.
int combine(int a, int b) {
  auto rank = [](int c) {
    switch (c) {
      case kInternal: return 4;
      case kStructural: return 3;
      case kInfeasible: return 2;
      case kFails: return 1;
      default: return 0;
    }
  };
  return rank(a) >= rank(b) ? a : b;
}

std::vector<WeightedShift> load_shifts(const std::vector<std::string>& files,
                                       std::optional<LeafPolicy> policy = std::nullopt) {
  std::vector<WeightedShift> out;
  for (const auto& f : files) out.push_back(shift_from_json(read_json_file(f), policy));
  return out;
}

std::vector<DirectedForest> load_forests(const std::vector<std::string>& files) {
  std::vector<DirectedForest> out;
  for (const auto& f : files) out.push_back(forest_from_json(read_json_file(f)));
  return out;
}

Json json_list(const std::vector<Rational>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(to_json(x));
  return out;
}

Json forest_summary(const DirectedForest& f) {
  return Json{{"vertices", f.size()},
              {"roots", roots(f)},
              {"components", components(f).size()},
              {"is_tree", is_tree(f)},
              {"canonical", canonical_form(f)}};
}

Outcome forest_result(const DirectedForest& f) {
  return {Json{{"forest", to_json(f)}, {"summary", forest_summary(f)}}, kHolds};
}

// Comma-separated list, order kept, empty items dropped.
std::vector<std::string> split_list(const std::string& list) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < list.size()) {
    auto end = list.find(',', start);
    if (end == std::string::npos) end = list.size();
    if (end > start) out.push_back(list.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

// Tailed vertices of a forest or shift document: the keys of "tails" when
// present, otherwise every childless vertex.
std::set<VertexId> tailed_of(const Json& doc, const DirectedForest& f) {
  const Json& weights = doc.contains("weights") ? doc.at("weights") : doc;
  std::set<VertexId> tailed;
  if (weights.contains("tails") && weights.at("tails").is_object()) {
    for (const auto& [id, t] : weights.at("tails").items()) tailed.insert(id);
    return tailed;
  }
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (f.degree(v) == 0) tailed.insert(f.id(v));
  }
  return tailed;
}

// Random recursive tree on n vertices with a fork below the root.
DirectedForest random_fork_tree(std::size_t n, std::uint64_t seed) {
  if (n < 4) {
    throw Error(ErrorCode::InvalidArgument, "a tree with a non-root fork needs at least 4 vertices");
  }
  std::mt19937_64 rng(seed);
  const auto width = std::to_string(n - 1).size();
  auto name = [&](std::size_t i) {
    std::string s = std::to_string(i);
    return "n" + std::string(width - s.size(), '0') + s;
  };
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::map<VertexId, VertexId> parent{{name(0), name(0)}};
    for (std::size_t i = 1; i < n; ++i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      parent[name(i)] = name(pick(rng));
    }
    auto f = DirectedForest::from_parent_map(parent);
    std::set<VertexId> tailed;
    for (std::size_t v = 0; v < f.size(); ++v) {
      if (f.degree(v) == 0) tailed.insert(f.id(v));
    }
    if (classify_forkless(f, tailed).kind == ForestClassification::Kind::NotForkless) return f;
  }
  throw Error(ErrorCode::InternalCheckFailed, "could not generate a tree with a non-root fork");
}

void write_csv(const std::string& path, const Json& hip) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << "position,hip\n";
  for (const auto& [label, value] : hip.items()) {
    out << label << ',' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
}

// --- forest -----------------------------------------------------------------

struct ForestArgs {
  std::vector<std::string> files;
  unsigned k = 1;
  bool prefix = false;
  std::string tailed;
};

Outcome cmd_forest(const std::string& sub, const ForestArgs& a) {
  if (sub == "validate") {
    auto f = load_forests(a.files).front();
    return {Json{{"valid", true}, {"summary", forest_summary(f)}}, kHolds};
  }
  if (sub == "power") {
    if (a.k == 0) throw Error(ErrorCode::InvalidArgument, "-k must be at least 1");
    return forest_result(power_k(load_forests(a.files).front(), a.k));
  }
  if (sub == "rooted-sum") {
    return forest_result(rooted_sum(load_forests(a.files), a.prefix ? AutoPrefix::Yes : AutoPrefix::No));
  }
  if (sub == "direct-sum") {
    return forest_result(direct_sum(load_forests(a.files), a.prefix ? AutoPrefix::Yes : AutoPrefix::No));
  }
  if (sub == "backward") {
    return forest_result(backward_extend_tree(load_forests(a.files).front(), a.k));
  }
  // classify
  const Json doc = read_json_file(a.files.front());
  const auto f = forest_from_json(doc);
  auto tailed = a.tailed.empty() ? tailed_of(doc, f) : std::set<VertexId>{};
  for (const auto& id : split_list(a.tailed)) tailed.insert(id);
  Json parts = Json::array();
  bool forkless = true;
  for (const auto& c : components(f)) {
    std::set<VertexId> local;
    for (const auto& id : c.vertices()) {
      if (tailed.contains(id)) local.insert(id);
    }
    auto cls = classify_forkless(c, local);
    forkless = forkless && cls.kind == ForestClassification::Kind::NArmStar;
    Json entry{{"root", tree_root(c)}, {"kind", std::string(to_string(cls.kind))}};
    if (cls.kind == ForestClassification::Kind::NArmStar) entry["arms"] = cls.arms;
    parts.push_back(std::move(entry));
  }
  return {Json{{"forkless", forkless}, {"components", std::move(parts)}}, kHolds};
}

// --- check ------------------------------------------------------------------

struct CheckArgs {
  std::string property;
  std::vector<std::string> files;
  unsigned k = 1;
  unsigned k_max = 4;
  std::string csv;
};

template <class Report>
int hypo_code(const Report& r) {
  if (r.holds()) return kHolds;
  return r.verdict == HypoVerdict::LeafObstruction ? kStructural : kFails;
}

template <class Scalar>
Outcome check_hypo(const WeightedShift& s, const CheckArgs& a, double tol) {
  if (a.property == "hyponormal") {
    auto r = check_hyponormal_power<Scalar>(s, a.k, tol);
    return {to_json(r), hypo_code(r)};
  }
  auto r = check_power_hyponormal<Scalar>(s, a.k_max, tol);
  Json body = to_json(r);
  int code = kHolds;
  if (const auto* bad = r.first_failure()) {
    code = hypo_code(*bad);
    if (bad->find(bad->witness)) body["witness_hip"] = to_json(*bad)["hip"][bad->witness];
  }
  return {std::move(body), code};
}

Outcome check_one(const WeightedShift& s, const CheckArgs& a, const Globals& g) {
  Outcome o;
  if (a.property == "subnormal") {
    auto cert = check_subnormal(s);
    o = {certificate_json(s, cert), cert.holds() ? kHolds : kFails};
    o.body["mode"] = "exact";
  } else {
    o = g.exact() ? check_hypo<Rational>(s, a, 0.0) : check_hypo<double>(s, a, g.tolerance);
    o.body["mode"] = g.mode;
    if (!g.exact()) o.body["tolerance"] = g.tolerance;
  }
  o.body["property"] = a.property;
  return o;
}

Outcome cmd_check(const CheckArgs& a, const Globals& g) {
  Outcome total{Json::array(), kHolds};
  for (const auto& file : a.files) {
    Outcome o;
    try {
      o = check_one(shift_from_json(read_json_file(file), LeafPolicy::Allow), a, g);
    } catch (const Error& e) {
      o = {to_json(e), exit_code(e.code())};
    }
    o.body["file"] = file;
    if (!a.csv.empty() && o.body.contains("hip")) write_csv(a.csv, o.body["hip"]);
    total.code = combine(total.code, o.code);
    total.body.push_back(std::move(o.body));
  }
  if (total.body.size() == 1) total.body = total.body[0];
  else total.body = Json{{"results", std::move(total.body)}};
  return total;
}

// --- extend -----------------------------------------------------------------

struct ExtendArgs {
  std::vector<std::string> files;
  unsigned k = 1;
  std::string C;
  std::string envelope;
  std::string ext_sq;
  unsigned k_max = 4;
};

void recertify(bool ok) {
  if (!ok) throw Error(ErrorCode::InternalCheckFailed, "constructed shift failed re-certification");
}

Outcome cmd_extend(const std::string& sub, const ExtendArgs& a) {
  auto members = load_shifts(a.files);
  if (sub == "single") {
    std::optional<Rational> C;
    if (!a.C.empty()) C = parse_rational(a.C);
    auto ext = construct_backward_extension(members.front(), a.k, C);
    recertify(check_subnormal(ext.shift).holds());
    return {Json{{"shift", to_json(ext.shift)},
                 {"plan", to_json(ext.plan)},
                 {"prefix", json_list(ext.prefix)},
                 {"verdict", "Subnormal"}},
            kHolds};
  }
  if (sub == "rooted-sum") {
    auto r = rooted_sum_extend(members, a.k);
    recertify(check_subnormal(r.shift).holds());
    auto C0 = backward_extension_feasible(r.shift, a.k);
    recertify(C0.has_value());
    return {Json{{"shift", to_json(r.shift)},
                 {"theta_sq", json_list(r.theta_sq)},
                 {"C", json_list(r.C)},
                 {"D", json_list(r.D)},
                 {"root", r.root},
                 {"member_roots", r.member_roots},
                 {"plan", Json{{"k", a.k}, {"C0", to_json(*C0)}}},
                 {"verdict", "Subnormal"}},
            kHolds};
  }
  if (sub == "join-depth") {
    if (a.envelope.empty()) throw Error(ErrorCode::InvalidArgument, "--envelope is required");
    auto envelope = forest_from_json(read_json_file(a.envelope));
    auto r = join_at_depth(members, envelope, a.k);
    recertify(check_subnormal(r.shift).holds());
    return {Json{{"shift", to_json(r.shift)},
                 {"frontier", r.frontier},
                 {"k", a.k},
                 {"verdict", "Subnormal"}},
            kHolds};
  }
  // powerhypo
  std::vector<Rational> ext_sq;
  for (const auto& x : split_list(a.ext_sq)) ext_sq.push_back(parse_rational(x));
  if (ext_sq.empty()) ext_sq.assign(members.size(), Rational(1));
  auto r = powerhypo_rooted_sum_extend(members, ext_sq, a.k_max);
  auto report = check_power_hyponormal<Rational>(r.shift, a.k_max);
  recertify(report.holds());
  return {Json{{"shift", to_json(r.shift)},
               {"a_sq", json_list(r.a_sq)},
               {"theta_sq", json_list(r.theta_sq)},
               {"root", r.root},
               {"member_roots", r.member_roots},
               {"report", to_json(report)}},
          kHolds};
}

// --- counterexample ---------------------------------------------------------

struct CounterArgs {
  std::string file;
  std::size_t generate = 0;
  std::string v1;
};

Outcome cmd_counterexample(const CounterArgs& a, const Globals& g) {
  DirectedForest tree = DirectedForest::from_parent_map({{"_", "_"}});
  std::set<VertexId> tailed;
  if (a.generate > 0) {
    tree = random_fork_tree(a.generate, g.seed);
    for (std::size_t v = 0; v < tree.size(); ++v) {
      if (tree.degree(v) == 0) tailed.insert(tree.id(v));
    }
  } else {
    if (a.file.empty()) throw Error(ErrorCode::InvalidArgument, "give a tree file or --generate n");
    const Json doc = read_json_file(a.file);
    tree = forest_from_json(doc);
    tailed = tailed_of(doc, tree);
  }
  std::optional<VertexId> v1;
  if (!a.v1.empty()) v1 = a.v1;
  auto ce = make_counterexample(tree, tailed, v1);

  auto r1 = check_hyponormal_power<Rational>(ce.shift, 1);
  auto r2 = check_hyponormal_power<Rational>(ce.shift, 2);
  Rational max1 = 0;
  for (const auto& v : r1.values) max1 = std::max(max1, v.value);
  const Rational hip2 = *r2.find(ce.v0);
  const bool verified = r1.holds() && !r2.holds() && hip2 == ce.expected_hip2;
  if (!verified) {
    throw Error(ErrorCode::InternalCheckFailed, "generated weights failed verification");
  }
  return {Json{{"shift", to_json(ce.shift)},
               {"v0", ce.v0},
               {"v1", ce.v1},
               {"v2", ce.v2},
               {"beta", to_json(ce.beta)},
               {"verification",
                Json{{"hip1_max", to_json(max1)},
                     {"hyponormal", r1.holds()},
                     {"hip2_v0", to_json(hip2)},
                     {"expected_hip2", to_json(ce.expected_hip2)},
                     {"square_verdict", std::string(to_string(r2.verdict))},
                     {"square_witness", r2.witness}}}},
          kHolds};
}

// --- gauge ------------------------------------------------------------------

Outcome cmd_gauge(const std::string& file, const Globals& g) {
  const Json doc = read_json_file(file);
  const auto f = forest_from_json(doc);
  Json beta = Json::object();
  Json modulus_sq = Json::object();
  if (g.exact()) {
    auto lambda = gaussian_weights_from_json(doc);
    for (const auto& [id, b] : phase_gauge(f, lambda)) beta[id] = to_json(b);
    for (const auto& id : f.vertices()) {
      auto it = lambda.find(id);
      modulus_sq[id] = to_json(it == lambda.end() ? Rational(0) : it->second.norm_sq());
    }
  } else {
    auto lambda = complex_weights_from_json(doc);
    for (const auto& [id, b] : phase_gauge(f, lambda)) beta[id] = to_json(b);
    for (const auto& id : f.vertices()) {
      auto it = lambda.find(id);
      modulus_sq[id] = it == lambda.end() ? 0.0 : std::norm(it->second);
    }
  }
  return {Json{{"mode", g.mode}, {"beta", std::move(beta)}, {"sq", std::move(modulus_sq)}}, kHolds};
}

// --- moments ----------------------------------------------------------------

struct MomentArgs {
  std::string file;
  unsigned n = 8;
  unsigned k = 1;
  std::string vertex;
};

Outcome cmd_moments(const std::string& sub, const MomentArgs& a) {
  const Json doc = read_json_file(a.file);
  if (sub == "of") {
    auto m = measure_from_json(doc);
    return {Json{{"measure", to_json(m)}, {"moments", to_json(moments_of(m, a.n))["moments"]}}, kHolds};
  }
  if (sub == "hankel") {
    auto v = hankel_check(moments_from_json(doc));
    return {to_json(v), v.consistent ? kHolds : kFails};
  }
  if (sub == "extend") {
    auto m = measure_from_json(doc);
    auto neg = neg_moment(m, a.k);
    Json body{{"k", a.k}, {"neg_moment", neg ? to_json(*neg) : Json(nullptr)}};
    auto ext = backward_extend_moments(m, a.k);
    if (!ext) {
      body["feasible"] = false;
      return {std::move(body), kInfeasible};
    }
    body["feasible"] = true;
    body["extension"] = to_json(*ext);
    return {std::move(body), kHolds};
  }
  // vertex
  auto s = shift_from_json(doc);
  if (a.vertex.empty()) throw Error(ErrorCode::InvalidArgument, "--vertex is required");
  Json values = Json::array();
  for (unsigned n = 0; n <= a.n; ++n) values.push_back(to_json(moment(s, a.vertex, n)));
  auto nm = vertex_measure(s, a.vertex);
  return {Json{{"vertex", a.vertex}, {"moments", std::move(values)}, {"measure", to_json(nm)}},
          nm.status == NodeMeasure::Status::Feasible ? kHolds : kFails};
}

CLI::App* add_sub(CLI::App* parent, const std::string& name, const std::string& desc) {
  auto* sub = parent->add_subcommand(name, desc);
  sub->fallthrough();
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  if (const char* env = std::getenv("SHIFTLAB_MODE")) g.mode = env;

  CLI::App app{"Weighted shifts on directed forests: hyponormality, subnormality, extensions"};
  app.require_subcommand(1);
  app.add_option("--mode", g.mode, "exact or float (default from SHIFTLAB_MODE, else exact)")
      ->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--tolerance", g.tolerance, "float-mode tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed for random generation");
  app.add_option("--out", g.out, "write the result here instead of stdout");

  std::function<Outcome()> run;

  ForestArgs fa;
  auto* forest = add_sub(&app, "forest", "forest operations");
  forest->require_subcommand(1);
  const std::vector<std::pair<const char*, const char*>> forest_cmds{
      {"validate", "parse a forest and summarise it"},
      {"power", "k-th power of a forest"},
      {"rooted-sum", "join trees under a fresh root"},
      {"direct-sum", "disjoint union of forests"},
      {"backward", "prepend a chain of k vertices above a tree"},
      {"classify", "decide forklessness of each component"}};
  for (const auto& [name, desc] : forest_cmds) {
    auto* sub = add_sub(forest, name, desc);
    sub->add_option("files", fa.files, "forest JSON files")->required();
    if (std::string(name) == "power" || std::string(name) == "backward") {
      sub->add_option("-k", fa.k, "power or extension length");
    }
    if (std::string(name) == "rooted-sum" || std::string(name) == "direct-sum") {
      sub->add_flag("--prefix", fa.prefix, "prefix member ids with 'j:'");
    }
    if (std::string(name) == "classify") {
      sub->add_option("--tailed", fa.tailed, "comma-separated vertices carrying tails");
    }
    sub->callback([&, name = std::string(name)] { run = [&, name] { return cmd_forest(name, fa); }; });
  }

  CheckArgs ca;
  auto* check = add_sub(&app, "check", "certify a property of weighted shifts");
  check->add_option("--property", ca.property, "hyponormal, power-hyponormal or subnormal")
      ->required()
      ->check(CLI::IsMember({"hyponormal", "power-hyponormal", "subnormal"}));
  check->add_option("-k", ca.k, "power tested by the hyponormal property");
  check->add_option("--kmax", ca.k_max, "largest power for power-hyponormal");
  check->add_option("--csv", ca.csv, "also write the hip profile as CSV");
  check->add_option("files", ca.files, "shift JSON files")->required();
  check->callback([&] { run = [&] { return cmd_check(ca, g); }; });

  ExtendArgs ea;
  auto* extend = add_sub(&app, "extend", "backward and joint extensions");
  extend->require_subcommand(1);
  const std::vector<std::pair<const char*, const char*>> extend_cmds{
      {"single", "k-step backward extension of a subnormal shift"},
      {"rooted-sum", "subnormal rooted sum of a family, extended k steps"},
      {"join-depth", "join a family at depth k under an envelope tree"},
      {"powerhypo", "power hyponormal rooted sum of 1-step extensions"}};
  for (const auto& [name, desc] : extend_cmds) {
    auto* sub = add_sub(extend, name, desc);
    sub->add_option("files", ea.files, "shift JSON files")->required();
    const std::string n = name;
    if (n != "powerhypo") sub->add_option("-k,--depth", ea.k, "extension length or join depth");
    if (n == "single") sub->add_option("--C", ea.C, "scale in (0, 1/C0]");
    if (n == "join-depth") sub->add_option("--envelope", ea.envelope, "envelope tree JSON")->required();
    if (n == "powerhypo") {
      sub->add_option("--ext-sq", ea.ext_sq, "comma-separated 1-step extension weights");
      sub->add_option("--kmax", ea.k_max, "largest power checked");
    }
    sub->callback([&, n] { run = [&, n] { return cmd_extend(n, ea); }; });
  }

  CounterArgs xa;
  auto* counter = add_sub(&app, "counterexample", "hyponormal shift with non-hyponormal square");
  counter->add_option("file", xa.file, "tree or shift JSON");
  counter->add_option("--generate", xa.generate, "random tree with this many vertices");
  counter->add_option("--v1", xa.v1, "fork vertex to use");
  counter->callback([&] { run = [&] { return cmd_counterexample(xa, g); }; });

  std::string gauge_file;
  auto* gauge = add_sub(&app, "gauge", "phases turning complex weights into their moduli");
  gauge->add_option("file", gauge_file, "forest JSON with a 'lambda' map")->required();
  gauge->callback([&] { run = [&] { return cmd_gauge(gauge_file, g); }; });

  MomentArgs ma;
  auto* moments = add_sub(&app, "moments", "moment sequences and measures");
  moments->require_subcommand(1);
  const std::vector<std::pair<const char*, const char*>> moment_cmds{
      {"of", "moments of an atomic measure"},
      {"hankel", "Hankel positivity of a moment sequence"},
      {"extend", "k-step backward extension of a measure"},
      {"vertex", "moments and measure at one vertex of a shift"}};
  for (const auto& [name, desc] : moment_cmds) {
    auto* sub = add_sub(moments, name, desc);
    sub->add_option("file", ma.file, "input JSON")->required();
    const std::string n = name;
    if (n == "of" || n == "vertex") sub->add_option("-n", ma.n, "largest moment index");
    if (n == "extend") sub->add_option("-k", ma.k, "extension length");
    if (n == "vertex") sub->add_option("--vertex", ma.vertex, "vertex or tail label")->required();
    sub->callback([&, n] { run = [&, n] { return cmd_moments(n, ma); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kStructural;
  }
  if (g.mode != "exact" && g.mode != "float") {
    std::cerr << "invalid SHIFTLAB_MODE '" << g.mode << "'\n";
    return kStructural;
  }

  Outcome result;
  try {
    result = run();
  } catch (const Error& e) {
    result = {to_json(e), exit_code(e.code())};
    std::cerr << "shiftlab: " << to_string(e.code()) << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    result = {Json{{"error", "InternalError"}, {"message", e.what()}}, kInternal};
    std::cerr << "shiftlab: " << e.what() << '\n';
  }

  const std::string text = result.body.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(g.out);
    if (!out) {
      std::cerr << "shiftlab: cannot write '" << g.out << "'\n";
      return kStructural;
    }
    out << text;
  }
  return result.code;
}
