// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every randomized check is seeded and cross-checked against the
// brute-force oracles in support/.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <shiftlab/shiftlab.hpp>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "oracle.hpp"

using namespace shiftlab;
using gen::frac;

namespace {

class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (messages_.size() < 5) messages_.push_back(what);
  }
  void note(const std::string& text) { notes_ << (notes_.tellp() > 0 ? ", " : "") << text; }
  std::size_t failures() const { return failures_; }
  std::size_t checks() const { return checks_; }
  const std::vector<std::string>& messages() const { return messages_; }
  std::string notes() const { return notes_.str(); }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::vector<std::string> messages_;
  std::ostringstream notes_;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds, 0 for none
  std::function<void(Tally&)> body;
};

std::string str(const Rational& x) { return to_string(x); }

// Counterexample exactness on the minimal fork tree and with a sibling arm.
void counterexample_exactness(Tally& t) {
  auto minimal = DirectedForest::from_parent_map({{"v0", "v0"}, {"v1", "v0"}, {"v2", "v1"}, {"c2", "v1"}});
  auto ce = make_counterexample(minimal, {"v2", "c2"});
  t.check(ce.beta == 0, "beta on the minimal tree is " + str(ce.beta));
  auto flat = oracle::materialize(ce.shift, 12);
  auto r1 = check_hyponormal_power<Rational>(ce.shift, 1);
  t.check(r1.holds(), "S is not hyponormal");
  for (const auto& v : r1.values) {
    t.check(v.value <= 1, "hip_1(" + v.label + ") = " + str(v.value));
    t.check(v.value == oracle::hip(flat, flat.at(v.label), 1), "hip_1 oracle mismatch at " + v.label);
  }
  t.check(hip_k(ce.shift, "v0", 1) == 1, "hip_1(v0) != 1");
  t.check(hip_k(ce.shift, "v1", 1) == 1, "hip_1(v1) != 1");
  const auto h2 = hip_k(ce.shift, "v0", 2);
  t.check(h2 == frac(10, 9), "hip_2(v0) = " + str(h2));
  t.check(oracle::hip(flat, flat.at("v0"), 2) == frac(10, 9), "oracle hip_2(v0) != 10/9");
  const double f2 = hip_k<double>(ce.shift, ce.shift.node("v0"), 2);
  t.check(std::abs(f2 - 10.0 / 9.0) <= 1e-12, "float hip_2(v0) off by more than 1e-12");
  auto r2 = check_hyponormal_power<Rational>(ce.shift, 2);
  t.check(!r2.holds() && r2.witness == "v0", "S^2 verdict or witness wrong");

  auto sibling = DirectedForest::from_parent_map(
      {{"v0", "v0"}, {"v1", "v0"}, {"s", "v0"}, {"v2", "v1"}, {"c2", "v1"}});
  auto ce2 = make_counterexample(sibling, {"v2", "c2", "s"});
  t.check(ce2.beta == frac(1, 2), "beta with a sibling is " + str(ce2.beta));
  t.check(check_hyponormal_power<Rational>(ce2.shift, 1).holds(), "sibling case not hyponormal");
  const auto s2 = hip_k(ce2.shift, "v0", 2);
  t.check(s2 == frac(19, 18), "sibling hip_2(v0) = " + str(s2));
  auto flat2 = oracle::materialize(ce2.shift, 12);
  t.check(oracle::hip(flat2, flat2.at("v0"), 2) == frac(19, 18), "oracle sibling hip_2(v0) != 19/18");
  t.note("hip_2(v0) = " + str(h2) + " and " + str(s2));
}

// hip_k <= 1 iff the restricted form is PSD, at every checked position.
void hip_vs_psd(Tally& t) {
  gen::Rng rng(1002);
  std::size_t above = 0, below = 0, boundary = 0, positions = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = gen::uniform(rng, 1, 25);
    WeightedShift s = trial % 10 == 0 ? [&] {
      auto tree = gen::random_tree(rng, n);
      return make_isometric(tree, gen::childless(tree));
    }()
                                      : gen::random_shift(rng, n, 0.05);
    const bool with_charpoly = trial % 5 == 0;
    const auto flat = with_charpoly ? oracle::materialize(s, 20) : oracle::Flat{};
    for (unsigned k = 1; k <= 4; ++k) {
      for (const auto& x : checked_positions(s, k)) {
        const auto h = hip_k<Rational>(s, x, k);
        const bool psd = psd_oracle(s, x, k);
        ++positions;
        (h > 1 ? above : h == 1 ? boundary : below)++;
        t.check((h <= 1) == psd, "trial " + std::to_string(trial) + " k=" + std::to_string(k) +
                                     " at " + s.label(x) + ": hip=" + str(h));
        if (with_charpoly) {
          const auto form = oracle::hypo_form(flat, flat.at(s.label(x)), k);
          t.check(oracle::psd(form) == psd, "charpoly disagrees at " + s.label(x));
        }
      }
    }
  }
  t.note(std::to_string(positions) + " positions: " + std::to_string(below) + " below 1, " +
         std::to_string(boundary) + " equal, " + std::to_string(above) + " above");
}

// (i) hyponormal stars pass every power; (ii) counterexamples on random
// non-forkless trees pass k = 1 and fail k = 2.
void forkless_dichotomy(Tally& t) {
  gen::Rng rng(1003);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = gen::random_hyponormal_star(rng, gen::uniform(rng, 1, 6));
    t.check(is_forkless(s), "star not recognised as forkless");
    auto flat = oracle::materialize(s, 20);
    for (unsigned k = 1; k <= 6; ++k) {
      auto r = check_hyponormal_power<Rational>(s, k);
      t.check(r.holds(), "star trial " + std::to_string(trial) + " fails at k=" + std::to_string(k));
      t.check(oracle::hip(flat, flat.at("o"), k) <= 1, "oracle hip_k(o) > 1");
    }
  }
  for (int trial = 0; trial < 100; ++trial) {
    auto tree = gen::random_fork_tree(rng, 20);
    auto ce = make_counterexample(tree, gen::childless(tree));
    auto flat = oracle::materialize(ce.shift, 12);
    auto r1 = check_hyponormal_power<Rational>(ce.shift, 1);
    t.check(r1.holds(), "counterexample trial " + std::to_string(trial) + " fails at k=1");
    for (const auto& v : r1.values) {
      t.check(oracle::hip(flat, flat.at(v.label), 1) <= 1, "oracle hip_1 > 1 at " + v.label);
    }
    auto r2 = check_hyponormal_power<Rational>(ce.shift, 2);
    const auto h = oracle::hip(flat, flat.at(ce.v0), 2);
    t.check(!r2.holds() && h > 1, "counterexample trial " + std::to_string(trial) + " passes k=2");
    t.check(h == ce.expected_hip2, "hip_2(v0) = " + str(h) + " expected " + str(ce.expected_hip2));
  }
}

// Verdict-Subnormal shifts: measures reproduce moments, powers are hyponormal.
void subnormal_soundness(Tally& t) {
  gen::Rng rng(1004);
  for (int trial = 0; trial < 200; ++trial) {
    const double tight = 0.2 + 0.2 * static_cast<double>(trial % 5);
    auto sample = gen::random_subnormal(rng, gen::uniform(rng, 1, 14), tight, 0.15);
    const auto& s = sample.shift;
    auto cert = check_subnormal(s);
    t.check(cert.holds(), "generated subnormal shift rejected (trial " + std::to_string(trial) + ")");
    if (!cert.holds()) continue;
    auto flat = oracle::materialize(s, 14);
    for (std::size_t v = 0; v < s.forest().size(); ++v) {
      const auto& id = s.forest().id(v);
      const auto& mu = cert.table.core(v).mu;
      Rational mass = 0;
      for (const auto& [x, w] : sample.mu.at(id)) mass += w;
      t.check(mu.total_mass() == 1 && mass == 1, "measure mass at " + id);
      for (unsigned n = 0; n <= 12; ++n) {
        t.check(mu.moment(n) == oracle::moment(flat, flat.at(id), n),
                "moment mismatch at " + id + " n=" + std::to_string(n));
      }
    }
    auto report = check_power_hyponormal<Rational>(s, 5);
    t.check(report.holds(), "subnormal shift not power hyponormal (trial " + std::to_string(trial) + ")");
  }
}

// k-step backward extensions re-certify and match the extended moments.
void extension_round_trips(Tally& t) {
  gen::Rng rng(1005);
  for (int trial = 0; trial < 100; ++trial) {
    auto sample = gen::random_extendable(rng, gen::uniform(rng, 1, 12));
    const auto& s = sample.shift;
    const unsigned k = static_cast<unsigned>(1 + trial % 4);
    const auto& mu = sample.mu.at(tree_root(s.forest()));
    const Rational C0 = gen::inverse_moment(mu, k);
    auto ext = construct_backward_extension(s, k);
    t.check(ext.plan.C0 == C0 && ext.plan.C == 1 / C0, "C0 differs from the test-side measure");
    t.check(check_subnormal(ext.shift).holds(), "extension not subnormal (trial " + std::to_string(trial) + ")");
    auto flat = oracle::materialize(ext.shift, 2 * k + 2);
    const int top = flat.at(ext.plan.chain_ids.back());
    for (unsigned j = 0; j <= k; ++j) {
      // a_{j-k}: 1 at j = 0, else C * int t^(j-k) dmu.
      const Rational expected = j == 0 ? Rational(1) : gen::inverse_moment(mu, k - j) / C0;
      t.check(oracle::moment(flat, top, j) == expected,
              "||S'^" + std::to_string(j) + " e|| mismatch at k=" + std::to_string(k));
      t.check(ext.prefix[j] == expected, "prefix entry mismatch");
    }
    t.check(restrict_shift(ext.shift, tree_root(s.forest())) == s, "restriction differs from input");
  }
}

std::vector<gen::SubnormalSample> family(gen::Rng& rng, std::size_t m, const std::string& stem,
                                         std::size_t bad = SIZE_MAX) {
  std::vector<gen::SubnormalSample> out;
  for (std::size_t j = 0; j < m; ++j) {
    auto sample = j == bad ? gen::random_defective(rng, gen::uniform(rng, 1, 8))
                           : gen::random_extendable(rng, gen::uniform(rng, 1, 8));
    // Rename so members never collide.
    std::map<VertexId, VertexId> parent;
    std::map<VertexId, Rational> sq;
    std::map<VertexId, TailProfile> tails;
    const auto p = "m" + stem + std::to_string(j) + "_";
    for (const auto& [v, u] : sample.shift.forest().parent_map()) parent[p + v] = p + u;
    for (const auto& [v, w] : sample.shift.sq_map()) sq[p + v] = w;
    for (const auto& [v, tp] : sample.shift.tails()) tails[p + v] = tp;
    std::map<VertexId, std::map<Rational, Rational>> mu;
    for (auto& [v, m2] : sample.mu) mu[p + v] = m2;
    out.push_back({WeightedShift(DirectedForest::from_parent_map(parent), sq, tails), std::move(mu)});
  }
  return out;
}

std::vector<WeightedShift> shifts_of(const std::vector<gen::SubnormalSample>& fam) {
  std::vector<WeightedShift> out;
  for (const auto& s : fam) out.push_back(s.shift);
  return out;
}

// Rooted sums: sum a_j C_j = 1, subnormal, k-step feasible; infeasible
// members are reported by index.
void rooted_sum_exactness(Tally& t) {
  gen::Rng rng(1006);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = gen::uniform(rng, 1, 4);
    const unsigned k = static_cast<unsigned>(trial % 4);
    auto fam = family(rng, m, std::to_string(trial));
    auto members = shifts_of(fam);
    auto r = rooted_sum_extend(members, k);
    Rational total = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const auto& mu = fam[j].mu.at(tree_root(members[j].forest()));
      total += r.theta_sq[j] * gen::inverse_moment(mu, 1);
    }
    t.check(total == 1, "sum a_j C_j = " + str(total));
    auto cert = check_subnormal(r.shift);
    t.check(cert.holds(), "joint shift not subnormal");
    // k-step feasibility: the root measure has no atom at 0.
    const auto& root_mu = cert.table.at(r.shift.node(r.root)).mu;
    t.check(!root_mu.has_atom_at_zero(), "joint root measure has an atom at 0");
    t.check(backward_extension_feasible(r.shift, k).has_value(), "joint shift not k-step feasible");

    const std::size_t bad = gen::uniform(rng, 0, m - 1);
    auto bad_fam = shifts_of(family(rng, m, std::to_string(trial) + "b", bad));
    try {
      rooted_sum_extend(bad_fam, k);
      t.check(false, "infeasible family accepted");
    } catch (const Error& e) {
      t.check(e.code() == ErrorCode::MemberInfeasible &&
                  e.witness() == std::vector<std::string>{std::to_string(bad)},
              "wrong report for infeasible member " + std::to_string(bad));
    }
  }
}

// Depth-k joins: verdicts agree across non-isomorphic envelopes.
void envelope_independence(Tally& t) {
  gen::Rng rng(1007);
  std::size_t feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const unsigned k = static_cast<unsigned>(2 + trial % 2);
    const std::size_t m = gen::uniform(rng, 2, 4);
    const bool want_bad = trial % 3 == 2;
    const std::size_t bad = want_bad ? gen::uniform(rng, 0, m - 1) : SIZE_MAX;
    auto members = shifts_of(family(rng, m, std::to_string(trial), bad));
    auto e1 = gen::random_envelope(rng, m, k, "e");
    auto e2 = gen::random_envelope(rng, m, k, "e");
    for (int attempt = 0; attempt < 200 && is_isomorphic(e1, e2); ++attempt) {
      e2 = gen::random_envelope(rng, m, k, "e");
    }
    t.check(!is_isomorphic(e1, e2), "no non-isomorphic envelope pair found");
    auto verdict = [&](const DirectedForest& env) -> std::string {
      try {
        auto j = join_at_depth(members, env, k);
        return check_subnormal(j.shift).holds() ? "Subnormal" : "NotSubnormal";
      } catch (const Error& e) {
        return std::string(to_string(e.code())) + (e.witness().empty() ? "" : ":" + e.witness()[0]);
      }
    };
    const auto v1 = verdict(e1);
    const auto v2 = verdict(e2);
    t.check(v1 == v2, "envelopes disagree: " + v1 + " vs " + v2);
    const std::string expected = want_bad ? "MemberInfeasible:" + std::to_string(bad) : "Subnormal";
    t.check(v1 == expected, "verdict " + v1 + " expected " + expected);
    (v1 == "Subnormal" ? feasible : infeasible)++;
  }
  t.note(std::to_string(feasible) + " feasible and " + std::to_string(infeasible) +
         " infeasible families");
}

// Forest algebra laws on random forests.
void forest_laws(Tally& t) {
  gen::Rng rng(1008);
  for (int trial = 0; trial < 1000; ++trial) {
    auto f = gen::random_forest(rng, gen::uniform(rng, 1, 40), 0.08);
    t.check(power_k(f, 1) == f, "f^1 != f");
    for (unsigned k = 1; k <= 3; ++k) {
      const auto fk = power_k(f, k);
      for (unsigned l = 1; l <= 3; ++l) {
        t.check(power_k(fk, l) == power_k(f, k * l), "(f^k)^l != f^(kl)");
      }
      // Roots of f^k: chi_j of the roots for j < k.
      std::vector<VertexId> expected;
      for (const auto& r : roots(f)) {
        for (unsigned j = 0; j < k; ++j) {
          for (const auto& u : chi_k(f, r, j)) expected.push_back(u);
        }
      }
      std::sort(expected.begin(), expected.end());
      t.check(roots(fk) == expected, "roots(f^k) formula");
      // Component bound, one tree at a time.
      for (const auto& tree : components(f)) {
        std::size_t n = 0;
        for (std::size_t v = 0; v < tree.size(); ++v) n = std::max(n, tree.degree(v));
        std::size_t bound = k;
        if (n >= 2) {
          bound = 1;
          for (unsigned j = 1; j < k; ++j) bound = bound * n + 1;
        }
        t.check(components(power_k(tree, k)).size() <= bound, "component bound");
      }
    }
    // chi recursion and disjointness.
    for (unsigned k = 1; k <= 3; ++k) {
      std::set<VertexId> seen;
      for (const auto& v : f.vertices()) {
        const auto chi = chi_k(f, v, k);
        std::vector<VertexId> rec;
        for (const auto& c : children(f, v)) {
          for (const auto& u : chi_k(f, c, k - 1)) rec.push_back(u);
        }
        std::sort(rec.begin(), rec.end());
        t.check(chi == rec, "chi recursion at " + v);
        for (const auto& u : chi) t.check(seen.insert(u).second, "chi_k overlap at " + u);
      }
    }
  }
}

// Gauge: U S U* = S_|lambda| on dense matrices.
void gauge_correctness(Tally& t) {
  gen::Rng rng(1009);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto f = gen::random_forest(rng, gen::uniform(rng, 1, 15), 0.1);
    auto lambda = gen::random_complex_weights(rng, f);
    auto beta = phase_gauge(f, lambda);
    const auto s = oracle::dense_shift(f, lambda);
    for (std::size_t i = 0; i < f.size(); ++i) {
      t.check(std::abs(std::abs(beta.at(f.id(i))) - 1.0) <= 1e-14, "|beta| != 1");
      for (std::size_t j = 0; j < f.size(); ++j) {
        const auto entry = beta.at(f.id(i)) * s[i][j] * std::conj(beta.at(f.id(j)));
        const double target = std::abs(s[i][j]);
        const double err = std::abs(entry - std::complex<double>(target, 0));
        worst = std::max(worst, err);
        t.check(err <= 1e-12, "float conjugation error " + std::to_string(err));
      }
    }

    auto exact = gen::random_gaussian_weights(rng, f);
    auto gbeta = phase_gauge(f, exact);
    const auto gs = oracle::dense_shift(f, exact);
    for (std::size_t i = 0; i < f.size(); ++i) {
      t.check(gbeta.at(f.id(i)).norm_sq() == 1, "exact |beta| != 1");
      for (std::size_t j = 0; j < f.size(); ++j) {
        const auto entry = gbeta.at(f.id(i)) * gs[i][j] * gbeta.at(f.id(j)).conj();
        // |z| for z = r (a + bi) / c with a^2 + b^2 = c^2 is the square root
        // of norm_sq; check entry^2 = norm_sq with a nonnegative real entry.
        t.check(entry.im == 0 && entry.re >= 0 && entry.re * entry.re == gs[i][j].norm_sq(),
                "exact conjugation mismatch");
      }
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max float error %.2e", worst);
  t.note(buf);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "counterexample exactness (10/9, 19/18)", 1.0, counterexample_exactness},
      {2, "hip_k <= 1 iff PSD on 500 random shifts, k <= 4", 60.0, hip_vs_psd},
      {3, "forkless dichotomy: stars pass k <= 6, counterexamples fail k = 2", 0.0, forkless_dichotomy},
      {4, "subnormal soundness on 200 shifts (moments n <= 12, powers k <= 5)", 0.0, subnormal_soundness},
      {5, "backward extension round trips, k <= 4", 0.0, extension_round_trips},
      {6, "rooted-sum extension exactness and infeasibility", 0.0, rooted_sum_exactness},
      {7, "depth-k join verdicts agree across envelopes", 0.0, envelope_independence},
      {8, "forest algebra laws on 1000 forests", 30.0, forest_laws},
      {9, "phase gauge conjugation, float and exact", 0.0, gauge_correctness},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Tally t;
    const auto start = std::chrono::steady_clock::now();
    std::string crash;
    try {
      c.body(t);
    } catch (const std::exception& e) {
      crash = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool slow = c.time_limit > 0 && secs > c.time_limit;
    const bool ok = t.failures() == 0 && crash.empty() && !slow;
    failed += ok ? 0 : 1;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " ["
              << t.checks() << " checks, " << t.failures() << " failures, " << timing;
    if (!t.notes().empty()) std::cout << "; " << t.notes();
    std::cout << "]\n";
    if (!crash.empty()) std::cout << "    exception: " << crash << "\n";
    if (slow) std::cout << "    exceeded " << c.time_limit << "s\n";
    for (const auto& m : t.messages()) std::cout << "    " << m << "\n";
  }
  return failed == 0 ? 0 : 1;
}
