#pragma once

// Seeded random inputs for property and acceptance tests.

#include <algorithm>
#include <complex>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <shiftlab/shiftlab.hpp>
#include <string>
#include <vector>

namespace gen {

using shiftlab::AtomicMeasure;
using shiftlab::DirectedForest;
using shiftlab::Rational;
using shiftlab::TailProfile;
using shiftlab::VertexId;
using shiftlab::WeightedShift;
using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline Rational frac(long p, long q) {
  Rational r{mpz_class(p), mpz_class(q)};
  r.canonicalize();
  return r;
}

inline Rational small_rational(Rng& rng, long max_num = 8, long max_den = 6) {
  return frac(static_cast<long>(uniform(rng, 1, max_num)), static_cast<long>(uniform(rng, 1, max_den)));
}

// n ids whose string order is unrelated to the tree structure.
inline std::vector<VertexId> shuffled_ids(Rng& rng, std::size_t n, const std::string& stem = "v") {
  std::vector<VertexId> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(stem + std::to_string(i));
  std::shuffle(ids.begin(), ids.end(), rng);
  return ids;
}

// Random forest: vertex i attaches to a uniformly chosen earlier vertex, or
// becomes a root with probability root_prob.
inline DirectedForest random_forest(Rng& rng, std::size_t n, double root_prob = 0.1) {
  auto ids = shuffled_ids(rng, n);
  std::map<VertexId, VertexId> parent;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || coin(rng, root_prob)) {
      parent[ids[i]] = ids[i];
    } else {
      parent[ids[i]] = ids[uniform(rng, 0, i - 1)];
    }
  }
  return DirectedForest::from_parent_map(ids, parent);
}

inline DirectedForest random_tree(Rng& rng, std::size_t n) { return random_forest(rng, n, 0.0); }

inline std::set<VertexId> childless(const DirectedForest& f) {
  std::set<VertexId> out;
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (f.degree(v) == 0) out.insert(f.id(v));
  }
  return out;
}

inline TailProfile random_tail(Rng& rng) {
  TailProfile t;
  const auto len = uniform(rng, 0, 3);
  for (std::size_t i = 0; i < len; ++i) t.prefix_sq.push_back(small_rational(rng));
  t.constant_sq = small_rational(rng);
  return t;
}

// Proper leafless shift with random weights; every childless vertex gets a
// random tail.
inline WeightedShift random_shift(Rng& rng, std::size_t n, double root_prob = 0.1) {
  auto f = random_forest(rng, n, root_prob);
  std::map<VertexId, Rational> sq;
  for (std::size_t v = 0; v < f.size(); ++v) {
    sq[f.id(v)] = f.is_root(v) ? Rational(0) : small_rational(rng);
  }
  std::map<VertexId, TailProfile> tails;
  for (const auto& id : childless(f)) tails[id] = random_tail(rng);
  return WeightedShift(f, sq, tails);
}

// Hyponormal shift on an n-arm star: squared weights are nondecreasing along
// every arm and the root's children satisfy sum sq_a / sq_next(a) <= 1.
inline WeightedShift random_hyponormal_star(Rng& rng, std::size_t arms) {
  std::map<VertexId, VertexId> parent{{"o", "o"}};
  std::map<VertexId, Rational> sq{{"o", Rational(0)}};
  std::map<VertexId, TailProfile> tails;
  std::vector<Rational> shares;
  Rational total = 0;
  for (std::size_t a = 0; a < arms; ++a) {
    shares.push_back(small_rational(rng, 4, 1));
    total += shares.back();
  }
  const Rational budget = coin(rng) ? Rational(1) : frac(static_cast<long>(uniform(rng, 1, 9)), 10);
  for (std::size_t a = 0; a < arms; ++a) {
    const auto len = uniform(rng, 1, 4);
    std::vector<Rational> w(len);
    w[0] = 0;  // set below
    Rational current = small_rational(rng, 3, 4);
    for (std::size_t i = 1; i < len; ++i) {
      current += coin(rng) ? Rational(0) : small_rational(rng, 2, 4);
      w[i] = current;
    }
    TailProfile tail;
    const auto plen = uniform(rng, 0, 2);
    for (std::size_t i = 0; i < plen; ++i) {
      current += coin(rng) ? Rational(0) : small_rational(rng, 2, 4);
      tail.prefix_sq.push_back(current);
    }
    current += coin(rng) ? Rational(0) : small_rational(rng, 2, 4);
    tail.constant_sq = current;
    // Weight following the first arm edge.
    const Rational next = len > 1 ? w[1] : (plen > 0 ? tail.prefix_sq[0] : tail.constant_sq);
    w[0] = budget * shares[a] / total * next;
    std::string prev = "o";
    for (std::size_t i = 0; i < len; ++i) {
      const std::string id = "a" + std::to_string(a) + "_" + std::to_string(i);
      parent[id] = prev;
      sq[id] = w[i];
      prev = id;
    }
    tails[prev] = tail;
  }
  return WeightedShift(DirectedForest::from_parent_map(parent), sq, tails);
}

// Random tree with a fork below the root; tails on every childless vertex.
inline DirectedForest random_fork_tree(Rng& rng, std::size_t max_n) {
  while (true) {
    auto f = random_tree(rng, uniform(rng, 4, max_n));
    auto cls = shiftlab::classify_forkless(f, childless(f));
    if (cls.kind == shiftlab::ForestClassification::Kind::NotForkless) return f;
  }
}

// Subnormal shift with its representing measures computed alongside, as
// maps t -> mass. Non-root vertices have zero defect; each root keeps
// defect 0 with probability tight_root.
struct SubnormalSample {
  WeightedShift shift;
  std::map<VertexId, std::map<Rational, Rational>> mu;
};

inline Rational inverse_moment(const std::map<Rational, Rational>& mu, unsigned k) {
  Rational total = 0;
  for (const auto& [t, w] : mu) total += w / shiftlab::pow(t, k);
  return total;
}

// Random positive rationals summing to `total`.
inline std::vector<Rational> random_split(Rng& rng, std::size_t n, const Rational& total) {
  std::vector<Rational> parts;
  Rational sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    parts.push_back(Rational(static_cast<long>(uniform(rng, 1, 5))));
    sum += parts.back();
  }
  for (auto& p : parts) p = p / sum * total;
  return parts;
}

inline SubnormalSample random_subnormal(Rng& rng, std::size_t n, double tight_root = 0.5,
                                        double root_prob = 0.1) {
  static const std::vector<Rational> constants{frac(1, 2), frac(1, 1), frac(3, 2),
                                               frac(2, 1), frac(3, 1), frac(4, 1)};
  auto f = random_forest(rng, n, root_prob);
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return f.depth(a) > f.depth(b); });

  std::map<VertexId, Rational> sq;
  std::map<VertexId, TailProfile> tails;
  SubnormalSample out{WeightedShift(DirectedForest::from_parent_map({{"x", "x"}}),
                                    {{"x", Rational(0)}}, {{"x", TailProfile{}}}),
                      {}};
  for (auto v : order) {
    const auto& id = f.id(v);
    if (f.is_root(v)) sq[id] = 0;
    std::map<Rational, Rational> mu;
    if (f.degree(v) == 0) {
      const Rational c = constants[uniform(rng, 0, constants.size() - 1)];
      TailProfile t;
      t.constant_sq = c;
      // A prefix of the constant itself is the only one keeping zero defect.
      t.prefix_sq.assign(uniform(rng, 0, 2), c);
      tails[id] = t;
      mu[c] = 1;
      if (f.is_root(v) && !coin(rng, tight_root)) {
        // Loose childless root: a first tail edge below the constant.
        const Rational shrink = frac(static_cast<long>(uniform(rng, 1, 3)), 4);
        tails[id].prefix_sq.insert(tails[id].prefix_sq.begin(), c * shrink);
        mu.clear();
        mu[c] = shrink;
        mu[Rational(0)] = 1 - shrink;
      }
    } else {
      const auto kids = f.children(v);
      Rational budget = 1;
      if (f.is_root(v) && !coin(rng, tight_root)) budget = frac(static_cast<long>(uniform(rng, 1, 9)), 10);
      const auto fractions = random_split(rng, kids.size(), budget);
      for (std::size_t i = 0; i < kids.size(); ++i) {
        const auto& cid = f.id(kids[i]);
        const Rational C = inverse_moment(out.mu.at(cid), 1);
        sq[cid] = fractions[i] / C;
        for (const auto& [t, w] : out.mu.at(cid)) mu[t] += sq[cid] * w / t;
      }
      if (budget < 1) mu[Rational(0)] += 1 - budget;
    }
    out.mu[id] = std::move(mu);
  }
  out.shift = WeightedShift(f, sq, tails);
  return out;
}

// Subnormal rooted tree whose root measure has no atom at 0, so that every
// k-step backward extension exists.
inline SubnormalSample random_extendable(Rng& rng, std::size_t n) {
  return random_subnormal(rng, n, 1.0, 0.0);
}

// Subnormal rooted tree with a positive defect at the root.
inline SubnormalSample random_defective(Rng& rng, std::size_t n) {
  return random_subnormal(rng, n, 0.0, 0.0);
}

// Rooted tree with every leaf at depth k and `frontier` leaves.
inline DirectedForest random_envelope(Rng& rng, std::size_t frontier, unsigned k,
                                      const std::string& stem = "e") {
  std::vector<std::size_t> level_size(k + 1);
  level_size[k] = frontier;
  if (k == 0) level_size[0] = 1;
  for (unsigned d = k; d-- > 1;) level_size[d] = uniform(rng, 1, level_size[d + 1]);
  level_size[0] = 1;
  std::map<VertexId, VertexId> parent;
  auto name = [&](unsigned d, std::size_t i) {
    return stem + std::to_string(d) + "_" + std::to_string(i);
  };
  parent[name(0, 0)] = name(0, 0);
  for (unsigned d = 1; d <= k; ++d) {
    // Surjection from level d onto level d-1.
    std::vector<std::size_t> up(level_size[d]);
    for (std::size_t i = 0; i < level_size[d]; ++i) {
      up[i] = i < level_size[d - 1] ? i : uniform(rng, 0, level_size[d - 1] - 1);
    }
    std::shuffle(up.begin(), up.end(), rng);
    for (std::size_t i = 0; i < level_size[d]; ++i) parent[name(d, i)] = name(d - 1, up[i]);
  }
  return DirectedForest::from_parent_map(parent);
}

// Random complex weights; a tenth of the edges get weight 0.
inline std::map<VertexId, std::complex<double>> random_complex_weights(Rng& rng,
                                                                       const DirectedForest& f) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::map<VertexId, std::complex<double>> out;
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (f.is_root(v) || coin(rng, 0.1)) continue;
    out[f.id(v)] = {u(rng), u(rng)};
  }
  return out;
}

// Gaussian rationals with rational modulus: r * (a + bi) / c for a
// Pythagorean triple (a, b, c), rotated by a power of i.
inline std::map<VertexId, shiftlab::GaussianRational> random_gaussian_weights(
    Rng& rng, const DirectedForest& f) {
  static const long triples[][3] = {{3, 4, 5}, {5, 12, 13}, {8, 15, 17}, {1, 0, 1}, {7, 24, 25}};
  std::map<VertexId, shiftlab::GaussianRational> out;
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (f.is_root(v) || coin(rng, 0.1)) continue;
    const auto& t = triples[uniform(rng, 0, 4)];
    const Rational r = small_rational(rng, 5, 3);
    shiftlab::GaussianRational z(r * frac(t[0], t[2]), r * frac(t[1], t[2]));
    for (std::size_t q = uniform(rng, 0, 3); q > 0; --q) z = z * shiftlab::GaussianRational(0, 1);
    out[f.id(v)] = z;
  }
  return out;
}

}  // namespace gen
