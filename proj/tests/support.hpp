#pragma once

// Shared fixtures and independent reference computations for the tests.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "qexp/expcheck.hpp"
#include "qexp/qcat.hpp"
#include "qexp/quantaloid.hpp"

namespace qtest {

using namespace qexp;

/// Preorder over the boolean quantale from generating pairs (lo, hi),
/// meaning lo <= hi, closed reflexively and transitively.
inline CategoryPtr preorder(const QuantaloidPtr& q, int n,
                            const std::vector<std::pair<int, int>>& pairs,
                            const std::string& prefix = "a") {
  std::vector<int> rel(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) rel[i * n + i] = 1;
  for (auto [lo, hi] : pairs) rel[hi * n + lo] = 1;  // hom(hi, lo)
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rel[i * n + k] && rel[k * n + j]) rel[i * n + j] = 1;
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return make_category(q, names, std::vector<int>(n, 0), rel);
}

inline CategoryPtr chain(const QuantaloidPtr& q, int n,
                         const std::string& prefix = "a") {
  std::vector<std::pair<int, int>> p;
  for (int i = 0; i + 1 < n; ++i) p.emplace_back(i, i + 1);
  return preorder(q, n, p, prefix);
}

/// The 2-chain a0 <= a2 into the 3-chain b0 <= b1 <= b2, missing b1.
inline QFunctor f_skip(const QuantaloidPtr& q) {
  auto a = make_category(q, std::vector<std::string>{"a0", "a2"},
                         std::vector<int>{0, 0}, std::vector<Elem>{1, 0, 1, 1});
  return {a, chain(q, 3, "b"), {0, 2}};
}

/// Least upper bound by scanning all upper bounds.
inline Elem scan_join(const FiniteLattice& l, const std::vector<Elem>& s) {
  std::vector<Elem> ub;
  for (Elem u = 0; u < l.size(); ++u) {
    if (std::all_of(s.begin(), s.end(), [&](Elem x) { return l.leq(x, u); }))
      ub.push_back(u);
  }
  for (Elem u : ub) {
    if (std::all_of(ub.begin(), ub.end(), [&](Elem v) { return l.leq(u, v); }))
      return u;
  }
  return -1;
}

inline Elem scan_meet(const FiniteLattice& l, const std::vector<Elem>& s) {
  std::vector<Elem> lb;
  for (Elem u = 0; u < l.size(); ++u) {
    if (std::all_of(s.begin(), s.end(), [&](Elem x) { return l.leq(u, x); }))
      lb.push_back(u);
  }
  for (Elem u : lb) {
    if (std::all_of(lb.begin(), lb.end(), [&](Elem v) { return l.leq(v, u); }))
      return u;
  }
  return -1;
}

/// Smallest category whose homs lie above the given entries: add units and
/// close under composition.
inline CategoryPtr close_to_category(const QuantaloidPtr& q,
                                     const std::vector<int>& types,
                                     std::vector<Elem> hom,
                                     const std::string& prefix = "a") {
  const int n = static_cast<int>(types.size());
  for (int x = 0; x < n; ++x) {
    const auto& l = q->hom(types[x], types[x]);
    hom[x * n + x] = l.join(hom[x * n + x], q->unit(types[x]));
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          const auto& l = q->hom(types[x], types[z]);
          Elem c = q->compose(types[x], types[y], types[z], hom[z * n + y],
                              hom[y * n + x]);
          Elem j = l.join(hom[z * n + x], c);
          if (j != hom[z * n + x]) {
            hom[z * n + x] = j;
            changed = true;
          }
        }
  }
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return make_category(q, names, types, std::move(hom));
}

/// Random category with `n` objects; entries drawn uniformly, each kept with
/// probability `density`, then closed.
inline CategoryPtr random_category(const QuantaloidPtr& q, int n,
                                   std::mt19937& rng, double density = 0.4,
                                   const std::string& prefix = "a") {
  std::uniform_int_distribution<int> ty(0, q->num_objects() - 1);
  std::bernoulli_distribution keep(density);
  std::vector<int> types(n);
  for (auto& t : types) t = ty(rng);
  std::vector<Elem> hom(static_cast<std::size_t>(n) * n);
  for (int to = 0; to < n; ++to)
    for (int from = 0; from < n; ++from) {
      const auto& l = q->hom(types[from], types[to]);
      std::uniform_int_distribution<int> e(0, l.size() - 1);
      hom[to * n + from] = keep(rng) ? e(rng) : l.bottom();
    }
  return close_to_category(q, types, std::move(hom), prefix);
}

/// Random functor into `b`: objects land on random targets and the domain
/// homs are random entries below B(Fa', Fa), closed.
inline QFunctor random_functor_into(const CategoryPtr& b, int n,
                                    std::mt19937& rng, double density = 0.5) {
  const auto& q = b->base_ptr();
  std::uniform_int_distribution<int> pick(0, b->size() - 1);
  std::bernoulli_distribution keep(density);
  std::vector<int> map(n), types(n);
  for (int i = 0; i < n; ++i) {
    map[i] = pick(rng);
    types[i] = b->type(map[i]);
  }
  std::vector<Elem> hom(static_cast<std::size_t>(n) * n);
  for (int to = 0; to < n; ++to)
    for (int from = 0; from < n; ++from) {
      const auto& l = q->hom(types[from], types[to]);
      std::uniform_int_distribution<int> e(0, l.size() - 1);
      Elem x = keep(rng) ? e(rng) : l.bottom();
      hom[to * n + from] = l.meet(x, b->hom(map[to], map[from]));
    }
  auto a = close_to_category(q, types, std::move(hom));
  return {a, b, map};
}

/// Random distributor X -|-> Y as the closure of a random matrix.
inline QDistributor random_distributor(const CategoryPtr& x,
                                       const CategoryPtr& y,
                                       std::mt19937& rng,
                                       double density = 0.5) {
  const auto& q = x->base_ptr();
  std::bernoulli_distribution keep(density);
  QMatrix m = zero_matrix(q, y->types(), x->types());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      const auto& l = m.lattice(r, c);
      std::uniform_int_distribution<int> e(0, l.size() - 1);
      m.at(r, c) = keep(rng) ? e(rng) : l.bottom();
    }
  return distributor_closure(x, y, m);
}

/// Every lattice on n elements up to isomorphism (with repetitions): orders
/// in which 0 is bottom, n-1 is top and i <= j implies i <= j numerically.
inline std::vector<FiniteLattice> labeled_lattices(int n) {
  std::vector<std::pair<int, int>> mid;
  for (int i = 1; i < n - 1; ++i)
    for (int j = i + 1; j < n - 1; ++j) mid.emplace_back(i, j);
  std::vector<FiniteLattice> out;
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
  for (unsigned mask = 0; mask < (1u << mid.size()); ++mask) {
    std::vector<std::pair<int, int>> leq;
    for (int i = 0; i < n; ++i) {
      leq.emplace_back(i, i);
      if (i != 0) leq.emplace_back(0, i);
      if (i != n - 1 && i != 0) leq.emplace_back(i, n - 1);
    }
    for (std::size_t k = 0; k < mid.size(); ++k)
      if (mask & (1u << k)) leq.push_back(mid[k]);
    try {
      out.emplace_back(names, leq);
    } catch (const MalformedInput&) {
    }
  }
  return out;
}

/// A small assortment of quantaloids used by randomized tests; each hom has
/// at most 8 elements.
inline std::vector<std::pair<std::string, QuantaloidPtr>> small_bases() {
  Graph g{{"X", "Y", "Z"}, {{0, 1}, {1, 2}}};
  return {{"boolean", boolean_quantale()},
          {"chain2", chain_quantale(2)},
          {"chain4", chain_quantale(4)},
          {"powerset-c2", powerset_monoid_quantale(Monoid::cyclic(2))},
          {"powerset-c3", powerset_monoid_quantale(Monoid::cyclic(3))},
          {"free-path", free_quantaloid_on_graph(g)},
          {"endo-chain3", endo_quantale(FiniteLattice::chain(3))}};
}

}  // namespace qtest
