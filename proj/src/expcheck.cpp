#include "qexp/expcheck.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "qexp/parallel.hpp"

namespace qexp {

FiberedFunctor::FiberedFunctor(QFunctor f) : f_(std::move(f)) {
  if (auto r = verify_functor(f_); !r.empty()) {
    throw MalformedInput("not a functor: " + r.front().detail);
  }
  const auto& a = dom();
  const auto& b = cod();
  const auto& q = base();
  const int na = a.size(), nb = b.size();
  for (int y = 0; y < nb; ++y) fibers_.push_back(qexp::fiber(f_, y));
  downsets_.reserve(static_cast<std::size_t>(nb) * nb);
  for (int to = 0; to < nb; ++to) {
    for (int from = 0; from < nb; ++from) {
      downsets_.push_back(
          qexp::downset_lattice(b.hom_lattice(to, from), b.hom(to, from)));
    }
  }
  pair_adjoints_.resize(static_cast<std::size_t>(na) * na);
  for (int ap = 0; ap < na; ++ap) {
    for (int x = 0; x < na; ++x) {
      auto m = pair_meet_map(*this, ap, x);
      if (is_sup_preserving(m)) pair_adjoints_[ap * na + x] = right_adjoint_of(m);
    }
  }
  hat_failures_.resize(static_cast<std::size_t>(nb) * nb);
  for (int bp = 0; bp < nb; ++bp) {
    for (int bb = 0; bb < nb; ++bb) {
      const auto& ds = downset(bp, bb);
      const auto& lat = q.hom(b.type(bb), b.type(bp));
      const auto& fb = fibers_[bb].members;
      const auto& fbp = fibers_[bp].members;
      std::optional<SupWitness> w;
      for (int x : fb) {
        for (int xp : fbp) {
          if (lat.meet(lat.bottom(), a.hom(xp, x)) != lat.bottom()) {
            w = SupWitness{true, -1, -1};
          }
        }
      }
      for (std::size_t i = 0; i < ds.size() && !w; ++i) {
        for (std::size_t j = i + 1; j < ds.size() && !w; ++j) {
          const Elem fj = lat.join(ds[i], ds[j]);
          for (int x : fb) {
            for (int xp : fbp) {
              const Elem h = a.hom(xp, x);
              if (lat.meet(fj, h) !=
                  lat.join(lat.meet(ds[i], h), lat.meet(ds[j], h))) {
                w = SupWitness{false, ds[i], ds[j]};
              }
            }
          }
        }
      }
      hat_failures_[bp * nb + bb] = w;
    }
  }
}

MonotoneMap pair_meet_map(const FiberedFunctor& f, int a_prime, int a) {
  const auto& dom = f.dom();
  const auto& fm = f.functor().map;
  const auto& ds = f.downset_lattice(fm[a_prime], fm[a]);
  const auto& lat = dom.hom_lattice(a_prime, a);
  const Elem h = dom.hom(a_prime, a);
  std::vector<Elem> table(ds.embed.size());
  for (std::size_t i = 0; i < ds.embed.size(); ++i) {
    table[i] = lat.meet(ds.embed[i], h);
  }
  return MonotoneMap(ds.lattice,
                     dom.base().hom_ptr(dom.type(a), dom.type(a_prime)),
                     std::move(table));
}

bool hat_is_sup_preserving(const FiberedFunctor& f, int b_prime, int b) {
  return !f.hat_failure(b_prime, b).has_value();
}

// --- condition kernels ----------------------------------------------------

namespace {

void condition_one_at(const FiberedFunctor& f, int x, int xp,
                      std::vector<Cond1Witness>& out) {
  const auto& a = f.dom();
  const auto& fm = f.functor().map;
  const auto& ds = f.downset(fm[xp], fm[x]);
  const auto& lat = a.hom_lattice(xp, x);
  const Elem h = a.hom(xp, x);
  if (lat.meet(lat.bottom(), h) != lat.bottom()) {
    out.push_back({x, xp, lat.bottom(), lat.bottom(), lat.meet(lat.bottom(), h),
                   lat.bottom(), true});
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = i + 1; j < ds.size(); ++j) {
      const Elem lhs = lat.meet(lat.join(ds[i], ds[j]), h);
      const Elem rhs = lat.join(lat.meet(ds[i], h), lat.meet(ds[j], h));
      if (lhs != rhs) out.push_back({x, xp, ds[i], ds[j], lhs, rhs, false});
    }
  }
}

void condition_two_at(const FiberedFunctor& f, int x, int xpp,
                      std::vector<Cond2Witness>& out) {
  const auto& a = f.dom();
  const auto& b = f.cod();
  const auto& q = f.base();
  const auto& fm = f.functor().map;
  const int ta = a.type(x), tapp = a.type(xpp);
  const auto& lat = q.hom(ta, tapp);
  const Elem hom = a.hom(xpp, x);
  for (int bp = 0; bp < b.size(); ++bp) {
    const int tbp = b.type(bp);
    const auto& lat_f = q.hom(ta, tbp);
    const auto& lat_g = q.hom(tbp, tapp);
    const auto& members = f.fiber(bp).members;
    for (Elem fe : f.downset(bp, fm[x])) {
      for (Elem ge : f.downset(fm[xpp], bp)) {
        const Elem lhs = lat.meet(q.compose(ta, tbp, tapp, ge, fe), hom);
        Elem rhs = lat.bottom();
        for (int xp : members) {
          rhs = lat.join(rhs, q.compose(ta, tbp, tapp,
                                        lat_g.meet(ge, a.hom(xpp, xp)),
                                        lat_f.meet(fe, a.hom(xp, x))));
        }
        if (lhs != rhs) out.push_back({x, xpp, bp, fe, ge, lhs, rhs});
      }
    }
  }
}

ConditionReport finish_one(std::vector<Cond1Witness> w) {
  ConditionReport r;
  r.checked_one = true;
  r.condition_one = std::move(w);
  r.verdict = r.condition_one.empty();
  return r;
}

ConditionReport finish_two(std::vector<Cond2Witness> w) {
  ConditionReport r;
  r.checked_two = true;
  r.condition_two = std::move(w);
  r.verdict = r.condition_two.empty();
  return r;
}

}  // namespace

ConditionReport check_condition_one(const FiberedFunctor& f) {
  const int n = f.dom().size();
  auto parts = parallel_collect<Cond1Witness>(
      static_cast<std::size_t>(n) * n, [&](std::size_t p, auto& out) {
        condition_one_at(f, static_cast<int>(p / n), static_cast<int>(p % n),
                         out);
      });
  return finish_one(std::move(parts));
}

ConditionReport check_condition_two(const FiberedFunctor& f) {
  const int n = f.dom().size();
  auto parts = parallel_collect<Cond2Witness>(
      static_cast<std::size_t>(n) * n, [&](std::size_t p, auto& out) {
        condition_two_at(f, static_cast<int>(p / n), static_cast<int>(p % n),
                         out);
      });
  return finish_two(std::move(parts));
}

namespace serial {

ConditionReport check_condition_one(const FiberedFunctor& f) {
  std::vector<Cond1Witness> out;
  const int n = f.dom().size();
  for (int x = 0; x < n; ++x) {
    for (int xp = 0; xp < n; ++xp) condition_one_at(f, x, xp, out);
  }
  return finish_one(std::move(out));
}

ConditionReport check_condition_two(const FiberedFunctor& f) {
  std::vector<Cond2Witness> out;
  const int n = f.dom().size();
  for (int x = 0; x < n; ++x) {
    for (int xpp = 0; xpp < n; ++xpp) condition_two_at(f, x, xpp, out);
  }
  return finish_two(std::move(out));
}

}  // namespace serial

ConditionReport check_condition_one(const QFunctor& f) {
  return check_condition_one(FiberedFunctor(f));
}

ConditionReport check_condition_two(const QFunctor& f) {
  return check_condition_two(FiberedFunctor(f));
}

ConditionReport is_exponentiable(const FiberedFunctor& f) {
  auto one = check_condition_one(f);
  auto two = check_condition_two(f);
  ConditionReport r;
  r.checked_one = r.checked_two = true;
  r.condition_one = std::move(one.condition_one);
  r.condition_two = std::move(two.condition_two);
  r.verdict = r.condition_one.empty() && r.condition_two.empty();
  return r;
}

ConditionReport is_exponentiable(const QFunctor& f) {
  return is_exponentiable(FiberedFunctor(f));
}

// --- hat and sharp ----------------------------------------------------------

namespace {

void check_shape(const FiberedFunctor& f, int b, int b_prime,
                 const QMatrix& m) {
  if (m.rows() != static_cast<int>(f.fiber(b_prime).members.size()) ||
      m.cols() != static_cast<int>(f.fiber(b).members.size())) {
    throw MalformedInput("matrix shape does not match the fibers");
  }
}

}  // namespace

QMatrix hat_matrix(const FiberedFunctor& f, int b, int b_prime, Elem fe) {
  const auto& bc = f.cod();
  const auto& lat = bc.hom_lattice(b_prime, b);
  if (!lat.contains(fe) || !lat.leq(fe, bc.hom(b_prime, b))) {
    throw OutOfDownset("element is not below B(" + bc.name(b_prime) + "," +
                       bc.name(b) + ")");
  }
  const auto& xs = f.fiber(b);
  const auto& ys = f.fiber(b_prime);
  QMatrix m = zero_matrix(bc.base_ptr(), ys.cat->types(), xs.cat->types());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      m.at(i, j) = lat.meet(fe, f.dom().hom(ys.members[i], xs.members[j]));
    }
  }
  return m;
}

QDistributor hat(const FiberedFunctor& f, int b, int b_prime, Elem fe) {
  return {f.fiber(b).cat, f.fiber(b_prime).cat,
          hat_matrix(f, b, b_prime, fe)};
}

Elem sharp_by_search(const FiberedFunctor& f, int b, int b_prime,
                     const QMatrix& m) {
  check_shape(f, b, b_prime, m);
  const auto& lat = f.cod().hom_lattice(b_prime, b);
  const auto& xs = f.fiber(b).members;
  const auto& ys = f.fiber(b_prime).members;
  const auto& a = f.dom();
  Elem acc = lat.bottom();
  for (Elem fe : f.downset(b_prime, b)) {
    bool below = true;
    for (std::size_t i = 0; i < ys.size() && below; ++i) {
      for (std::size_t j = 0; j < xs.size() && below; ++j) {
        below = lat.leq(lat.meet(fe, a.hom(ys[i], xs[j])), m.at(i, j));
      }
    }
    if (below) acc = lat.join(acc, fe);
  }
  return acc;
}

Elem sharp_by_meet_formula(const FiberedFunctor& f, int b, int b_prime,
                           const QMatrix& m) {
  check_shape(f, b, b_prime, m);
  const auto& lat = f.cod().hom_lattice(b_prime, b);
  const auto& ds = f.downset_lattice(b_prime, b);
  const auto& xs = f.fiber(b).members;
  const auto& ys = f.fiber(b_prime).members;
  Elem acc = f.cod().hom(b_prime, b);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const auto& adj = f.pair_adjoint(ys[i], xs[j]);
      if (!adj) {
        auto w = sup_preservation_failure(pair_meet_map(f, ys[i], xs[j]));
        throw AdjointMissing("no right adjoint for the pair (" +
                                 f.dom().name(xs[j]) + "," +
                                 f.dom().name(ys[i]) + ")",
                             w.value_or(SupWitness{}));
      }
      acc = lat.meet(acc, ds.embed[(*adj)(m.at(i, j))]);
    }
  }
  return acc;
}

Elem sharp(const FiberedFunctor& f, int b, int b_prime, const QMatrix& phi) {
  if (const auto& w = f.hat_failure(b_prime, b)) {
    throw AdjointMissing("hat does not preserve joins at (" +
                             f.cod().name(b) + "," + f.cod().name(b_prime) +
                             ")",
                         *w);
  }
  const Elem by_search = sharp_by_search(f, b, b_prime, phi);
  const Elem by_meet = sharp_by_meet_formula(f, b, b_prime, phi);
  if (by_search != by_meet) {
    throw std::logic_error("sharp: down-set search and meet formula disagree");
  }
  return by_search;
}

Elem sharp(const FiberedFunctor& f, int b, int b_prime,
           const QDistributor& phi) {
  return sharp(f, b, b_prime, phi.matrix);
}

QMatrix top_except(const FiberedFunctor& f, int a_prime, int a, Elem g) {
  const auto& fm = f.functor().map;
  const auto& xs = f.fiber(fm[a]);
  const auto& ys = f.fiber(fm[a_prime]);
  QMatrix m = top_matrix(f.dom().base_ptr(), ys.cat->types(), xs.cat->types());
  if (!m.lattice(*ys.position_of(a_prime), *xs.position_of(a)).contains(g)) {
    throw MalformedInput("element out of range");
  }
  m.at(*ys.position_of(a_prime), *xs.position_of(a)) = g;
  return m;
}

// --- lax squares -------------------------------------------------------------

namespace {

struct Fig3Scan {
  bool lax = true;
  bool oplax = true;
};

Fig3Scan scan_fig3(const FiberedFunctor& f, int b, int bp, int bpp) {
  Fig3Scan s;
  const auto& bc = f.cod();
  const auto& q = f.base();
  for (Elem fe : f.downset(bp, b)) {
    const auto hf = hat_matrix(f, b, bp, fe);
    for (Elem ge : f.downset(bpp, bp)) {
      const auto hg = hat_matrix(f, bp, bpp, ge);
      const auto composite = compose_matrices(hg, hf);
      const Elem gf = q.compose(bc.type(b), bc.type(bp), bc.type(bpp), ge, fe);
      const auto hgf = hat_matrix(f, b, bpp, gf);
      if (!hgf.leq(composite)) s.lax = false;
      if (!composite.leq(hgf)) s.oplax = false;
    }
  }
  return s;
}

}  // namespace

bool check_fig3_lax(const FiberedFunctor& f, int b, int b_prime,
                    int b_dprime) {
  const auto s = scan_fig3(f, b, b_prime, b_dprime);
  if (!s.oplax) {
    throw std::logic_error("oplax half of the fiber composition square fails");
  }
  return s.lax;
}

bool fig3_oplax_holds(const FiberedFunctor& f, int b, int b_prime,
                      int b_dprime) {
  return scan_fig3(f, b, b_prime, b_dprime).oplax;
}

std::vector<QMatrix> fiber_distributors(const FiberedFunctor& f, int b,
                                        int b_prime, std::uint64_t limit,
                                        std::uint64_t seed, bool* exhaustive) {
  const auto& x = f.fiber(b).cat;
  const auto& y = f.fiber(b_prime).cat;
  std::vector<QMatrix> out;
  bool complete = true;
  for_each_distributor(x, y, [&](const QMatrix& m) {
    if (out.size() >= limit) {
      complete = false;
      return false;
    }
    out.push_back(m);
    return true;
  });
  if (exhaustive) *exhaustive = complete;
  if (complete) return out;
  // Too many to list: the hat images, zero, top and seeded closures of
  // random matrices.
  out.clear();
  auto add = [&](QMatrix d) {
    if (std::find(out.begin(), out.end(), d) == out.end()) {
      out.push_back(std::move(d));
    }
  };
  add(zero_distributor(x, y).matrix);
  add(top_distributor(x, y).matrix);
  for (Elem fe : f.downset(b_prime, b)) add(hat_matrix(f, b, b_prime, fe));
  std::mt19937_64 rng(seed ^ (static_cast<std::uint64_t>(b) << 32) ^
                      static_cast<std::uint64_t>(b_prime));
  for (int s = 0; s < 64; ++s) {
    QMatrix m = zero_matrix(x->base_ptr(), y->types(), x->types());
    for (int r = 0; r < m.rows(); ++r) {
      for (int c = 0; c < m.cols(); ++c) {
        std::uniform_int_distribution<int> pick(0, m.lattice(r, c).size() - 1);
        m.at(r, c) = pick(rng);
      }
    }
    add(distributor_closure(x, y, m).matrix);
  }
  return out;
}

namespace {

struct Fig4Plan {
  std::vector<QMatrix> phis;
  std::vector<QMatrix> psis;
  std::vector<Elem> phi_sharp;
  std::vector<Elem> psi_sharp;
  bool exhaustive = true;
  std::vector<std::pair<std::size_t, std::size_t>> sampled;  // when sampling
  std::uint64_t total = 0;
};

Fig4Plan plan_fig4(const FiberedFunctor& f, int b, int bp, int bpp,
                   const Fig4Options& opt) {
  Fig4Plan p;
  bool ex1 = true, ex2 = true;
  p.phis = fiber_distributors(f, b, bp, opt.enumeration_limit, opt.seed, &ex1);
  p.psis =
      fiber_distributors(f, bp, bpp, opt.enumeration_limit, opt.seed + 1, &ex2);
  for (const auto& m : p.phis) p.phi_sharp.push_back(sharp(f, b, bp, m));
  for (const auto& m : p.psis) p.psi_sharp.push_back(sharp(f, bp, bpp, m));
  const std::uint64_t full =
      static_cast<std::uint64_t>(p.phis.size()) * p.psis.size();
  p.exhaustive = ex1 && ex2 && full <= opt.budget;
  if (full <= opt.budget) {
    p.total = full;
  } else {
    // Pairs of hat images first: they alone decide the square when the
    // fiber-composition square fails.
    auto hats = [&](const std::vector<QMatrix>& ms, int from, int to) {
      std::vector<std::size_t> idx;
      for (Elem fe : f.downset(to, from)) {
        auto it = std::find(ms.begin(), ms.end(), hat_matrix(f, from, to, fe));
        if (it != ms.end()) idx.push_back(static_cast<std::size_t>(it - ms.begin()));
      }
      return idx;
    };
    for (auto i : hats(p.phis, b, bp)) {
      for (auto j : hats(p.psis, bp, bpp)) {
        if (p.sampled.size() < opt.budget) p.sampled.emplace_back(i, j);
      }
    }
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::size_t> pi(0, p.phis.size() - 1);
    std::uniform_int_distribution<std::size_t> ps(0, p.psis.size() - 1);
    while (p.sampled.size() < opt.budget) p.sampled.emplace_back(pi(rng), ps(rng));
    p.total = opt.budget;
  }
  return p;
}

std::pair<std::size_t, std::size_t> pair_at(const Fig4Plan& p,
                                            std::uint64_t k) {
  if (!p.sampled.empty()) return p.sampled[k];
  return {static_cast<std::size_t>(k / p.psis.size()),
          static_cast<std::size_t>(k % p.psis.size())};
}

bool fig4_pair_ok(const FiberedFunctor& f, int b, int bp, int bpp,
                  const Fig4Plan& p, std::size_t i, std::size_t j) {
  const auto& bc = f.cod();
  const auto& q = f.base();
  const auto composite = compose_matrices(p.psis[j], p.phis[i]);
  const Elem rhs = sharp(f, b, bpp, composite);
  const Elem lhs = q.compose(bc.type(b), bc.type(bp), bc.type(bpp),
                             p.psi_sharp[j], p.phi_sharp[i]);
  return bc.hom_lattice(bpp, b).leq(lhs, rhs);
}

Fig4Result finish_fig4(const Fig4Plan& p, const Fig4Options& opt,
                       std::optional<std::uint64_t> first_fail) {
  Fig4Result r;
  r.exhaustive = p.exhaustive;
  r.pairs_checked = p.total;
  r.budget = opt.budget;
  r.seed = opt.seed;
  r.holds = !first_fail.has_value();
  if (first_fail) {
    auto [i, j] = pair_at(p, *first_fail);
    r.counterexample = std::make_pair(p.phis[i], p.psis[j]);
  }
  return r;
}

}  // namespace

Fig4Result check_fig4_lax(const FiberedFunctor& f, int b, int b_prime,
                          int b_dprime, const Fig4Options& opt) {
  const auto p = plan_fig4(f, b, b_prime, b_dprime, opt);
  auto first = parallel_first_index(p.total, [&](std::uint64_t k) {
    auto [i, j] = pair_at(p, k);
    return !fig4_pair_ok(f, b, b_prime, b_dprime, p, i, j);
  });
  return finish_fig4(p, opt, first);
}

namespace serial {

Fig4Result check_fig4_lax(const FiberedFunctor& f, int b, int b_prime,
                          int b_dprime, const Fig4Options& opt) {
  const auto p = plan_fig4(f, b, b_prime, b_dprime, opt);
  std::optional<std::uint64_t> first;
  for (std::uint64_t k = 0; k < p.total && !first; ++k) {
    auto [i, j] = pair_at(p, k);
    if (!fig4_pair_ok(f, b, b_prime, b_dprime, p, i, j)) first = k;
  }
  return finish_fig4(p, opt, first);
}

}  // namespace serial

// --- partial products ---------------------------------------------------------

namespace {

struct FiberwiseObjects {
  CategoryPtr cat;
  std::vector<FiberFunctorKey> objects;
  std::map<FiberFunctorKey, int> index;
};

/// Objects (b, H) with homs sharp(C(H'-, H-)).
FiberwiseObjects build_fiberwise(const FiberedFunctor& f, const QCategory& c,
                                 std::vector<FiberFunctorKey> keys) {
  const auto& bc = f.cod();
  const int n = static_cast<int>(keys.size());
  std::vector<std::string> names;
  std::vector<int> types;
  for (const auto& k : keys) {
    std::string nm = bc.name(k.b) + "|[";
    for (std::size_t i = 0; i < k.h.size(); ++i) {
      if (i) nm += ",";
      nm += c.name(k.h[i]);
    }
    names.push_back(nm + "]");
    types.push_back(bc.type(k.b));
  }
  std::vector<Elem> hom(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const auto& kp = keys[i];
    const auto& ys = f.fiber(kp.b);
    for (int j = 0; j < n; ++j) {
      const auto& k = keys[j];
      const auto& xs = f.fiber(k.b);
      QMatrix phi = zero_matrix(c.base_ptr(), ys.cat->types(), xs.cat->types());
      for (int r = 0; r < phi.rows(); ++r) {
        for (int col = 0; col < phi.cols(); ++col) {
          phi.at(r, col) = c.hom(kp.h[r], k.h[col]);
        }
      }
      hom[i * n + j] = sharp(f, k.b, kp.b, phi);
    }
  }
  FiberwiseObjects out;
  out.cat = make_category(c.base_ptr(), std::move(names), std::move(types),
                          std::move(hom));
  for (int i = 0; i < n; ++i) out.index[keys[i]] = i;
  out.objects = std::move(keys);
  return out;
}

/// ((b, H), a) -> H a on the pullback of `proj` along F.
QFunctor evaluation(const FiberedFunctor& f, const Pullback& pb,
                    const std::vector<FiberFunctorKey>& objects,
                    const CategoryPtr& c) {
  std::vector<int> m(pb.pairs.size());
  for (std::size_t i = 0; i < pb.pairs.size(); ++i) {
    const auto [p, a] = pb.pairs[i];
    const auto& key = objects[p];
    m[i] = key.h[*f.fiber(key.b).position_of(a)];
  }
  return {pb.cat, c, std::move(m)};
}

void require_exponentiable(const FiberedFunctor& f) {
  auto rep = is_exponentiable(f);
  if (!rep.verdict) {
    throw ConditionViolated("functor is not exponentiable", std::move(rep));
  }
}

}  // namespace

std::optional<int> PartialProduct::object_index(
    int b, const std::vector<int>& h) const {
  auto it = index.find(FiberFunctorKey{b, h});
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::optional<int> SliceExponential::object_index(
    int b, const std::vector<int>& h) const {
  auto it = index.find(FiberFunctorKey{b, h});
  if (it == index.end()) return std::nullopt;
  return it->second;
}

PartialProduct partial_product(const FiberedFunctor& f, const CategoryPtr& c) {
  if (c->base_ptr() != f.dom().base_ptr()) {
    throw MalformedInput("target category over a different quantaloid");
  }
  require_exponentiable(f);
  std::vector<FiberFunctorKey> keys;
  for (int b = 0; b < f.cod().size(); ++b) {
    for_each_functor_map(*f.fiber(b).cat, *c, [&](const std::vector<int>& h) {
      keys.push_back({b, h});
      return true;
    });
  }
  auto fw = build_fiberwise(f, *c, std::move(keys));
  PartialProduct pp;
  pp.p = fw.cat;
  pp.objects = std::move(fw.objects);
  pp.index = std::move(fw.index);
  std::vector<int> pm;
  for (const auto& k : pp.objects) pm.push_back(k.b);
  pp.proj = {pp.p, f.functor().cod, std::move(pm)};
  pp.p_times_a = pullback(pp.proj, f.functor());
  pp.eval = evaluation(f, pp.p_times_a, pp.objects, c);
  return pp;
}

PartialProduct partial_product(const QFunctor& f, const CategoryPtr& c) {
  return partial_product(FiberedFunctor(f), c);
}

QFunctor mediating(const PartialProduct& pp, const FiberedFunctor& f,
                   const QFunctor& p_prime_map, const QFunctor& e_prime) {
  auto pb = pullback(p_prime_map, f.functor());
  if (e_prime.dom->size() != pb.cat->size() ||
      static_cast<int>(e_prime.map.size()) != pb.cat->size()) {
    throw MalformedInput("E' is not defined on P' x_B A");
  }
  const int n = p_prime_map.dom->size();
  std::vector<int> k(n);
  for (int x = 0; x < n; ++x) {
    const int b = p_prime_map.map[x];
    std::vector<int> h;
    for (int a : f.fiber(b).members) h.push_back(e_prime.map[*pb.index_of(x, a)]);
    auto idx = pp.object_index(b, h);
    if (!idx) {
      throw MalformedInput("E'(" + p_prime_map.dom->name(x) +
                           ", -) is not a functor on the fiber");
    }
    k[x] = *idx;
  }
  return {p_prime_map.dom, pp.p, std::move(k)};
}

SliceExponential slice_exponential(const FiberedFunctor& f,
                                   const QFunctor& g) {
  if (!(g.cod == f.functor().cod || *g.cod == f.cod())) {
    throw MalformedInput("G must have the same codomain as F");
  }
  require_exponentiable(f);
  const auto& c = *g.dom;
  std::vector<FiberFunctorKey> keys;
  for (int b = 0; b < f.cod().size(); ++b) {
    for_each_functor_map(*f.fiber(b).cat, c, [&](const std::vector<int>& h) {
      if (std::all_of(h.begin(), h.end(),
                      [&](int x) { return g.map[x] == b; })) {
        keys.push_back({b, h});
      }
      return true;
    });
  }
  auto fw = build_fiberwise(f, c, std::move(keys));
  SliceExponential se;
  se.e = fw.cat;
  se.objects = std::move(fw.objects);
  se.index = std::move(fw.index);
  std::vector<int> pm;
  for (const auto& k : se.objects) pm.push_back(k.b);
  se.proj = {se.e, f.functor().cod, std::move(pm)};
  se.e_times_a = pullback(se.proj, f.functor());
  se.eval = evaluation(f, se.e_times_a, se.objects, g.dom);
  return se;
}

SliceExponential slice_exponential(const QFunctor& f, const QFunctor& g) {
  return slice_exponential(FiberedFunctor(f), g);
}

}  // namespace qexp
