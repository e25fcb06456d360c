#include "qexp/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <random>

namespace qexp {

namespace {

constexpr std::size_t kMaxRecorded = 32;

struct Meter {
  std::uint64_t used = 0;
  std::uint64_t budget = 0;

  bool spend(std::uint64_t n = 1) {
    used += n;
    return used <= budget;
  }
  bool exhausted() const { return used > budget; }
};

std::string map_str(const std::vector<int>& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(m[i]);
  }
  return s + "]";
}

std::vector<std::vector<int>> fiber_members(const QFunctor& f) {
  std::vector<std::vector<int>> out(f.cod->size());
  for (int a = 0; a < f.dom->size(); ++a) out[f.map[a]].push_back(a);
  return out;
}

// Objects of a fiberwise construction keyed by (proj p, eval(p, -)). This is
// what a mediating K has to match objectwise.
class SignatureIndex {
 public:
  SignatureIndex(const QFunctor& f, const QFunctor& proj, const Pullback& pb,
                 const QFunctor& eval)
      : members_(fiber_members(f)) {
    for (int p = 0; p < proj.dom->size(); ++p) {
      table_[signature(p, proj, pb, eval)].push_back(p);
    }
  }

  const std::vector<int>& lookup(const std::vector<int>& sig) const {
    static const std::vector<int> none;
    auto it = table_.find(sig);
    return it == table_.end() ? none : it->second;
  }

  const std::vector<int>& members(int b) const { return members_[b]; }

  // The signature E'(x, -) of a probe object under a cone.
  std::vector<int> cone_signature(int x, int b, const Pullback& pbp,
                                  const std::vector<int>& e) const {
    std::vector<int> sig{b};
    for (int a : members_[b]) sig.push_back(e[*pbp.index_of(x, a)]);
    return sig;
  }

 private:
  std::vector<int> signature(int p, const QFunctor& proj, const Pullback& pb,
                             const QFunctor& eval) const {
    const int b = proj.map[p];
    std::vector<int> sig{b};
    for (int a : members_[b]) sig.push_back(eval.map[*pb.index_of(p, a)]);
    return sig;
  }

  std::vector<std::vector<int>> members_;
  std::map<std::vector<int>, std::vector<int>> table_;
};

// Counts functors K: probe -> P whose objects have the given candidates, up
// to `cap`.
int count_functors_among(const QCategory& probe, const QCategory& p,
                         const std::vector<std::vector<int>>& cands, int cap,
                         std::vector<int>* first) {
  const int n = probe.size();
  std::vector<int> k(n, -1);
  int found = 0;
  auto rec = [&](auto&& self, int x) -> void {
    if (found >= cap) return;
    if (x == n) {
      if (found == 0 && first) *first = k;
      ++found;
      return;
    }
    for (int cand : cands[x]) {
      if (p.type(cand) != probe.type(x)) continue;
      k[x] = cand;
      bool ok = true;
      for (int y = 0; y <= x && ok; ++y) {
        ok = probe.hom_lattice(x, y).leq(probe.hom(x, y), p.hom(cand, k[y])) &&
             probe.hom_lattice(y, x).leq(probe.hom(y, x), p.hom(k[y], cand));
      }
      if (ok) self(self, x + 1);
      if (found >= cap) return;
    }
    k[x] = -1;
  };
  rec(rec, 0);
  return found;
}

std::optional<FailureReason> judge_cone(const QCategory& probe,
                                        const QCategory& p,
                                        const SignatureIndex& idx,
                                        const std::vector<int>& pm,
                                        const Pullback& pbp,
                                        const std::vector<int>& e,
                                        std::string* detail) {
  std::vector<std::vector<int>> cands(probe.size());
  for (int x = 0; x < probe.size(); ++x) {
    cands[x] = idx.lookup(idx.cone_signature(x, pm[x], pbp, e));
    if (cands[x].empty()) {
      if (detail) *detail = "no object of P matches the cone at " + probe.name(x);
      return FailureReason::EquationFails;
    }
  }
  const int n = count_functors_among(probe, p, cands, 2, nullptr);
  if (n == 0) {
    if (detail) *detail = "the objectwise mediator is not a functor";
    return FailureReason::NoMediator;
  }
  if (n > 1) {
    if (detail) *detail = "more than one mediator";
    return FailureReason::NonUniqueMediator;
  }
  return std::nullopt;
}

QFunctor over(const CategoryPtr& dom, const QFunctor& f, std::vector<int> m) {
  return {dom, f.cod, std::move(m)};
}

}  // namespace

std::string to_string(FailureReason r) {
  switch (r) {
    case FailureReason::NoMediator: return "no-mediator";
    case FailureReason::NonUniqueMediator: return "non-unique-mediator";
    case FailureReason::EquationFails: return "equation-fails";
    case FailureReason::RoundTripFails: return "round-trip-fails";
    case FailureReason::NoStructure: return "no-structure";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Passed: return "passed";
    case Verdict::Failed: return "failed";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::uint64_t default_budget() {
  if (const char* s = std::getenv("QEXP_BUDGET")) {
    char* end = nullptr;
    const auto v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return v;
  }
  return 50'000'000;
}

bool is_functor_map(const QCategory& a, const QCategory& b,
                    const std::vector<int>& map) {
  if (static_cast<int>(map.size()) != a.size()) return false;
  for (int i = 0; i < a.size(); ++i) {
    if (map[i] < 0 || map[i] >= b.size() || b.type(map[i]) != a.type(i)) {
      return false;
    }
  }
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < a.size(); ++j) {
      if (!a.hom_lattice(i, j).leq(a.hom(i, j), b.hom(map[i], map[j]))) {
        return false;
      }
    }
  }
  return true;
}

std::vector<Probe> ProbeFamily::all() const {
  std::vector<Probe> out = points;
  out.insert(out.end(), arrows.begin(), arrows.end());
  out.insert(out.end(), extras.begin(), extras.end());
  return out;
}

ProbeFamily make_probe_family(const QuantaloidPtr& q, int max_probe_objects) {
  ProbeFamily pf;
  for (int x = 0; x < q->num_objects(); ++x) {
    pf.points.push_back({"*_" + q->object_name(x), one_object(q, x)});
  }
  for (int x = 0; x < q->num_objects(); ++x) {
    for (int y = 0; y < q->num_objects(); ++y) {
      const auto& l = q->hom(x, y);
      for (Elem e = 0; e < l.size(); ++e) {
        pf.arrows.push_back({"P[" + q->object_name(x) + "->" +
                                 q->object_name(y) + ":" + l.name(e) + "]",
                             arrow_category(q, QArrow{x, y, e})});
      }
    }
  }
  if (max_probe_objects > 0) {
    int i = 0;
    for (auto& c : enumerate_qcategories(q, max_probe_objects)) {
      if (c->size() == 0) continue;
      pf.extras.push_back({"X" + std::to_string(i++), c});
    }
  }
  return pf;
}

OracleVerdict verify_universal_property(const QFunctor& f, const CategoryPtr& c,
                                        const PartialProduct& pp,
                                        const ProbeFamily& probes,
                                        std::uint64_t budget) {
  OracleVerdict v;
  v.budget = budget;
  Meter meter{0, budget};
  auto fail = [&](ConeFailure cf) {
    if (v.failures.size() < kMaxRecorded) v.failures.push_back(std::move(cf));
    v.verdict = Verdict::Failed;
  };
  const auto& p = *pp.p;
  if (static_cast<int>(pp.proj.map.size()) != p.size() ||
      !is_functor_map(p, *f.cod, pp.proj.map)) {
    fail({"structure", nullptr, {}, {}, FailureReason::NoStructure,
          "proj is not a functor P -> B"});
    return v;
  }
  if (!verify_category(p).empty()) {
    fail({"structure", nullptr, {}, {}, FailureReason::NoStructure,
          "P is not a category"});
  }
  const QFunctor proj{pp.p, f.cod, pp.proj.map};
  const Pullback pb = pullback(proj, f);
  if (static_cast<int>(pp.eval.map.size()) != pb.cat->size()) {
    fail({"structure", nullptr, {}, {}, FailureReason::NoStructure,
          "eval is not defined on P x_B A"});
    return v;
  }
  if (!is_functor_map(*pb.cat, *c, pp.eval.map)) {
    fail({"structure", nullptr, {}, {}, FailureReason::NoStructure,
          "eval is not a functor P x_B A -> C"});
  }
  const SignatureIndex idx(f, proj, pb, pp.eval);

  for (const auto& probe : probes.all()) {
    bool stop = false;
    for_each_functor_map(*probe.cat, *f.cod, [&](const std::vector<int>& pm) {
      const Pullback pbp = pullback(over(probe.cat, f, pm), f);
      for_each_functor_map(*pbp.cat, *c, [&](const std::vector<int>& e) {
        ++v.cones;
        if (!meter.spend()) {
          stop = true;
          return false;
        }
        std::string detail;
        if (auto r = judge_cone(*probe.cat, p, idx, pm, pbp, e, &detail)) {
          fail({probe.name, probe.cat, pm, e, *r, detail});
        }
        return true;
      });
      return !stop;
    });
    if (stop) break;
  }
  v.work = meter.used;
  if (meter.exhausted() && v.verdict != Verdict::Failed) {
    v.verdict = Verdict::Inconclusive;
  }
  return v;
}

std::optional<FailureReason> replay_cone(const QFunctor& f,
                                         const CategoryPtr& c,
                                         const PartialProduct& pp,
                                         const ConeFailure& cone) {
  if (!cone.probe_cat) return FailureReason::NoStructure;
  if (!is_functor_map(*pp.p, *f.cod, pp.proj.map)) {
    return FailureReason::NoStructure;
  }
  const QFunctor proj{pp.p, f.cod, pp.proj.map};
  const Pullback pb = pullback(proj, f);
  if (static_cast<int>(pp.eval.map.size()) != pb.cat->size()) {
    return FailureReason::NoStructure;
  }
  if (!is_functor_map(*cone.probe_cat, *f.cod, cone.p_map)) {
    throw MalformedInput("recorded P'm is not a functor");
  }
  const Pullback pbp = pullback(over(cone.probe_cat, f, cone.p_map), f);
  if (!is_functor_map(*pbp.cat, *c, cone.e_map)) {
    throw MalformedInput("recorded E' is not a functor");
  }
  const SignatureIndex idx(f, proj, pb, pp.eval);
  return judge_cone(*cone.probe_cat, *pp.p, idx, cone.p_map, pbp, cone.e_map,
                    nullptr);
}

// --- brute force --------------------------------------------------------------

namespace {

QDistributor principal(const QFunctor& f, const std::vector<Fiber>& fb, int b,
                       int b_prime, Elem fe) {
  const auto& a = *f.dom;
  const auto& q = a.base();
  const auto& lat = q.hom(f.cod->type(b), f.cod->type(b_prime));
  const auto& dom = fb[b];
  const auto& cod = fb[b_prime];
  QMatrix m{a.base_ptr(), cod.cat->types(), dom.cat->types(), {}};
  for (int ap : cod.members) {
    for (int x : dom.members) m.entries.push_back(lat.meet(fe, a.hom(ap, x)));
  }
  return {dom.cat, cod.cat, std::move(m)};
}

std::vector<Elem> below(const FiniteLattice& l, Elem cap) {
  std::vector<Elem> out;
  for (Elem x = 0; x < l.size(); ++x) {
    if (l.leq(x, cap)) out.push_back(x);
  }
  return out;
}

// Whether a complete hom matrix satisfies P(x,y).P(y,z) <= P(x,z). Rows are
// bucketed by (type, value) as bitsets so each (x, y) costs O(n / 64) per
// value instead of O(n).
template <class TypeOf>
bool composition_holds(const Quantaloid& q, std::size_t count, TypeOf type_of,
                       const std::vector<Elem>& val) {
  const int n = static_cast<int>(count);
  const int nq = q.num_objects();
  const int words = (n + 63) / 64;
  int width = 0;
  for (int u = 0; u < nq; ++u) {
    for (int w = 0; w < nq; ++w) width = std::max(width, q.hom(u, w).size());
  }
  // exact[x][tz][v]: z of type tz with P(x,z) == v; at_least likewise with >=.
  const std::size_t stride = static_cast<std::size_t>(nq) * width * words;
  std::vector<std::uint64_t> exact(stride * n, 0), at_least(stride * n, 0);
  auto slot = [&](std::vector<std::uint64_t>& v, int x, int tz, int value) {
    return v.data() + stride * x + (static_cast<std::size_t>(tz) * width + value) * words;
  };
  for (int x = 0; x < n; ++x) {
    for (int z = 0; z < n; ++z) {
      const int tz = type_of(z);
      const Elem v = val[x * n + z];
      slot(exact, x, tz, v)[z / 64] |= 1ull << (z % 64);
      const auto& l = q.hom(tz, type_of(x));
      for (Elem w = 0; w < l.size(); ++w) {
        if (l.leq(w, v)) slot(at_least, x, tz, w)[z / 64] |= 1ull << (z % 64);
      }
    }
  }
  for (int x = 0; x < n; ++x) {
    const int tx = type_of(x);
    for (int y = 0; y < n; ++y) {
      const int ty = type_of(y);
      const Elem g = val[x * n + y];
      for (int tz = 0; tz < nq; ++tz) {
        const auto& lyz = q.hom(tz, ty);
        for (Elem v = 0; v < lyz.size(); ++v) {
          const auto* r = slot(exact, y, tz, v);
          const auto* u = slot(at_least, x, tz, q.compose(tz, ty, tx, g, v));
          for (int k = 0; k < words; ++k) {
            if (r[k] & ~u[k]) return false;
          }
        }
      }
    }
  }
  return true;
}

}  // namespace

std::vector<BruteForceTarget> brute_force_targets(const QFunctor& f,
                                                  std::uint64_t seed,
                                                  int random) {
  const auto& a = *f.dom;
  const auto& b = *f.cod;
  const auto& qp = a.base_ptr();
  const auto& q = *qp;
  const int nb = b.size();
  std::vector<BruteForceTarget> out;
  auto add = [&](std::string name, CategoryPtr cat) {
    for (const auto& t : out) {
      if (*t.cat == *cat) return;
    }
    out.push_back({std::move(name), std::move(cat)});
  };
  std::vector<Fiber> fb;
  for (int x = 0; x < nb; ++x) fb.push_back(fiber(f, x));
  auto down = [&](int to, int from) {
    return below(b.hom_lattice(to, from), b.hom(to, from));
  };
  auto elem_name = [&](int to, int from, Elem e) {
    return b.hom_lattice(to, from).name(e);
  };

  add("terminal", terminal(qp));
  for (int x = 0; x < nb; ++x) {
    for (int y = 0; y < nb; ++y) {
      const auto ds = down(y, x);
      const std::string pre = b.name(x) + "," + b.name(y) + ",";
      for (Elem fe : ds) {
        add("collage hat(" + pre + elem_name(y, x, fe) + ")",
            collage(principal(f, fb, x, y, fe)).cat);
      }
      const auto& lat = b.hom_lattice(y, x);
      for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = i + 1; j < ds.size(); ++j) {
          auto d1 = principal(f, fb, x, y, ds[i]);
          auto d2 = principal(f, fb, x, y, ds[j]);
          for (std::size_t k = 0; k < d1.matrix.entries.size(); ++k) {
            d1.matrix.entries[k] =
                lat.join(d1.matrix.entries[k], d2.matrix.entries[k]);
          }
          add("collage hat(" + pre + elem_name(y, x, ds[i]) + ") v hat(" + pre +
                  elem_name(y, x, ds[j]) + ")",
              collage(d1).cat);
        }
      }
    }
  }
  for (int x = 0; x < nb; ++x) {
    for (int y = 0; y < nb; ++y) {
      for (int z = 0; z < nb; ++z) {
        for (Elem fe : down(y, x)) {
          for (Elem ge : down(z, y)) {
            add("triple hat(" + b.name(x) + "," + b.name(y) + "," +
                    elem_name(y, x, fe) + ") hat(" + b.name(y) + "," +
                    b.name(z) + "," + elem_name(z, y, ge) + ")",
                triple_collage(principal(f, fb, x, y, fe),
                               principal(f, fb, y, z, ge))
                    .cat);
          }
        }
      }
    }
  }
  for (int x = 0; x < q.num_objects(); ++x) {
    for (int y = 0; y < q.num_objects(); ++y) {
      const auto& l = q.hom(x, y);
      for (Elem e = 0; e < l.size(); ++e) {
        add("P[" + q.object_name(x) + "->" + q.object_name(y) + ":" + l.name(e) +
                "]",
            arrow_category(qp, QArrow{x, y, e}));
      }
    }
  }
  if (nb > 0) {
    std::mt19937_64 rng(seed);
    for (int r = 0; r < random; ++r) {
      const int x = static_cast<int>(rng() % nb);
      const int y = static_cast<int>(rng() % nb);
      const auto& lat = b.hom_lattice(y, x);
      QMatrix m{qp, fb[y].cat->types(), fb[x].cat->types(), {}};
      const std::size_t cells = fb[y].members.size() * fb[x].members.size();
      for (std::size_t k = 0; k < cells; ++k) {
        m.entries.push_back(static_cast<Elem>(rng() % lat.size()));
      }
      add("collage random#" + std::to_string(r),
          collage(distributor_closure(fb[x].cat, fb[y].cat, m)).cat);
    }
  }
  return out;
}

std::optional<CategoryPtr> brute_force_partial_product(
    const QFunctor& f, const CategoryPtr& c, std::uint64_t& work,
    std::uint64_t budget, std::string* why) {
  const auto& a = *f.dom;
  const auto& b = *f.cod;
  const auto& cc = *c;
  const auto& qp = a.base_ptr();
  const auto& q = *qp;
  auto say = [&](const std::string& s) {
    if (why) *why = s;
  };
  const auto members = fiber_members(f);
  std::vector<std::vector<Elem>> downsets;
  for (int x = 0; x < b.size(); ++x) {
    for (int y = 0; y < b.size(); ++y) {
      downsets.push_back(below(b.hom_lattice(x, y), b.hom(x, y)));
    }
  }

  // Any partial product is isomorphic to one on these objects: the cones
  // from points *_X pick out exactly the functors A_b -> C.
  std::vector<FiberFunctorKey> objs;
  for (int x = 0; x < b.size(); ++x) {
    for_each_functor_map(*fiber(f, x).cat, cc, [&](const std::vector<int>& h) {
      objs.push_back({x, h});
      return true;
    });
  }
  const int n = static_cast<int>(objs.size());
  auto obj_name = [&](int i) {
    std::string s = b.name(objs[i].b) + "|[";
    for (std::size_t k = 0; k < objs[i].h.size(); ++k) {
      if (k) s += ",";
      s += cc.name(objs[i].h[k]);
    }
    return s + "]";
  };

  auto t = [&](int i) { return b.type(objs[i].b); };
  std::vector<std::vector<Elem>> domain(static_cast<std::size_t>(n) * n);
  bool singletons = true;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int bt = objs[i].b, bf = objs[j].b;
      const auto& s = objs[i].h;
      const auto& tt = objs[j].h;
      const auto& lat = b.hom_lattice(bt, bf);
      const auto& ds = downsets[bt * b.size() + bf];
      // Both the P_f cone over P'm = (b', b) with E' = (T, S) and eval on
      // P x_B A reduce to these cross entries; the blocks are T and S.
      auto cross_ok = [&](Elem p) {
        for (std::size_t u = 0; u < members[bt].size(); ++u) {
          for (std::size_t w = 0; w < members[bf].size(); ++w) {
            const Elem lhs = lat.meet(p, a.hom(members[bt][u], members[bf][w]));
            if (!lat.leq(lhs, cc.hom(s[u], tt[w]))) return false;
          }
        }
        return true;
      };
      Elem lower = lat.bottom();
      std::vector<Elem> ok;
      for (Elem fe : ds) {
        if (cross_ok(fe)) {
          lower = lat.join(lower, fe);
          ok.push_back(fe);
        }
      }
      auto& dom = domain[i * n + j];
      for (Elem p : ok) {
        if (!lat.leq(lower, p)) continue;
        if (i == j && !lat.leq(q.unit(t(i)), p)) continue;
        dom.push_back(p);
      }
      work += ds.size();
      if (dom.empty()) {
        say("no admissible value for P(" + obj_name(i) + ", " + obj_name(j) +
            ")");
        return std::nullopt;
      }
      singletons = singletons && dom.size() == 1;
    }
  }
  if (work > budget) {
    say("budget exhausted");
    return std::nullopt;
  }

  const std::size_t total = static_cast<std::size_t>(n) * n;
  std::vector<Elem> val(total, 0);
  if (singletons) {
    for (std::size_t e = 0; e < total; ++e) val[e] = domain[e][0];
    work += total;
    if (!composition_holds(q, objs.size(), [&](int i) { return t(i); }, val)) {
      say("no hom assignment satisfies identity and composition");
      return std::nullopt;
    }
  } else {
    std::vector<int> choice(total, -1);
    // P(x,y).P(y,z) <= P(x,z) for every triple whose entries are all set.
    auto tri = [&](int x, int y, int z) {
      return q.hom(t(z), t(x)).leq(
          q.compose(t(z), t(y), t(x), val[x * n + y], val[y * n + z]),
          val[x * n + z]);
    };
    auto consistent = [&](int e) {
      const int i = e / n, j = e % n;
      for (int k = 0; k < n; ++k) {
        if (j * n + k <= e && i * n + k <= e && !tri(i, j, k)) return false;
        if (k * n + i <= e && k * n + j <= e && !tri(k, i, j)) return false;
        if (i * n + k <= e && k * n + j <= e && !tri(i, k, j)) return false;
      }
      return true;
    };
    long e = 0;
    while (e >= 0 && e < static_cast<long>(total)) {
      auto& ch = choice[e];
      if (++ch >= static_cast<int>(domain[e].size())) {
        ch = -1;
        --e;
        continue;
      }
      val[e] = domain[e][ch];
      if (++work > budget) {
        say("budget exhausted");
        return std::nullopt;
      }
      if (consistent(static_cast<int>(e))) ++e;
    }
    if (e < 0) {
      say("no hom assignment satisfies identity and composition");
      return std::nullopt;
    }
  }
  std::vector<std::string> names;
  std::vector<int> types;
  for (int i = 0; i < n; ++i) {
    names.push_back(obj_name(i));
    types.push_back(t(i));
  }
  return make_category(qp, std::move(names), std::move(types), std::move(val));
}

BruteForceResult brute_force_exponentiable(const QFunctor& f,
                                           std::uint64_t budget,
                                           std::uint64_t seed) {
  BruteForceResult r;
  r.budget = budget;
  for (const auto& target : brute_force_targets(f, seed)) {
    ++r.targets_tried;
    std::string why;
    auto p = brute_force_partial_product(f, target.cat, r.work, budget, &why);
    if (r.work > budget) {
      r.verdict = Verdict::Inconclusive;
      r.detail = "budget exhausted at " + target.name;
      return r;
    }
    if (!p) {
      r.verdict = Verdict::Failed;
      r.failing_target = target.name;
      r.detail = why;
      return r;
    }
  }
  return r;
}

// --- slice exponentials -------------------------------------------------------

OracleVerdict check_adjunction_bijection(const QFunctor& f, const QFunctor& g,
                                         const SliceExponential& exp,
                                         const std::vector<Probe>& probes,
                                         std::uint64_t budget) {
  OracleVerdict v;
  v.budget = budget;
  Meter meter{0, budget};
  auto fail = [&](ConeFailure cf) {
    if (v.failures.size() < kMaxRecorded) v.failures.push_back(std::move(cf));
    v.verdict = Verdict::Failed;
  };
  auto structure = [&](const std::string& why) {
    fail({"structure", nullptr, {}, {}, FailureReason::NoStructure, why});
  };
  const auto& e = *exp.e;
  const auto& c = *g.dom;
  if (!verify_category(e).empty()) structure("E is not a category");
  if (static_cast<int>(exp.proj.map.size()) != e.size() ||
      !is_functor_map(e, *f.cod, exp.proj.map)) {
    structure("proj is not a functor E -> B");
    return v;
  }
  const QFunctor proj{exp.e, f.cod, exp.proj.map};
  const Pullback pb = pullback(proj, f);
  if (static_cast<int>(exp.eval.map.size()) != pb.cat->size()) {
    structure("eval is not defined on E x_B A");
    return v;
  }
  if (!is_functor_map(*pb.cat, c, exp.eval.map)) {
    structure("eval is not a functor E x_B A -> C");
  }
  for (int i = 0; i < pb.cat->size(); ++i) {
    if (g.map[exp.eval.map[i]] != f.map[pb.pairs[i].second]) {
      structure("eval is not a map over B");
      break;
    }
  }
  const SignatureIndex idx(f, proj, pb, exp.eval);

  for (const auto& probe : probes) {
    const auto& xc = *probe.cat;
    bool stop = false;
    for_each_functor_map(xc, *f.cod, [&](const std::vector<int>& xm) {
      const Pullback pbx = pullback(over(probe.cat, f, xm), f);
      auto over_b = [&](const std::vector<int>& em) {
        for (int i = 0; i < pbx.cat->size(); ++i) {
          if (g.map[em[i]] != f.map[pbx.pairs[i].second]) return false;
        }
        return true;
      };
      auto curry = [&](const std::vector<int>& em) -> std::optional<std::vector<int>> {
        std::vector<int> k(xc.size());
        for (int x = 0; x < xc.size(); ++x) {
          const auto& hits = idx.lookup(idx.cone_signature(x, xm[x], pbx, em));
          if (hits.size() != 1) return std::nullopt;
          k[x] = hits[0];
        }
        return k;
      };
      auto uncurry = [&](const std::vector<int>& k) {
        std::vector<int> em(pbx.cat->size());
        for (int i = 0; i < pbx.cat->size(); ++i) {
          const auto [x, aa] = pbx.pairs[i];
          em[i] = exp.eval.map[*pb.index_of(k[x], aa)];
        }
        return em;
      };
      for_each_functor_map(*pbx.cat, c, [&](const std::vector<int>& em) {
        if (!meter.spend()) {
          stop = true;
          return false;
        }
        if (!over_b(em)) return true;
        ++v.cones;
        auto k = curry(em);
        if (!k || !is_functor_map(xc, e, *k)) {
          fail({probe.name, probe.cat, xm, em, FailureReason::RoundTripFails,
                "curry(e) is not a functor X -> E"});
        } else if (uncurry(*k) != em) {
          fail({probe.name, probe.cat, xm, em, FailureReason::RoundTripFails,
                "uncurry(curry(e)) != e"});
        }
        return true;
      });
      if (stop) return false;
      for_each_functor_map(xc, e, [&](const std::vector<int>& k) {
        if (!meter.spend()) {
          stop = true;
          return false;
        }
        for (int x = 0; x < xc.size(); ++x) {
          if (exp.proj.map[k[x]] != xm[x]) return true;
        }
        ++v.cones;
        const auto em = uncurry(k);
        if (!is_functor_map(*pbx.cat, c, em) || !over_b(em)) {
          fail({probe.name, probe.cat, xm, em, FailureReason::RoundTripFails,
                "uncurry(" + map_str(k) + ") is not a functor over B"});
        } else if (curry(em) != std::optional<std::vector<int>>(k)) {
          fail({probe.name, probe.cat, xm, em, FailureReason::RoundTripFails,
                "curry(uncurry(" + map_str(k) + ")) != k"});
        }
        return true;
      });
      return !stop;
    });
    if (stop) break;
  }
  v.work = meter.used;
  if (meter.exhausted() && v.verdict != Verdict::Failed) {
    v.verdict = Verdict::Inconclusive;
  }
  return v;
}

// --- enumeration ----------------------------------------------------------------

void for_each_qcategory(const QuantaloidPtr& qp, const std::vector<int>& types,
                        const std::function<bool(const CategoryPtr&)>& visit) {
  const auto& q = *qp;
  const int n = static_cast<int>(types.size());
  const int total = n * n;
  std::vector<Elem> h(total, 0);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("o" + std::to_string(i));
  auto lat = [&](int to, int from) -> const FiniteLattice& {
    return q.hom(types[from], types[to]);
  };
  auto tri = [&](int x, int y, int z) {
    return lat(x, z).leq(
        q.compose(types[z], types[y], types[x], h[x * n + y], h[y * n + z]),
        h[x * n + z]);
  };
  auto consistent = [&](int e) {
    const int i = e / n, j = e % n;
    if (i == j && !lat(i, i).leq(q.unit(types[i]), h[e])) return false;
    for (int k = 0; k < n; ++k) {
      if (j * n + k <= e && i * n + k <= e && !tri(i, j, k)) return false;
      if (k * n + i <= e && k * n + j <= e && !tri(k, i, j)) return false;
      if (i * n + k <= e && k * n + j <= e && !tri(i, k, j)) return false;
    }
    return true;
  };
  bool stop = false;
  auto rec = [&](auto&& self, int e) -> void {
    if (stop) return;
    if (e == total) {
      if (!visit(make_category(qp, names, types, h))) stop = true;
      return;
    }
    const int size = lat(e / n, e % n).size();
    for (Elem v = 0; v < size && !stop; ++v) {
      h[e] = v;
      if (consistent(e)) self(self, e + 1);
    }
    h[e] = 0;
  };
  rec(rec, 0);
}

std::vector<CategoryPtr> enumerate_qcategories(const QuantaloidPtr& q,
                                               const std::vector<int>& types) {
  std::vector<CategoryPtr> out;
  for_each_qcategory(q, types, [&](const CategoryPtr& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

std::vector<CategoryPtr> enumerate_qcategories(const QuantaloidPtr& q,
                                               int max_objects) {
  std::vector<CategoryPtr> out;
  const int k = q->num_objects();
  for (int n = 0; n <= max_objects; ++n) {
    std::vector<int> types(n, 0);
    while (true) {
      for (auto& c : enumerate_qcategories(q, types)) out.push_back(c);
      int i = n - 1;
      while (i >= 0 && types[i] == k - 1) types[i--] = 0;
      if (i < 0) break;
      ++types[i];
    }
  }
  return out;
}

std::vector<CategoryPtr> preorder_corpus(const QuantaloidPtr& boolean,
                                         int max_objects, bool up_to_iso) {
  auto all = enumerate_qcategories(boolean, max_objects);
  if (!up_to_iso) return all;
  std::vector<CategoryPtr> kept;
  for (const auto& c : all) {
    const bool seen = std::any_of(kept.begin(), kept.end(), [&](const auto& k) {
      return find_isomorphism(*k, *c).has_value();
    });
    if (!seen) kept.push_back(c);
  }
  return kept;
}

std::vector<QFunctor> functor_corpus(const std::vector<CategoryPtr>& domains,
                                     const std::vector<CategoryPtr>& codomains) {
  std::vector<QFunctor> out;
  for (const auto& d : domains) {
    for (const auto& c : codomains) {
      for (auto& fn : enumerate_functors(d, c)) out.push_back(std::move(fn));
    }
  }
  return out;
}

}  // namespace qexp
