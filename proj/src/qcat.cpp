#include "qexp/qcat.hpp"

#include <algorithm>
#include <string>

namespace qexp {

QCategory::QCategory(QuantaloidPtr base, std::vector<std::string> names,
                     std::vector<int> types, std::vector<Elem> entries)
    : base_(std::move(base)),
      names_(std::move(names)),
      types_(std::move(types)),
      hom_(std::move(entries)) {
  if (!base_) throw MalformedInput("category without base quantaloid");
  const int n = size();
  if (static_cast<int>(names_.size()) != n) {
    throw MalformedInput("category name list does not match object count");
  }
  for (int t : types_) {
    if (t < 0 || t >= base_->num_objects()) {
      throw MalformedInput("category object type out of range");
    }
  }
  if (static_cast<int>(hom_.size()) != n * n) {
    throw MalformedInput("category hom matrix must be " + std::to_string(n) +
                         "x" + std::to_string(n));
  }
  for (int to = 0; to < n; ++to) {
    for (int from = 0; from < n; ++from) {
      if (!hom_lattice(to, from).contains(hom(to, from))) {
        throw MalformedInput("hom entry (" + names_[to] + "," + names_[from] +
                             ") out of range");
      }
    }
  }
}

QCategory QCategory::with_hom(int to, int from, Elem value) const {
  auto h = hom_;
  h[to * size() + from] = value;
  return QCategory(base_, names_, types_, std::move(h));
}

bool QMatrix::leq(const QMatrix& other) const {
  for (int r = 0; r < rows(); ++r) {
    for (int c = 0; c < cols(); ++c) {
      if (!lattice(r, c).leq(at(r, c), other.at(r, c))) return false;
    }
  }
  return true;
}

Report verify_category(const QCategory& a) {
  Report out;
  const auto& q = a.base();
  const int n = a.size();
  for (int x = 0; x < n; ++x) {
    if (!a.hom_lattice(x, x).leq(q.unit(a.type(x)), a.hom(x, x))) {
      out.push_back({"identity", "1 <= A(" + a.name(x) + "," + a.name(x) +
                                     ") fails"});
    }
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      for (int z = 0; z < n; ++z) {
        Elem c = q.compose(a.type(x), a.type(y), a.type(z), a.hom(z, y),
                           a.hom(y, x));
        if (!a.hom_lattice(z, x).leq(c, a.hom(z, x))) {
          out.push_back({"composition", "A(" + a.name(z) + "," + a.name(y) +
                                            ") . A(" + a.name(y) + "," +
                                            a.name(x) + ") <= A(" + a.name(z) +
                                            "," + a.name(x) + ") fails"});
        }
      }
    }
  }
  return out;
}

Report verify_functor(const QFunctor& f) {
  Report out;
  const auto& a = *f.dom;
  const auto& b = *f.cod;
  if (a.base_ptr() != b.base_ptr()) {
    out.push_back({"base", "domain and codomain over different quantaloids"});
    return out;
  }
  if (static_cast<int>(f.map.size()) != a.size()) {
    out.push_back({"shape", "object map has wrong length"});
    return out;
  }
  for (int x = 0; x < a.size(); ++x) {
    if (f.map[x] < 0 || f.map[x] >= b.size()) {
      out.push_back({"shape", "object " + a.name(x) + " mapped out of range"});
      return out;
    }
    if (b.type(f.map[x]) != a.type(x)) {
      out.push_back({"type", "object " + a.name(x) + " changes type"});
    }
  }
  if (!out.empty()) return out;
  for (int to = 0; to < a.size(); ++to) {
    for (int from = 0; from < a.size(); ++from) {
      if (!a.hom_lattice(to, from)
               .leq(a.hom(to, from), b.hom(f.map[to], f.map[from]))) {
        out.push_back({"hom", "A(" + a.name(to) + "," + a.name(from) +
                                  ") <= B(F" + a.name(to) + ",F" +
                                  a.name(from) + ") fails"});
      }
    }
  }
  return out;
}

Report verify_distributor(const QDistributor& d) {
  Report out;
  const auto& x = *d.dom;
  const auto& y = *d.cod;
  const auto& m = d.matrix;
  if (m.row_types != y.types() || m.col_types != x.types()) {
    out.push_back({"shape", "matrix types do not match dom/cod"});
    return out;
  }
  const auto& q = x.base();
  for (int yi = 0; yi < y.size(); ++yi) {
    for (int xi = 0; xi < x.size(); ++xi) {
      const auto& lat = m.lattice(yi, xi);
      for (int x1 = 0; x1 < x.size(); ++x1) {
        Elem c = q.compose(x.type(xi), x.type(x1), y.type(yi), m.at(yi, x1),
                           x.hom(x1, xi));
        if (!lat.leq(c, m.at(yi, xi))) {
          out.push_back({"right-action", "Phi(" + y.name(yi) + "," +
                                             x.name(x1) + ") . X(" +
                                             x.name(x1) + "," + x.name(xi) +
                                             ") <= Phi(" + y.name(yi) + "," +
                                             x.name(xi) + ") fails"});
        }
      }
      for (int y1 = 0; y1 < y.size(); ++y1) {
        Elem c = q.compose(x.type(xi), y.type(y1), y.type(yi), y.hom(yi, y1),
                           m.at(y1, xi));
        if (!lat.leq(c, m.at(yi, xi))) {
          out.push_back({"left-action", "Y(" + y.name(yi) + "," + y.name(y1) +
                                            ") . Phi(" + y.name(y1) + "," +
                                            x.name(xi) + ") <= Phi(" +
                                            y.name(yi) + "," + x.name(xi) +
                                            ") fails"});
        }
      }
    }
  }
  return out;
}

CategoryPtr terminal(const QuantaloidPtr& q) {
  const int n = q->num_objects();
  std::vector<int> types(n);
  std::vector<Elem> hom(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x) {
    types[x] = x;
    for (int y = 0; y < n; ++y) hom[y * n + x] = q->top(x, y);
  }
  return make_category(q, q->object_names(), std::move(types), std::move(hom));
}

CategoryPtr one_object(const QuantaloidPtr& q, int x) {
  return make_category(q, std::vector<std::string>{"*" + q->object_name(x)},
                       std::vector<int>{x}, std::vector<Elem>{q->unit(x)});
}

QFunctor point(const CategoryPtr& b_cat, int b) {
  return {one_object(b_cat->base_ptr(), b_cat->type(b)), b_cat, {b}};
}

QFunctor identity_functor(const CategoryPtr& a) {
  std::vector<int> m(a->size());
  for (int i = 0; i < a->size(); ++i) m[i] = i;
  return {a, a, std::move(m)};
}

QFunctor compose_functors(const QFunctor& g, const QFunctor& f) {
  if (!(f.cod == g.dom || *f.cod == *g.dom)) {
    throw NonComposable("functor codomain does not match domain");
  }
  std::vector<int> m(f.map.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = g.map[f.map[i]];
  return {f.dom, g.cod, std::move(m)};
}

QFunctor to_terminal(const CategoryPtr& a, const CategoryPtr& t) {
  return {a, t, a->types()};
}

std::optional<int> Pullback::index_of(int a, int b) const {
  auto it = std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(a, b));
  if (it == pairs.end() || *it != std::make_pair(a, b)) return std::nullopt;
  return static_cast<int>(it - pairs.begin());
}

Pullback pullback(const QFunctor& f, const QFunctor& g) {
  if (!(f.cod == g.cod || *f.cod == *g.cod)) {
    throw NonComposable("pullback needs a common codomain");
  }
  const auto& a = *f.dom;
  const auto& b = *g.dom;
  Pullback pb;
  for (int x = 0; x < a.size(); ++x) {
    for (int y = 0; y < b.size(); ++y) {
      if (f.map[x] == g.map[y]) pb.pairs.emplace_back(x, y);
    }
  }
  const int n = static_cast<int>(pb.pairs.size());
  std::vector<std::string> names;
  std::vector<int> types;
  for (auto [x, y] : pb.pairs) {
    names.push_back("(" + a.name(x) + "," + b.name(y) + ")");
    types.push_back(a.type(x));
  }
  std::vector<Elem> hom(static_cast<std::size_t>(n) * n);
  std::vector<int> pa(n), pbm(n);
  for (int i = 0; i < n; ++i) {
    pa[i] = pb.pairs[i].first;
    pbm[i] = pb.pairs[i].second;
    for (int j = 0; j < n; ++j) {
      const auto& lat = a.hom_lattice(pb.pairs[i].first, pb.pairs[j].first);
      hom[i * n + j] = lat.meet(a.hom(pb.pairs[i].first, pb.pairs[j].first),
                                b.hom(pb.pairs[i].second, pb.pairs[j].second));
    }
  }
  pb.cat = make_category(a.base_ptr(), std::move(names), std::move(types),
                         std::move(hom));
  pb.proj_a = {pb.cat, f.dom, std::move(pa)};
  pb.proj_b = {pb.cat, g.dom, std::move(pbm)};
  return pb;
}

std::optional<int> Fiber::position_of(int a) const {
  auto it = std::find(members.begin(), members.end(), a);
  if (it == members.end()) return std::nullopt;
  return static_cast<int>(it - members.begin());
}

Fiber fiber(const QFunctor& f, int b) {
  const auto& a = *f.dom;
  const auto& q = a.base();
  Fiber fb;
  fb.base_object = b;
  for (int x = 0; x < a.size(); ++x) {
    if (f.map[x] == b) fb.members.push_back(x);
  }
  const int n = static_cast<int>(fb.members.size());
  const int tb = f.cod->type(b);
  const auto& lat = q.hom(tb, tb);
  std::vector<std::string> names;
  std::vector<Elem> hom(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    names.push_back(a.name(fb.members[i]));
    for (int j = 0; j < n; ++j) {
      hom[i * n + j] =
          lat.meet(q.unit(tb), a.hom(fb.members[i], fb.members[j]));
    }
  }
  fb.cat = make_category(a.base_ptr(), std::move(names),
                         std::vector<int>(n, tb), std::move(hom));
  return fb;
}

QMatrix zero_matrix(const QuantaloidPtr& q, std::vector<int> row_types,
                    std::vector<int> col_types) {
  QMatrix m{q, std::move(row_types), std::move(col_types), {}};
  m.entries.resize(static_cast<std::size_t>(m.rows()) * m.cols());
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) m.at(r, c) = m.lattice(r, c).bottom();
  }
  return m;
}

QMatrix top_matrix(const QuantaloidPtr& q, std::vector<int> row_types,
                   std::vector<int> col_types) {
  QMatrix m = zero_matrix(q, std::move(row_types), std::move(col_types));
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) m.at(r, c) = m.lattice(r, c).top();
  }
  return m;
}

QDistributor zero_distributor(const CategoryPtr& dom, const CategoryPtr& cod) {
  return {dom, cod, zero_matrix(dom->base_ptr(), cod->types(), dom->types())};
}

QDistributor top_distributor(const CategoryPtr& dom, const CategoryPtr& cod) {
  return {dom, cod, top_matrix(dom->base_ptr(), cod->types(), dom->types())};
}

QDistributor hom_distributor(const CategoryPtr& a) {
  QMatrix m{a->base_ptr(), a->types(), a->types(), a->hom_matrix()};
  return {a, a, std::move(m)};
}

QMatrix compose_matrices(const QMatrix& m2, const QMatrix& m1) {
  if (m2.col_types != m1.row_types) {
    throw NonComposable("matrix middle types do not match");
  }
  const auto& q = *m1.base;
  QMatrix out = zero_matrix(m1.base, m2.row_types, m1.col_types);
  for (int r = 0; r < out.rows(); ++r) {
    for (int c = 0; c < out.cols(); ++c) {
      const auto& lat = out.lattice(r, c);
      Elem acc = lat.bottom();
      for (int k = 0; k < m1.rows(); ++k) {
        acc = lat.join(acc, q.compose(m1.col_types[c], m1.row_types[k],
                                      m2.row_types[r], m2.at(r, k),
                                      m1.at(k, c)));
      }
      out.at(r, c) = acc;
    }
  }
  return out;
}

QDistributor compose_distributors(const QDistributor& psi,
                                  const QDistributor& phi) {
  if (!(phi.cod == psi.dom || *phi.cod == *psi.dom)) {
    throw NonComposable("distributor codomain does not match domain");
  }
  return {phi.dom, psi.cod, compose_matrices(psi.matrix, phi.matrix)};
}

QDistributor distributor_closure(const CategoryPtr& dom, const CategoryPtr& cod,
                                 const QMatrix& m) {
  auto ym = compose_matrices(hom_distributor(cod).matrix, m);
  return {dom, cod, compose_matrices(ym, hom_distributor(dom).matrix)};
}

QDistributor cospan_distributor(const QFunctor& s, const QFunctor& t) {
  if (!(s.cod == t.cod || *s.cod == *t.cod)) {
    throw NonComposable("co-span legs need a common codomain");
  }
  const auto& c = *s.cod;
  QMatrix m{c.base_ptr(), t.dom->types(), s.dom->types(), {}};
  m.entries.resize(static_cast<std::size_t>(m.rows()) * m.cols());
  for (int y = 0; y < m.rows(); ++y) {
    for (int x = 0; x < m.cols(); ++x) m.at(y, x) = c.hom(t.map[y], s.map[x]);
  }
  return {s.dom, t.dom, std::move(m)};
}

void for_each_distributor(const CategoryPtr& dom, const CategoryPtr& cod,
                          const std::function<bool(const QMatrix&)>& visit) {
  const auto& x = *dom;
  const auto& y = *cod;
  const auto& q = x.base();
  QMatrix m = zero_matrix(x.base_ptr(), y.types(), x.types());
  const int nx = x.size();
  const int total = m.rows() * nx;
  bool stop = false;
  // Entry p = (yi, xi) is consistent with every earlier entry in its row and
  // column (and with itself).
  auto consistent = [&](int yi, int xi, int p) {
    const auto& lat = m.lattice(yi, xi);
    for (int x1 = 0; x1 < nx; ++x1) {
      const int p1 = yi * nx + x1;
      if (p1 > p) continue;
      if (!lat.leq(q.compose(x.type(xi), x.type(x1), y.type(yi), m.at(yi, x1),
                             x.hom(x1, xi)),
                   m.at(yi, xi))) {
        return false;
      }
      const auto& lat1 = m.lattice(yi, x1);
      if (!lat1.leq(q.compose(x.type(x1), x.type(xi), y.type(yi), m.at(yi, xi),
                              x.hom(xi, x1)),
                    m.at(yi, x1))) {
        return false;
      }
    }
    for (int y1 = 0; y1 < m.rows(); ++y1) {
      const int p1 = y1 * nx + xi;
      if (p1 > p) continue;
      if (!lat.leq(q.compose(x.type(xi), y.type(y1), y.type(yi), y.hom(yi, y1),
                             m.at(y1, xi)),
                   m.at(yi, xi))) {
        return false;
      }
      const auto& lat1 = m.lattice(y1, xi);
      if (!lat1.leq(q.compose(x.type(xi), y.type(yi), y.type(y1), y.hom(y1, yi),
                              m.at(yi, xi)),
                    m.at(y1, xi))) {
        return false;
      }
    }
    return true;
  };
  std::function<void(int)> rec = [&](int p) {
    if (stop) return;
    if (p == total) {
      if (!visit(m)) stop = true;
      return;
    }
    const int yi = p / nx, xi = p % nx;
    const int sz = m.lattice(yi, xi).size();
    for (Elem v = 0; v < sz && !stop; ++v) {
      m.at(yi, xi) = v;
      if (consistent(yi, xi, p)) rec(p + 1);
    }
  };
  rec(0);
}

std::vector<QMatrix> enumerate_distributors(const CategoryPtr& dom,
                                            const CategoryPtr& cod) {
  std::vector<QMatrix> out;
  for_each_distributor(dom, cod, [&](const QMatrix& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

namespace {

std::vector<std::string> prefixed(const std::string& p, const QCategory& a) {
  std::vector<std::string> out;
  for (const auto& n : a.names()) out.push_back(p + n);
  return out;
}

}  // namespace

Collage collage(const QDistributor& phi) {
  const auto& x = *phi.dom;
  const auto& y = *phi.cod;
  const auto& q = x.base();
  const int nx = x.size(), ny = y.size(), n = nx + ny;
  auto names = prefixed("s.", x);
  for (auto& s : prefixed("t.", y)) names.push_back(std::move(s));
  std::vector<int> types = x.types();
  types.insert(types.end(), y.types().begin(), y.types().end());
  std::vector<Elem> hom(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Elem v;
      if (i < nx && j < nx) {
        v = x.hom(i, j);
      } else if (i >= nx && j >= nx) {
        v = y.hom(i - nx, j - nx);
      } else if (i >= nx) {
        v = phi(i - nx, j);
      } else {
        v = q.zero(types[j], types[i]);
      }
      hom[i * n + j] = v;
    }
  }
  auto c = make_category(x.base_ptr(), std::move(names), std::move(types),
                         std::move(hom));
  std::vector<int> sx(nx), sy(ny);
  for (int i = 0; i < nx; ++i) sx[i] = i;
  for (int i = 0; i < ny; ++i) sy[i] = nx + i;
  return {c, {phi.dom, c, std::move(sx)}, {phi.cod, c, std::move(sy)}};
}

CategoryPtr arrow_category(const QuantaloidPtr& q, const QArrow& f) {
  if (f.src < 0 || f.src >= q->num_objects() || f.tgt < 0 ||
      f.tgt >= q->num_objects() || !q->hom(f.src, f.tgt).contains(f.elem)) {
    throw MalformedInput("malformed Q-arrow");
  }
  std::vector<Elem> hom{q->unit(f.src), q->zero(f.tgt, f.src), f.elem,
                        q->unit(f.tgt)};
  return make_category(q,
                       std::vector<std::string>{"X:" + q->object_name(f.src),
                                                "Y:" + q->object_name(f.tgt)},
                       std::vector<int>{f.src, f.tgt}, std::move(hom));
}

TripleCollage triple_collage(const QDistributor& phi, const QDistributor& psi) {
  auto comp = compose_distributors(psi, phi);
  const auto& a = *phi.dom;
  const auto& b = *phi.cod;
  const auto& c = *psi.cod;
  const auto& q = a.base();
  const int na = a.size(), nb = b.size(), nc = c.size();
  const int n = na + nb + nc;
  auto names = prefixed("s.", a);
  for (auto& s : prefixed("t.", b)) names.push_back(std::move(s));
  for (auto& s : prefixed("u.", c)) names.push_back(std::move(s));
  std::vector<int> types = a.types();
  types.insert(types.end(), b.types().begin(), b.types().end());
  types.insert(types.end(), c.types().begin(), c.types().end());
  auto block = [&](int i) { return i < na ? 0 : (i < na + nb ? 1 : 2); };
  auto local = [&](int i) {
    return i < na ? i : (i < na + nb ? i - na : i - na - nb);
  };
  std::vector<Elem> hom(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int bi = block(i), bj = block(j);
      const int li = local(i), lj = local(j);
      Elem v;
      if (bi == bj) {
        v = bi == 0 ? a.hom(li, lj) : (bi == 1 ? b.hom(li, lj) : c.hom(li, lj));
      } else if (bi == 1 && bj == 0) {
        v = phi(li, lj);
      } else if (bi == 2 && bj == 1) {
        v = psi(li, lj);
      } else if (bi == 2 && bj == 0) {
        v = comp(li, lj);
      } else {
        v = q.zero(types[j], types[i]);
      }
      hom[i * n + j] = v;
    }
  }
  auto cat = make_category(a.base_ptr(), std::move(names), std::move(types),
                           std::move(hom));
  std::vector<int> s(na), t(nb), u(nc);
  for (int i = 0; i < na; ++i) s[i] = i;
  for (int i = 0; i < nb; ++i) t[i] = na + i;
  for (int i = 0; i < nc; ++i) u[i] = na + nb + i;
  return {cat,
          {phi.dom, cat, std::move(s)},
          {phi.cod, cat, std::move(t)},
          {psi.cod, cat, std::move(u)}};
}

void for_each_functor_map(
    const QCategory& a, const QCategory& b,
    const std::function<bool(const std::vector<int>&)>& visit) {
  const int na = a.size(), nb = b.size();
  std::vector<int> m(na, -1);
  bool stop = false;
  std::function<void(int)> rec = [&](int i) {
    if (stop) return;
    if (i == na) {
      if (!visit(m)) stop = true;
      return;
    }
    for (int j = 0; j < nb && !stop; ++j) {
      if (b.type(j) != a.type(i)) continue;
      m[i] = j;
      bool ok = true;
      for (int k = 0; k <= i && ok; ++k) {
        ok = a.hom_lattice(i, k).leq(a.hom(i, k), b.hom(j, m[k])) &&
             a.hom_lattice(k, i).leq(a.hom(k, i), b.hom(m[k], j));
      }
      if (ok) rec(i + 1);
    }
    m[i] = -1;
  };
  rec(0);
}

std::vector<QFunctor> enumerate_functors(const CategoryPtr& a,
                                         const CategoryPtr& b) {
  std::vector<QFunctor> out;
  for_each_functor_map(*a, *b, [&](const std::vector<int>& m) {
    out.push_back({a, b, m});
    return true;
  });
  return out;
}

std::optional<std::vector<int>> find_isomorphism(const QCategory& a,
                                                 const QCategory& b) {
  if (a.size() != b.size() || a.base_ptr() != b.base_ptr()) return std::nullopt;
  const int n = a.size();
  std::vector<int> m(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(int)> rec = [&](int i) {
    if (i == n) return true;
    for (int j = 0; j < n; ++j) {
      if (used[j] || b.type(j) != a.type(i)) continue;
      m[i] = j;
      bool ok = true;
      for (int k = 0; k <= i && ok; ++k) {
        ok = a.hom(i, k) == b.hom(j, m[k]) && a.hom(k, i) == b.hom(m[k], j);
      }
      if (!ok) continue;
      used[j] = true;
      if (rec(i + 1)) return true;
      used[j] = false;
    }
    m[i] = -1;
    return false;
  };
  if (rec(0)) return m;
  return std::nullopt;
}

CategoryPtr full_subcategory(const QCategory& a,
                             const std::vector<int>& objects) {
  const int n = static_cast<int>(objects.size());
  std::vector<std::string> names;
  std::vector<int> types;
  std::vector<Elem> hom(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    names.push_back(a.name(objects[i]));
    types.push_back(a.type(objects[i]));
    for (int j = 0; j < n; ++j) hom[i * n + j] = a.hom(objects[i], objects[j]);
  }
  return make_category(a.base_ptr(), std::move(names), std::move(types),
                       std::move(hom));
}

}  // namespace qexp
