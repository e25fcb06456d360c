#include "qexp/quantaloid.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>

namespace qexp {

Quantaloid::Quantaloid(std::vector<std::string> objects,
                       std::vector<LatticePtr> homs,
                       const std::vector<ComposeTable>& compose,
                       std::vector<Elem> units)
    : n_(static_cast<int>(objects.size())),
      objects_(std::move(objects)),
      homs_(std::move(homs)),
      units_(std::move(units)) {
  if (n_ == 0) throw MalformedInput("quantaloid has no objects");
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if (objects_[i] == objects_[j]) {
        throw MalformedInput("duplicate quantaloid object " + objects_[i]);
      }
    }
  }
  if (static_cast<int>(homs_.size()) != n_ * n_) {
    throw MalformedInput("expected " + std::to_string(n_ * n_) +
                         " hom lattices");
  }
  for (const auto& h : homs_) {
    if (!h) throw MalformedInput("missing hom lattice");
  }
  if (static_cast<int>(units_.size()) != n_) {
    throw MalformedInput("expected one unit per object");
  }
  for (int x = 0; x < n_; ++x) {
    if (!hom(x, x).contains(units_[x])) {
      throw MalformedInput("unit of " + objects_[x] + " out of range");
    }
  }
  tables_.assign(static_cast<std::size_t>(n_) * n_ * n_, {});
  std::vector<bool> seen(tables_.size(), false);
  for (const auto& ct : compose) {
    if (ct.x < 0 || ct.x >= n_ || ct.y < 0 || ct.y >= n_ || ct.z < 0 ||
        ct.z >= n_) {
      throw MalformedInput("composition table for unknown object triple");
    }
    const std::string key =
        objects_[ct.x] + "->" + objects_[ct.y] + "->" + objects_[ct.z];
    const auto& fy = hom(ct.x, ct.y);
    const auto& gz = hom(ct.y, ct.z);
    const auto& out = hom(ct.x, ct.z);
    if (static_cast<int>(ct.table.size()) != gz.size()) {
      throw MalformedInput("composition table " + key + " has wrong row count");
    }
    std::size_t idx = (ct.x * n_ + ct.y) * n_ + ct.z;
    if (seen[idx]) throw MalformedInput("duplicate composition table " + key);
    seen[idx] = true;
    auto& flat = tables_[idx];
    flat.reserve(static_cast<std::size_t>(gz.size()) * fy.size());
    for (const auto& row : ct.table) {
      if (static_cast<int>(row.size()) != fy.size()) {
        throw MalformedInput("composition table " + key +
                             " has wrong column count");
      }
      for (Elem v : row) {
        if (!out.contains(v)) {
          throw MalformedInput("composition table " + key +
                               " has out-of-range entry " + std::to_string(v));
        }
        flat.push_back(v);
      }
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      int z = static_cast<int>(i % n_);
      int y = static_cast<int>((i / n_) % n_);
      int x = static_cast<int>(i / n_ / n_);
      throw MalformedInput("missing composition table " + objects_[x] + "->" +
                           objects_[y] + "->" + objects_[z]);
    }
  }
}

int Quantaloid::object_index(const std::string& name) const {
  auto it = std::find(objects_.begin(), objects_.end(), name);
  if (it == objects_.end()) {
    throw MalformedInput("unknown quantaloid object " + name);
  }
  return static_cast<int>(it - objects_.begin());
}

void Quantaloid::check_arrow(const QArrow& a) const {
  if (a.src < 0 || a.src >= n_ || a.tgt < 0 || a.tgt >= n_ ||
      !hom(a.src, a.tgt).contains(a.elem)) {
    throw MalformedInput("malformed Q-arrow");
  }
}

QArrow Quantaloid::compose(const QArrow& g, const QArrow& f) const {
  check_arrow(g);
  check_arrow(f);
  if (g.src != f.tgt) {
    throw NonComposable("cannot compose " + objects_[g.src] + "->" +
                        objects_[g.tgt] + " after " + objects_[f.src] + "->" +
                        objects_[f.tgt]);
  }
  return {f.src, g.tgt, compose(f.src, f.tgt, g.tgt, g.elem, f.elem)};
}

MonotoneMap Quantaloid::precompose_map(const QArrow& g, int z) const {
  check_arrow(g);
  const int x = g.src, y = g.tgt;
  std::vector<Elem> t(hom(y, z).size());
  for (int k = 0; k < hom(y, z).size(); ++k) t[k] = compose(x, y, z, k, g.elem);
  return MonotoneMap(hom_ptr(y, z), hom_ptr(x, z), std::move(t));
}

MonotoneMap Quantaloid::postcompose_map(const QArrow& g, int x) const {
  check_arrow(g);
  const int y = g.src, z = g.tgt;
  std::vector<Elem> t(hom(x, y).size());
  for (int k = 0; k < hom(x, y).size(); ++k) t[k] = compose(x, y, z, g.elem, k);
  return MonotoneMap(hom_ptr(x, y), hom_ptr(x, z), std::move(t));
}

QArrow Quantaloid::extension(const QArrow& g, const QArrow& h) const {
  check_arrow(g);
  check_arrow(h);
  if (g.src != h.src) throw NonComposable("extension needs a common source");
  auto adj = right_adjoint_of(precompose_map(g, h.tgt));
  return {g.tgt, h.tgt, adj(h.elem)};
}

QArrow Quantaloid::lifting(const QArrow& g, const QArrow& h) const {
  check_arrow(g);
  check_arrow(h);
  if (g.tgt != h.tgt) throw NonComposable("lifting needs a common target");
  auto adj = right_adjoint_of(postcompose_map(g, h.src));
  return {h.src, g.src, adj(h.elem)};
}

std::vector<Quantaloid::ComposeTable> Quantaloid::compose_tables() const {
  std::vector<ComposeTable> out;
  for (int x = 0; x < n_; ++x) {
    for (int y = 0; y < n_; ++y) {
      for (int z = 0; z < n_; ++z) {
        ComposeTable ct{x, y, z, {}};
        for (int g = 0; g < hom(y, z).size(); ++g) {
          std::vector<Elem> row(hom(x, y).size());
          for (int f = 0; f < hom(x, y).size(); ++f) {
            row[f] = compose(x, y, z, g, f);
          }
          ct.table.push_back(std::move(row));
        }
        out.push_back(std::move(ct));
      }
    }
  }
  return out;
}

int Quantaloid::max_hom_size() const {
  int m = 0;
  for (const auto& h : homs_) m = std::max(m, h->size());
  return m;
}

Report verify_quantaloid(const Quantaloid& q) {
  Report out;
  const int n = q.num_objects();
  auto obj = [&](int x) { return q.object_name(x); };
  auto el = [&](int x, int y, Elem e) { return q.hom(x, y).name(e); };

  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const auto& h = q.hom(x, y);
      for (Elem f = 0; f < h.size(); ++f) {
        if (q.compose(x, y, y, q.unit(y), f) != f) {
          out.push_back({"left-unit", "1_" + obj(y) + " . " + el(x, y, f) +
                                          " != " + el(x, y, f) + " in " +
                                          obj(x) + "->" + obj(y)});
        }
        if (q.compose(x, x, y, f, q.unit(x)) != f) {
          out.push_back({"right-unit", el(x, y, f) + " . 1_" + obj(x) +
                                           " != " + el(x, y, f) + " in " +
                                           obj(x) + "->" + obj(y)});
        }
      }
    }
  }

  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      for (int z = 0; z < n; ++z) {
        const auto& fxy = q.hom(x, y);
        const auto& gyz = q.hom(y, z);
        const auto& out_l = q.hom(x, z);
        const std::string triple = obj(x) + "->" + obj(y) + "->" + obj(z);
        // Zero laws.
        for (Elem f = 0; f < fxy.size(); ++f) {
          if (q.compose(x, y, z, gyz.bottom(), f) != out_l.bottom()) {
            out.push_back({"zero-left", "0 . " + el(x, y, f) + " != 0 in " +
                                            triple});
          }
        }
        for (Elem g = 0; g < gyz.size(); ++g) {
          if (q.compose(x, y, z, g, fxy.bottom()) != out_l.bottom()) {
            out.push_back({"zero-right", el(y, z, g) + " . 0 != 0 in " +
                                             triple});
          }
        }
        // Binary joins in each variable.
        for (Elem g = 0; g < gyz.size(); ++g) {
          for (Elem f1 = 0; f1 < fxy.size(); ++f1) {
            for (Elem f2 = f1 + 1; f2 < fxy.size(); ++f2) {
              Elem lhs = q.compose(x, y, z, g, fxy.join(f1, f2));
              Elem rhs = out_l.join(q.compose(x, y, z, g, f1),
                                    q.compose(x, y, z, g, f2));
              if (lhs != rhs) {
                out.push_back({"join-right", el(y, z, g) + " . (" +
                                                 el(x, y, f1) + " v " +
                                                 el(x, y, f2) + ") in " +
                                                 triple});
              }
            }
          }
        }
        for (Elem f = 0; f < fxy.size(); ++f) {
          for (Elem g1 = 0; g1 < gyz.size(); ++g1) {
            for (Elem g2 = g1 + 1; g2 < gyz.size(); ++g2) {
              Elem lhs = q.compose(x, y, z, gyz.join(g1, g2), f);
              Elem rhs = out_l.join(q.compose(x, y, z, g1, f),
                                    q.compose(x, y, z, g2, f));
              if (lhs != rhs) {
                out.push_back({"join-left", "(" + el(y, z, g1) + " v " +
                                                el(y, z, g2) + ") . " +
                                                el(x, y, f) + " in " + triple});
              }
            }
          }
        }
        // Associativity against every fourth object.
        for (int w = 0; w < n; ++w) {
          const auto& hwx = q.hom(w, x);
          for (Elem h = 0; h < gyz.size(); ++h) {
            for (Elem g = 0; g < fxy.size(); ++g) {
              Elem hg = q.compose(x, y, z, h, g);
              for (Elem f = 0; f < hwx.size(); ++f) {
                Elem lhs = q.compose(w, x, z, hg, f);
                Elem rhs = q.compose(w, y, z, h, q.compose(w, x, y, g, f));
                if (lhs != rhs) {
                  out.push_back(
                      {"associativity",
                       "(" + el(y, z, h) + " . " + el(x, y, g) + ") . " +
                           el(w, x, f) + " in " + obj(w) + "->" + triple});
                }
              }
            }
          }
        }
      }
    }
  }
  return out;
}

Monoid Monoid::cyclic(int n) {
  if (n < 1) throw MalformedInput("cyclic monoid needs n >= 1");
  Monoid m;
  m.size = n;
  m.identity = 0;
  m.table.resize(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) m.table[a * n + b] = (a + b) % n;
  }
  return m;
}

namespace {

QuantaloidPtr one_object(std::string name, LatticePtr hom,
                         std::vector<std::vector<Elem>> table, Elem unit) {
  Quantaloid::ComposeTable ct{0, 0, 0, std::move(table)};
  return std::make_shared<const Quantaloid>(
      std::vector<std::string>{std::move(name)}, std::vector<LatticePtr>{hom},
      std::vector<Quantaloid::ComposeTable>{ct}, std::vector<Elem>{unit});
}

LatticePtr powerset_lattice(int k, const std::vector<std::string>& atoms) {
  const int n = 1 << k;
  std::vector<std::string> names;
  for (int s = 0; s < n; ++s) {
    std::string nm = "{";
    bool first = true;
    for (int i = 0; i < k; ++i) {
      if (s & (1 << i)) {
        if (!first) nm += ",";
        nm += atoms[i];
        first = false;
      }
    }
    names.push_back(nm + "}");
  }
  std::vector<std::pair<int, int>> leq;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if ((a & b) == a) leq.emplace_back(a, b);
    }
  }
  return std::make_shared<const FiniteLattice>(std::move(names), leq);
}

}  // namespace

QuantaloidPtr boolean_quantale() {
  auto l = std::make_shared<const FiniteLattice>(
      std::vector<std::string>{"0", "1"},
      std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 1}});
  return one_object("*", l, {{0, 0}, {0, 1}}, 1);
}

QuantaloidPtr chain_quantale(int n) {
  if (n < 1) throw MalformedInput("chain quantale needs n >= 1");
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> leq;
  for (int i = 0; i <= n; ++i) {
    names.push_back(std::to_string(i));
    // Reverse order: larger distance is lower.
    for (int j = 0; j <= i; ++j) leq.emplace_back(i, j);
  }
  auto l = std::make_shared<const FiniteLattice>(std::move(names), leq);
  std::vector<std::vector<Elem>> table(n + 1, std::vector<Elem>(n + 1));
  for (int g = 0; g <= n; ++g) {
    for (int f = 0; f <= n; ++f) table[g][f] = std::min(g + f, n);
  }
  return one_object("*", l, std::move(table), 0);
}

QuantaloidPtr powerset_monoid_quantale(const Monoid& m) {
  const int k = m.size;
  if (k < 1 || k > 4) throw MalformedInput("monoid size must be in 1..4");
  if (static_cast<int>(m.table.size()) != k * k) {
    throw MalformedInput("monoid table has wrong size");
  }
  for (int v : m.table) {
    if (v < 0 || v >= k) throw MalformedInput("monoid table entry out of range");
  }
  if (m.identity < 0 || m.identity >= k) {
    throw MalformedInput("monoid identity out of range");
  }
  for (int a = 0; a < k; ++a) {
    if (m.table[m.identity * k + a] != a || m.table[a * k + m.identity] != a) {
      throw MalformedInput("monoid identity law fails");
    }
    for (int b = 0; b < k; ++b) {
      for (int c = 0; c < k; ++c) {
        if (m.table[m.table[a * k + b] * k + c] !=
            m.table[a * k + m.table[b * k + c]]) {
          throw MalformedInput("monoid is not associative");
        }
      }
    }
  }
  std::vector<std::string> atoms;
  for (int i = 0; i < k; ++i) atoms.push_back("m" + std::to_string(i));
  auto l = powerset_lattice(k, atoms);
  const int n = 1 << k;
  std::vector<std::vector<Elem>> table(n, std::vector<Elem>(n, 0));
  for (int g = 0; g < n; ++g) {
    for (int f = 0; f < n; ++f) {
      int r = 0;
      for (int x = 0; x < k; ++x) {
        if (!(g & (1 << x))) continue;
        for (int y = 0; y < k; ++y) {
          if (f & (1 << y)) r |= 1 << m.table[x * k + y];
        }
      }
      table[g][f] = r;
    }
  }
  return one_object("*", l, std::move(table), 1 << m.identity);
}

QuantaloidPtr free_quantaloid_on_graph(const Graph& g, int max_hom_size) {
  const int n = static_cast<int>(g.vertices.size());
  if (n == 0) throw MalformedInput("graph has no vertices");
  for (auto [s, t] : g.edges) {
    if (s < 0 || s >= n || t < 0 || t >= n) {
      throw MalformedInput("graph edge out of range");
    }
  }
  // Paths as edge-index sequences; the empty path at X is its identity.
  using Path = std::vector<int>;
  std::vector<std::vector<Path>> paths(static_cast<std::size_t>(n) * n);
  std::function<void(int, int, Path&, int)> walk = [&](int start, int v,
                                                       Path& p, int depth) {
    if (depth > n) throw MalformedInput("graph has a cycle");
    paths[start * n + v].push_back(p);
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      if (g.edges[e].first != v) continue;
      p.push_back(e);
      walk(start, g.edges[e].second, p, depth + 1);
      p.pop_back();
    }
  };
  for (int x = 0; x < n; ++x) {
    Path p;
    walk(x, x, p, 0);
  }
  std::vector<LatticePtr> homs(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const auto& ps = paths[x * n + y];
      const int k = static_cast<int>(ps.size());
      if (k > 16 || (1 << k) > max_hom_size) {
        throw MalformedInput("free quantaloid hom " + g.vertices[x] + "->" +
                             g.vertices[y] + " too large");
      }
      std::vector<std::string> atoms;
      for (const auto& p : ps) {
        std::string nm = "[";
        for (std::size_t i = 0; i < p.size(); ++i) {
          if (i) nm += ";";
          nm += "e" + std::to_string(p[i]);
        }
        atoms.push_back(nm + "]");
      }
      homs[x * n + y] = powerset_lattice(k, atoms);
    }
  }
  auto index_of = [&](int x, int y, const Path& p) {
    const auto& ps = paths[x * n + y];
    return static_cast<int>(std::find(ps.begin(), ps.end(), p) - ps.begin());
  };
  std::vector<Quantaloid::ComposeTable> tables;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      for (int z = 0; z < n; ++z) {
        const auto& pf = paths[x * n + y];
        const auto& pg = paths[y * n + z];
        Quantaloid::ComposeTable ct{x, y, z, {}};
        const int nf = 1 << pf.size();
        const int ng = 1 << pg.size();
        ct.table.assign(ng, std::vector<Elem>(nf, 0));
        for (int gs = 0; gs < ng; ++gs) {
          for (int fs = 0; fs < nf; ++fs) {
            int r = 0;
            for (std::size_t i = 0; i < pg.size(); ++i) {
              if (!(gs & (1 << i))) continue;
              for (std::size_t j = 0; j < pf.size(); ++j) {
                if (!(fs & (1 << j))) continue;
                Path cat = pf[j];
                cat.insert(cat.end(), pg[i].begin(), pg[i].end());
                r |= 1 << index_of(x, z, cat);
              }
            }
            ct.table[gs][fs] = r;
          }
        }
        tables.push_back(std::move(ct));
      }
    }
  }
  std::vector<Elem> units(n);
  for (int x = 0; x < n; ++x) units[x] = 1 << index_of(x, x, Path{});
  return std::make_shared<const Quantaloid>(g.vertices, std::move(homs),
                                            tables, std::move(units));
}

QuantaloidPtr endo_quantale(const FiniteLattice& l) {
  const int n = l.size();
  // Enumerate all maps preserving bottom and binary joins by backtracking
  // over element images in index order.
  std::vector<std::vector<Elem>> maps;
  std::vector<Elem> img(n, -1);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      maps.push_back(img);
      return;
    }
    for (Elem v = 0; v < n; ++v) {
      img[i] = v;
      bool ok = true;
      if (i == l.bottom() && v != l.bottom()) ok = false;
      for (int j = 0; ok && j <= i; ++j) {
        Elem jn = l.join(i, j);
        if (jn <= i && img[jn] != l.join(img[i], img[j])) ok = false;
        if (!ok) break;
        // Monotonicity against already assigned elements.
        if (l.leq(j, i) && !l.leq(img[j], v)) ok = false;
        if (l.leq(i, j) && !l.leq(v, img[j])) ok = false;
      }
      if (ok) rec(i + 1);
    }
    img[i] = -1;
  };
  rec(0);
  // Joins whose result index exceeds both operands were skipped above.
  std::erase_if(maps, [&](const std::vector<Elem>& m) {
    if (m[l.bottom()] != l.bottom()) return true;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (m[l.join(a, b)] != l.join(m[a], m[b])) return true;
      }
    }
    return false;
  });
  const int k = static_cast<int>(maps.size());
  std::map<std::vector<Elem>, int> index;
  std::vector<std::string> names;
  for (int i = 0; i < k; ++i) {
    index[maps[i]] = i;
    std::string nm = "[";
    for (int a = 0; a < n; ++a) {
      if (a) nm += ",";
      nm += l.name(maps[i][a]);
    }
    names.push_back(nm + "]");
  }
  std::vector<std::pair<int, int>> leq;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      bool le = true;
      for (int a = 0; a < n && le; ++a) le = l.leq(maps[i][a], maps[j][a]);
      if (le) leq.emplace_back(i, j);
    }
  }
  auto hom = std::make_shared<const FiniteLattice>(std::move(names), leq);
  std::vector<std::vector<Elem>> table(k, std::vector<Elem>(k));
  for (int g = 0; g < k; ++g) {
    for (int f = 0; f < k; ++f) {
      std::vector<Elem> c(n);
      for (int a = 0; a < n; ++a) c[a] = maps[g][maps[f][a]];
      table[g][f] = index.at(c);
    }
  }
  std::vector<Elem> id(n);
  for (int a = 0; a < n; ++a) id[a] = a;
  return one_object("*", hom, std::move(table), index.at(id));
}

FiniteLattice diamond_m3() {
  // 0 = bot, 1 = x, 2 = y, 3 = z, 4 = top
  std::vector<std::pair<int, int>> leq;
  for (int i = 0; i < 5; ++i) {
    leq.emplace_back(i, i);
    if (i != 0) leq.emplace_back(0, i);
    if (i != 4) leq.emplace_back(i, 4);
  }
  return FiniteLattice({"bot", "x", "y", "z", "top"}, leq);
}

FiniteLattice pentagon_n5() {
  // 0 = bot, 1 = a, 2 = b, 3 = c, 4 = top; a < c, b incomparable to both.
  std::vector<std::pair<int, int>> leq;
  for (int i = 0; i < 5; ++i) {
    leq.emplace_back(i, i);
    if (i != 0) leq.emplace_back(0, i);
    if (i != 4) leq.emplace_back(i, 4);
  }
  leq.emplace_back(1, 3);
  return FiniteLattice({"bot", "a", "b", "c", "top"}, leq);
}

}  // namespace qexp
