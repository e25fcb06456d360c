#include "qexp/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qexp {

namespace {

const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw MalformedInput(where + ": missing \"" + key + "\"");
  }
  return j.at(key);
}

int as_index(const Json& j, int size, const std::string& where) {
  if (!j.is_number_integer()) throw MalformedInput(where + ": expected an index");
  const int v = j.get<int>();
  if (v < 0 || v >= size) {
    throw MalformedInput(where + ": index " + std::to_string(v) +
                         " out of range");
  }
  return v;
}

std::vector<std::vector<Elem>> as_matrix(const Json& j, int rows, int cols,
                                         const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    throw MalformedInput(where + ": expected " + std::to_string(rows) + " rows");
  }
  std::vector<std::vector<Elem>> out;
  for (int r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw MalformedInput(where + ": row " + std::to_string(r) + " needs " +
                           std::to_string(cols) + " entries");
    }
    std::vector<Elem> v;
    for (const auto& e : row) {
      if (!e.is_number_integer()) {
        throw MalformedInput(where + ": entries must be element indices");
      }
      v.push_back(e.get<int>());
    }
    out.push_back(std::move(v));
  }
  return out;
}

FiniteLattice parse_lattice(const Json& j, const std::string& where) {
  std::vector<std::string> names;
  for (const auto& e : need(j, "elements", where)) names.push_back(e.get<std::string>());
  std::vector<std::pair<int, int>> leq;
  for (const auto& p : need(j, "leq", where)) {
    if (!p.is_array() || p.size() != 2) {
      throw MalformedInput(where + ": leq entries are pairs [i,j]");
    }
    leq.emplace_back(p[0].get<int>(), p[1].get<int>());
  }
  try {
    return FiniteLattice(std::move(names), leq);
  } catch (const MalformedInput& e) {
    throw MalformedInput(where + ": " + e.what());
  }
}

QuantaloidPtr parse_quantaloid(const Json& j, const std::string& where) {
  std::vector<std::string> objects;
  for (const auto& o : need(j, "objects", where)) objects.push_back(o.get<std::string>());
  const int n = static_cast<int>(objects.size());
  const auto& homs = need(j, "hom", where);
  std::vector<LatticePtr> lats;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const std::string key = objects[x] + "->" + objects[y];
      lats.push_back(std::make_shared<const FiniteLattice>(
          parse_lattice(need(homs, key.c_str(), where + ".hom"),
                        where + ".hom." + key)));
    }
  }
  const auto& comp = need(j, "compose", where);
  std::vector<Quantaloid::ComposeTable> tables;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      for (int z = 0; z < n; ++z) {
        const std::string key = objects[x] + "->" + objects[y] + "->" + objects[z];
        const auto& t = need(comp, key.c_str(), where + ".compose");
        tables.push_back({x, y, z,
                          as_matrix(t, lats[y * n + z]->size(),
                                    lats[x * n + y]->size(),
                                    where + ".compose." + key)});
      }
    }
  }
  const auto& units = need(j, "units", where);
  std::vector<Elem> u;
  for (int x = 0; x < n; ++x) {
    const auto& e = need(units, objects[x].c_str(), where + ".units");
    const auto& l = *lats[x * n + x];
    if (e.is_string()) {
      const auto& names = l.names();
      auto it = std::find(names.begin(), names.end(), e.get<std::string>());
      if (it == names.end()) {
        throw MalformedInput(where + ".units." + objects[x] + ": unknown element");
      }
      u.push_back(static_cast<Elem>(it - names.begin()));
    } else {
      u.push_back(as_index(e, l.size(), where + ".units." + objects[x]));
    }
  }
  try {
    return std::make_shared<const Quantaloid>(std::move(objects), std::move(lats),
                                              tables, std::move(u));
  } catch (const MalformedInput& e) {
    throw MalformedInput(where + ": " + e.what());
  }
}

std::vector<Elem> flatten(const std::vector<std::vector<Elem>>& m) {
  std::vector<Elem> out;
  for (const auto& r : m) out.insert(out.end(), r.begin(), r.end());
  return out;
}

Json matrix_json(const std::vector<Elem>& entries, int rows, int cols) {
  Json out = Json::array();
  for (int r = 0; r < rows; ++r) {
    Json row = Json::array();
    for (int c = 0; c < cols; ++c) row.push_back(entries[r * cols + c]);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

const QuantaloidPtr& Instance::quantaloid(const std::string& name) const {
  auto it = quantaloids.find(name);
  if (it == quantaloids.end()) throw MalformedInput("unknown quantaloid \"" + name + "\"");
  return it->second;
}

const CategoryPtr& Instance::category(const std::string& name) const {
  auto it = categories.find(name);
  if (it == categories.end()) throw MalformedInput("unknown category \"" + name + "\"");
  return it->second;
}

const QFunctor& Instance::functor(const std::string& name) const {
  auto it = functors.find(name);
  if (it == functors.end()) throw MalformedInput("unknown functor \"" + name + "\"");
  return it->second;
}

std::string Instance::name_of(const QuantaloidPtr& q) const {
  for (const auto& [k, v] : quantaloids) {
    if (v == q) return k;
  }
  throw MalformedInput("quantaloid not part of the instance");
}

std::string Instance::name_of(const CategoryPtr& c) const {
  for (const auto& [k, v] : categories) {
    if (v == c) return k;
  }
  throw MalformedInput("category not part of the instance");
}

Instance parse_instance(const Json& doc) {
  Instance inst;
  if (!doc.is_object()) throw MalformedInput("instance must be a JSON object");
  try {
    if (doc.contains("quantaloid")) {
      for (const auto& [name, q] : doc.at("quantaloid").items()) {
        inst.quantaloids[name] = parse_quantaloid(q, "quantaloid." + name);
      }
    }
    if (doc.contains("categories")) {
      for (const auto& [name, c] : doc.at("categories").items()) {
        const std::string where = "categories." + name;
        const auto& q = inst.quantaloid(need(c, "base", where).get<std::string>());
        std::vector<std::string> names;
        std::vector<int> types;
        for (const auto& o : need(c, "objects", where)) {
          names.push_back(need(o, "name", where).get<std::string>());
          const auto& t = need(o, "type", where);
          types.push_back(t.is_string() ? q->object_index(t.get<std::string>())
                                        : as_index(t, q->num_objects(), where));
        }
        const int n = static_cast<int>(names.size());
        auto hom = flatten(as_matrix(need(c, "hom", where), n, n, where + ".hom"));
        try {
          inst.categories[name] = make_category(q, std::move(names),
                                                std::move(types), std::move(hom));
        } catch (const MalformedInput& e) {
          throw MalformedInput(where + ": " + e.what());
        }
      }
    }
    if (doc.contains("functors")) {
      for (const auto& [name, f] : doc.at("functors").items()) {
        const std::string where = "functors." + name;
        const auto& dom = inst.category(need(f, "dom", where).get<std::string>());
        const auto& cod = inst.category(need(f, "cod", where).get<std::string>());
        const auto& m = need(f, "map", where);
        if (!m.is_array() || static_cast<int>(m.size()) != dom->size()) {
          throw MalformedInput(where + ": map needs one entry per object");
        }
        std::vector<int> map;
        for (const auto& e : m) map.push_back(as_index(e, cod->size(), where + ".map"));
        if (dom->base_ptr() != cod->base_ptr()) {
          throw MalformedInput(where + ": dom and cod have different bases");
        }
        for (int a = 0; a < dom->size(); ++a) {
          if (dom->type(a) != cod->type(map[a])) {
            throw MalformedInput(where + ": map does not preserve the type of " +
                                 dom->name(a));
          }
        }
        inst.functors[name] = {dom, cod, std::move(map)};
      }
    }
    if (doc.contains("distributors")) {
      for (const auto& [name, d] : doc.at("distributors").items()) {
        const std::string where = "distributors." + name;
        const auto& dom = inst.category(need(d, "dom", where).get<std::string>());
        const auto& cod = inst.category(need(d, "cod", where).get<std::string>());
        if (dom->base_ptr() != cod->base_ptr()) {
          throw MalformedInput(where + ": dom and cod have different bases");
        }
        QMatrix m{dom->base_ptr(), cod->types(), dom->types(),
                  flatten(as_matrix(need(d, "hom", where), cod->size(),
                                    dom->size(), where + ".hom"))};
        for (int r = 0; r < m.rows(); ++r) {
          for (int c = 0; c < m.cols(); ++c) {
            if (!m.lattice(r, c).contains(m.at(r, c))) {
              throw MalformedInput(where + ".hom: entry (" + std::to_string(r) +
                                   "," + std::to_string(c) + ") out of range");
            }
          }
        }
        inst.distributors[name] = {dom, cod, std::move(m)};
      }
    }
  } catch (const Json::exception& e) {
    throw MalformedInput(std::string("bad instance: ") + e.what());
  }
  return inst;
}

Instance parse_instance_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw MalformedInput(std::string("not JSON: ") + e.what());
  }
  return parse_instance(doc);
}

Instance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance_text(ss.str());
}

Json lattice_to_json(const FiniteLattice& l) {
  Json leq = Json::array();
  for (auto [i, j] : l.leq_pairs()) leq.push_back({i, j});
  return {{"elements", l.names()}, {"leq", leq}};
}

Json quantaloid_to_json(const Quantaloid& q) {
  const int n = q.num_objects();
  Json hom = Json::object(), comp = Json::object(), units = Json::object();
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      hom[q.object_name(x) + "->" + q.object_name(y)] = lattice_to_json(q.hom(x, y));
    }
    units[q.object_name(x)] = q.unit(x);
  }
  for (const auto& t : q.compose_tables()) {
    comp[q.object_name(t.x) + "->" + q.object_name(t.y) + "->" +
         q.object_name(t.z)] = t.table;
  }
  return {{"objects", q.object_names()},
          {"hom", hom},
          {"compose", comp},
          {"units", units}};
}

Json to_json(const Instance& inst) {
  Json out = Json::object();
  Json qs = Json::object();
  for (const auto& [name, q] : inst.quantaloids) qs[name] = quantaloid_to_json(*q);
  out["quantaloid"] = qs;
  Json cs = Json::object();
  for (const auto& [name, c] : inst.categories) {
    Json objs = Json::array();
    for (int a = 0; a < c->size(); ++a) {
      objs.push_back({{"name", c->name(a)},
                      {"type", c->base().object_name(c->type(a))}});
    }
    cs[name] = {{"base", inst.name_of(c->base_ptr())},
                {"objects", objs},
                {"hom", matrix_json(c->hom_matrix(), c->size(), c->size())}};
  }
  out["categories"] = cs;
  Json fs = Json::object();
  for (const auto& [name, f] : inst.functors) {
    fs[name] = {{"dom", inst.name_of(f.dom)},
                {"cod", inst.name_of(f.cod)},
                {"map", f.map}};
  }
  out["functors"] = fs;
  Json ds = Json::object();
  for (const auto& [name, d] : inst.distributors) {
    ds[name] = {{"dom", inst.name_of(d.dom)},
                {"cod", inst.name_of(d.cod)},
                {"hom", matrix_json(d.matrix.entries, d.matrix.rows(),
                                    d.matrix.cols())}};
  }
  out["distributors"] = ds;
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw MalformedInput("cannot write " + path);
    out << content;
    if (!out.flush()) throw MalformedInput("cannot write " + path);
  }
  std::filesystem::rename(tmp, path);
}

Json report_to_json(const ConditionReport& r, const QFunctor& f) {
  const auto& a = *f.dom;
  const auto& b = *f.cod;
  const auto& q = a.base();
  Json ws = Json::array();
  for (const auto& w : r.condition_one) {
    const auto& l = a.hom_lattice(w.a_prime, w.a);
    std::string text =
        w.nullary
            ? "0 meet A(" + a.name(w.a_prime) + "," + a.name(w.a) + ") = " +
                  l.name(w.lhs) + ", not 0"
            : "(" + l.name(w.f1) + " v " + l.name(w.f2) + ") meet A(" +
                  a.name(w.a_prime) + "," + a.name(w.a) + ") = " + l.name(w.lhs) +
                  " but the join of the meets is " + l.name(w.rhs);
    ws.push_back({{"condition", 1},
                  {"a", a.name(w.a)},
                  {"a_prime", a.name(w.a_prime)},
                  {"f1", w.f1},
                  {"f2", w.f2},
                  {"lhs", w.lhs},
                  {"rhs", w.rhs},
                  {"nullary", w.nullary},
                  {"text", text}});
  }
  for (const auto& w : r.condition_two) {
    const auto& l = q.hom(a.type(w.a), a.type(w.a_dprime));
    const auto& lf = q.hom(a.type(w.a), b.type(w.b_prime));
    const auto& lg = q.hom(b.type(w.b_prime), a.type(w.a_dprime));
    std::string text = "(" + lg.name(w.g) + " . " + lf.name(w.f) + ") meet A(" +
                       a.name(w.a_dprime) + "," + a.name(w.a) + ") = " +
                       l.name(w.lhs) + " but the join through the fiber over " +
                       b.name(w.b_prime) + " is " + l.name(w.rhs);
    ws.push_back({{"condition", 2},
                  {"a", a.name(w.a)},
                  {"a_dprime", a.name(w.a_dprime)},
                  {"b_prime", b.name(w.b_prime)},
                  {"f", w.f},
                  {"g", w.g},
                  {"lhs", w.lhs},
                  {"rhs", w.rhs},
                  {"text", text}});
  }
  auto cond = [](bool checked, std::size_t count) {
    Json c = {{"checked", checked}, {"witnesses", count}};
    c["holds"] = checked ? Json(count == 0) : Json(nullptr);
    return c;
  };
  return {{"verdict", r.verdict},
          {"condition1", cond(r.checked_one, r.condition_one.size())},
          {"condition2", cond(r.checked_two, r.condition_two.size())},
          {"witnesses", ws}};
}

Json oracle_to_json(const OracleVerdict& v) {
  Json fs = Json::array();
  for (const auto& c : v.failures) {
    fs.push_back({{"probe", c.probe},
                  {"reason", to_string(c.reason)},
                  {"detail", c.detail},
                  {"p_map", c.p_map},
                  {"e_map", c.e_map}});
  }
  return {{"verdict", to_string(v.verdict)},
          {"budget", v.budget},
          {"work", v.work},
          {"cones", v.cones},
          {"failures", fs}};
}

Json brute_force_to_json(const BruteForceResult& r) {
  return {{"verdict", to_string(r.verdict)},
          {"exponentiable", r.exponentiable()},
          {"targets_tried", r.targets_tried},
          {"failing_target",
           r.failing_target ? Json(*r.failing_target) : Json(nullptr)},
          {"detail", r.detail},
          {"work", r.work},
          {"budget", r.budget}};
}

std::map<std::string, Report> validate_instance(const Instance& inst) {
  std::map<std::string, Report> out;
  auto add = [&](const std::string& key, Report r) {
    if (!r.empty()) out[key] = std::move(r);
  };
  for (const auto& [name, q] : inst.quantaloids) {
    add("quantaloid " + name, verify_quantaloid(*q));
  }
  for (const auto& [name, c] : inst.categories) {
    add("category " + name, verify_category(*c));
  }
  for (const auto& [name, f] : inst.functors) {
    add("functor " + name, verify_functor(f));
  }
  for (const auto& [name, d] : inst.distributors) {
    add("distributor " + name, verify_distributor(d));
  }
  return out;
}

}  // namespace qexp
