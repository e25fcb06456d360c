#include <chrono>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qexp/io.hpp"

using namespace qexp;

namespace {

enum Exit { kOk = 0, kFalse = 1, kMalformed = 2, kInconclusive = 3 };

struct Options {
  std::string path;
  std::string functor;
  std::string target;
  std::string out;
  std::string suite = "preorder-equivalence";
  std::string builder;
  std::string lattice = "m3";
  std::string edges;
  bool verify = false;
  std::uint64_t budget = default_budget();
  std::uint64_t seed = 0;
  int max_probe_objects = 0;
  int n = 2;
  int max_objects = 3;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(o.out, text);
  }
}

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::Passed: return kOk;
    case Verdict::Failed: return kFalse;
    case Verdict::Inconclusive: return kInconclusive;
  }
  return kMalformed;
}

Json reports_json(const std::map<std::string, Report>& reports) {
  Json out = Json::object();
  for (const auto& [key, r] : reports) {
    Json list = Json::array();
    for (const auto& v : r) list.push_back({{"axiom", v.axiom}, {"detail", v.detail}});
    out[key] = list;
  }
  return out;
}

// Loads the file and refuses to go on unless every structure verifies.
Instance load_valid(const Options& o) {
  auto inst = read_instance(o.path);
  auto reports = validate_instance(inst);
  if (!reports.empty()) {
    std::cout << dump({{"valid", false}, {"reports", reports_json(reports)}});
    throw static_cast<int>(kFalse);
  }
  return inst;
}

std::string fresh(const std::map<std::string, CategoryPtr>& taken, std::string name) {
  while (taken.count(name)) name += "'";
  return name;
}

std::string fresh_functor(const std::map<std::string, QFunctor>& taken,
                          std::string name) {
  while (taken.count(name)) name += "'";
  return name;
}

int cmd_validate(const Options& o) {
  auto inst = read_instance(o.path);
  auto reports = validate_instance(inst);
  std::cout << dump({{"valid", reports.empty()}, {"reports", reports_json(reports)}});
  return reports.empty() ? kOk : kFalse;
}

int cmd_check(const Options& o) {
  auto inst = load_valid(o);
  const auto& f = inst.functor(o.functor);
  auto r = is_exponentiable(f);
  emit(o, dump(report_to_json(r, f)));
  return r.verdict ? kOk : kFalse;
}

int cmd_pp(const Options& o) {
  auto inst = load_valid(o);
  const auto& f = inst.functor(o.functor);
  const auto& c = inst.category(o.target);
  auto r = is_exponentiable(f);
  if (!r.verdict) {
    std::cout << dump(report_to_json(r, f));
    return kFalse;
  }
  auto pp = partial_product(f, c);
  Instance out;
  const auto qname = inst.name_of(f.dom->base_ptr());
  out.quantaloids[qname] = f.dom->base_ptr();
  out.categories[inst.name_of(f.dom)] = f.dom;
  out.categories[inst.name_of(f.cod)] = f.cod;
  out.categories[o.target] = c;
  const auto pn = fresh(out.categories, "P");
  out.categories[pn] = pp.p;
  const auto pan = fresh(out.categories, pn + "xA");
  out.categories[pan] = pp.p_times_a.cat;
  out.functors[o.functor] = f;
  out.functors[fresh_functor(out.functors, "proj")] = pp.proj;
  out.functors[fresh_functor(out.functors, "eval")] = pp.eval;
  emit(o, dump(to_json(out)));
  if (!o.verify) return kOk;
  auto v = verify_universal_property(
      f, c, pp, make_probe_family(f.dom->base_ptr(), o.max_probe_objects),
      o.budget);
  std::cerr << dump(oracle_to_json(v));
  return exit_for(v.verdict);
}

int cmd_exp(const Options& o) {
  auto inst = load_valid(o);
  const auto& f = inst.functor(o.functor);
  QFunctor g = o.target.empty() ? identity_functor(f.cod) : inst.functor(o.target);
  if (!(g.cod == f.cod)) throw MalformedInput("G must have the codomain of F");
  auto r = is_exponentiable(f);
  if (!r.verdict) {
    std::cout << dump(report_to_json(r, f));
    return kFalse;
  }
  auto se = slice_exponential(f, g);
  Instance out;
  out.quantaloids[inst.name_of(f.dom->base_ptr())] = f.dom->base_ptr();
  out.categories[inst.name_of(f.dom)] = f.dom;
  out.categories[inst.name_of(f.cod)] = f.cod;
  const auto gname = o.target.empty() ? fresh(out.categories, "C") : inst.name_of(g.dom);
  out.categories[gname] = g.dom;
  const auto en = fresh(out.categories, "E");
  out.categories[en] = se.e;
  out.categories[fresh(out.categories, en + "xA")] = se.e_times_a.cat;
  out.functors[o.functor] = f;
  out.functors[o.target.empty() ? fresh_functor(out.functors, "G") : o.target] = g;
  out.functors[fresh_functor(out.functors, "proj")] = se.proj;
  out.functors[fresh_functor(out.functors, "eval")] = se.eval;
  emit(o, dump(to_json(out)));
  if (!o.verify) return kOk;
  const int k = std::max(o.max_probe_objects, 2);
  auto v = check_adjunction_bijection(
      f, g, se, make_probe_family(f.dom->base_ptr(), k).all(), o.budget);
  std::cerr << dump(oracle_to_json(v));
  return exit_for(v.verdict);
}

int suite_preorder_equivalence(const Options& o) {
  auto q = boolean_quantale();
  auto cats = preorder_corpus(q, o.max_objects, false);
  std::vector<CategoryPtr> cods;
  for (const auto& c : cats) {
    if (c->size() > 0) cods.push_back(c);
  }
  const auto start = std::chrono::steady_clock::now();
  // matrix[conditions][brute force], brute force index 2 = inconclusive.
  std::uint64_t matrix[2][3] = {};
  std::map<std::string, std::uint64_t> by_size;
  Json disagreements = Json::array();
  std::uint64_t total = 0;
  for (const auto& f : functor_corpus(cats, cods)) {
    const bool cond = is_exponentiable(f).verdict;
    auto bf = brute_force_exponentiable(f, o.budget, o.seed);
    const int col = bf.verdict == Verdict::Inconclusive ? 2 : (bf.exponentiable() ? 0 : 1);
    ++matrix[cond ? 0 : 1][col];
    ++by_size[std::to_string(f.dom->size()) + "x" + std::to_string(f.cod->size())];
    ++total;
    if (col != 2 && (col == 0) != cond && disagreements.size() < 16) {
      disagreements.push_back({{"dom", f.dom->hom_matrix()},
                               {"cod", f.cod->hom_matrix()},
                               {"map", f.map},
                               {"brute_force", brute_force_to_json(bf)}});
    }
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  const std::uint64_t agree = matrix[0][0] + matrix[1][1];
  const std::uint64_t inconclusive = matrix[0][2] + matrix[1][2];
  Json m = {{"conditions_true", {{"brute_true", matrix[0][0]},
                                 {"brute_false", matrix[0][1]},
                                 {"brute_inconclusive", matrix[0][2]}}},
            {"conditions_false", {{"brute_true", matrix[1][0]},
                                  {"brute_false", matrix[1][1]},
                                  {"brute_inconclusive", matrix[1][2]}}}};
  std::cout << dump({{"suite", "preorder-equivalence"},
                     {"max_objects", o.max_objects},
                     {"functors", total},
                     {"by_size", by_size},
                     {"agreement", m},
                     {"agree", agree},
                     {"inconclusive", inconclusive},
                     {"disagreements", disagreements}});
  std::cerr << "runtime " << secs << " s\n";
  if (agree == total) return kOk;
  return inconclusive > 0 && agree + inconclusive == total ? kInconclusive : kFalse;
}

int cmd_oracle(const Options& o) {
  if (o.suite == "preorder-equivalence") return suite_preorder_equivalence(o);
  auto inst = load_valid(o);
  const auto& f = inst.functor(o.functor);
  if (o.suite == "brute-force") {
    auto r = brute_force_exponentiable(f, o.budget, o.seed);
    emit(o, dump(brute_force_to_json(r)));
    return exit_for(r.verdict);
  }
  if (o.suite == "universal") {
    const auto& c = inst.category(o.target);
    auto pp = partial_product(f, c);
    auto v = verify_universal_property(
        f, c, pp, make_probe_family(f.dom->base_ptr(), o.max_probe_objects),
        o.budget);
    emit(o, dump(oracle_to_json(v)));
    return exit_for(v.verdict);
  }
  if (o.suite == "adjunction") {
    QFunctor g = o.target.empty() ? identity_functor(f.cod) : inst.functor(o.target);
    auto se = slice_exponential(f, g);
    auto v = check_adjunction_bijection(
        f, g, se,
        make_probe_family(f.dom->base_ptr(), std::max(o.max_probe_objects, 2)).all(),
        o.budget);
    emit(o, dump(oracle_to_json(v)));
    return exit_for(v.verdict);
  }
  throw MalformedInput("unknown suite " + o.suite);
}

FiniteLattice named_lattice(const std::string& s) {
  if (s == "m3") return diamond_m3();
  if (s == "n5") return pentagon_n5();
  if (s.rfind("chain", 0) == 0) return FiniteLattice::chain(std::stoi(s.substr(5)));
  throw MalformedInput("unknown lattice " + s + " (m3, n5, chainN)");
}

Graph parse_edges(const std::string& s) {
  Graph g;
  auto vertex = [&](const std::string& v) {
    auto it = std::find(g.vertices.begin(), g.vertices.end(), v);
    if (it != g.vertices.end()) return static_cast<int>(it - g.vertices.begin());
    g.vertices.push_back(v);
    return static_cast<int>(g.vertices.size()) - 1;
  };
  std::stringstream ss(s);
  std::string edge;
  while (std::getline(ss, edge, ',')) {
    const auto arrow = edge.find("->");
    if (arrow == std::string::npos) throw MalformedInput("edge " + edge + " needs ->");
    const int from = vertex(edge.substr(0, arrow));
    const int to = vertex(edge.substr(arrow + 2));
    g.edges.emplace_back(from, to);
  }
  if (g.vertices.empty()) throw MalformedInput("free needs --edges X->Y,...");
  return g;
}

int cmd_gen(const Options& o) {
  QuantaloidPtr q;
  if (o.builder == "boolean") {
    q = boolean_quantale();
  } else if (o.builder == "chain") {
    q = chain_quantale(o.n);
  } else if (o.builder == "endo") {
    q = endo_quantale(named_lattice(o.lattice));
  } else if (o.builder == "free") {
    q = free_quantaloid_on_graph(parse_edges(o.edges));
  } else if (o.builder == "powerset") {
    q = powerset_monoid_quantale(Monoid::cyclic(o.n));
  } else {
    throw MalformedInput("unknown builder " + o.builder);
  }
  Instance inst;
  inst.quantaloids["Q"] = q;
  emit(o, dump(to_json(inst)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponentiability of functors between quantaloid-enriched categories"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* s, bool needs_path) {
    auto* p = s->add_option("path", o.path, "instance file");
    if (needs_path) p->required();
    s->add_option("-o,--output", o.out, "write the result here");
    s->add_option("--budget", o.budget, "work budget (default QEXP_BUDGET or 5e7)");
    s->add_option("--seed", o.seed, "seed for sampled checks");
  };
  auto* validate = app.add_subcommand("validate", "run every verifier");
  common(validate, true);
  auto* check = app.add_subcommand("check", "decide exponentiability");
  common(check, true);
  check->add_option("--functor", o.functor)->required();
  auto* pp = app.add_subcommand("pp", "construct a partial product");
  common(pp, true);
  pp->add_option("--functor", o.functor)->required();
  pp->add_option("--target", o.target, "category C")->required();
  pp->add_flag("--verify", o.verify, "check the universal property");
  pp->add_option("--max-probe-objects", o.max_probe_objects);
  auto* exp = app.add_subcommand("exp", "construct a slice exponential");
  common(exp, true);
  exp->add_option("--functor", o.functor)->required();
  exp->add_option("--target", o.target, "functor G: C -> B (default id_B)");
  exp->add_flag("--verify", o.verify, "check the adjunction bijection");
  exp->add_option("--max-probe-objects", o.max_probe_objects);
  auto* oracle = app.add_subcommand("oracle", "run an oracle suite");
  common(oracle, false);
  oracle->add_option("--suite", o.suite)
      ->check(CLI::IsMember({"preorder-equivalence", "brute-force", "universal",
                             "adjunction"}));
  oracle->add_option("--functor", o.functor);
  oracle->add_option("--target", o.target);
  oracle->add_option("--max-probe-objects", o.max_probe_objects);
  oracle->add_option("--max-objects", o.max_objects, "preorder corpus size");
  auto* gen = app.add_subcommand("gen", "emit a builder's quantaloid");
  gen->add_option("--builder", o.builder)
      ->required()
      ->check(CLI::IsMember({"boolean", "chain", "endo", "free", "powerset"}));
  gen->add_option("-n", o.n, "chain length or cyclic monoid order");
  gen->add_option("--lattice", o.lattice, "endo: m3, n5 or chainN");
  gen->add_option("--edges", o.edges, "free: X->Y,Y->Z");
  gen->add_option("-o,--output", o.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kMalformed;
  }
  try {
    if (*validate) return cmd_validate(o);
    if (*check) return cmd_check(o);
    if (*pp) return cmd_pp(o);
    if (*exp) return cmd_exp(o);
    if (*oracle) return cmd_oracle(o);
    if (*gen) return cmd_gen(o);
  } catch (int code) {
    return code;
  } catch (const ConditionViolated& e) {
    std::cerr << e.what() << "\n";
    return kFalse;
  } catch (const MalformedInput& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return kMalformed;
  } catch (const NonComposable& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return kMalformed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMalformed;
  }
  return kMalformed;
}
