#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qexp/expcheck.hpp"

namespace qexp {

/// Categories used as test domains P' (or X) for universal properties.
struct Probe {
  std::string name;
  CategoryPtr cat;
};

/// Points *_X for every Q-object, P_f for every Q-arrow f, and optionally
/// every category with at most `max_probe_objects` objects.
struct ProbeFamily {
  std::vector<Probe> points;
  std::vector<Probe> arrows;
  std::vector<Probe> extras;

  std::vector<Probe> all() const;
};

/// `max_probe_objects` = 0 means no extras. Extras are all categories from
/// enumerate_qcategories with 1..K objects, over every type vector.
ProbeFamily make_probe_family(const QuantaloidPtr& q, int max_probe_objects = 0);

enum class FailureReason {
  NoMediator,
  NonUniqueMediator,
  EquationFails,
  RoundTripFails,
  NoStructure,
};

std::string to_string(FailureReason r);

/// One failing (probe, cone) with enough data to replay it.
struct ConeFailure {
  std::string probe;
  CategoryPtr probe_cat;
  std::vector<int> p_map;  // P' -> B (or X -> B)
  std::vector<int> e_map;  // P' x_B A -> C (or X x_B A -> C), may be empty
  FailureReason reason = FailureReason::EquationFails;
  std::string detail;
};

enum class Verdict { Passed, Failed, Inconclusive };

std::string to_string(Verdict v);

struct OracleVerdict {
  Verdict verdict = Verdict::Passed;
  std::vector<ConeFailure> failures;
  std::uint64_t budget = 0;
  std::uint64_t work = 0;
  std::uint64_t cones = 0;

  bool passed() const { return verdict == Verdict::Passed; }
};

/// Default work budget: QEXP_BUDGET if set, else 50 million steps.
std::uint64_t default_budget();

/// Checks the universal property of `pp` against every probe: for each probe
/// P', each functor P'm: P' -> B and each functor E': P'm*F -> C, searches all
/// functors K: P' -> P with proj.K = P'm and eval.(K x_B A) = E' and requires
/// exactly one. Also checks that P is a category and proj, eval are functors
/// (reason NoStructure otherwise). Inconclusive when `budget` steps are used
/// up; failures found so far are kept.
OracleVerdict verify_universal_property(const QFunctor& f, const CategoryPtr& c,
                                        const PartialProduct& pp,
                                        const ProbeFamily& probes,
                                        std::uint64_t budget = default_budget());

/// Re-runs one recorded cone. Returns the reason it fails now, if it does.
std::optional<FailureReason> replay_cone(const QFunctor& f,
                                         const CategoryPtr& c,
                                         const PartialProduct& pp,
                                         const ConeFailure& cone);

// --- brute-force exponentiability ----------------------------------------

struct BruteForceTarget {
  std::string name;
  CategoryPtr cat;
};

/// The deterministic list of targets C tried for F: the terminal category,
/// collages of every principal distributor (f meet A(a',a)) and of pairwise
/// joins of them, triple collages of every pair of principal distributors
/// over every triple (b, b', b''), collages P_f for Q-arrows, and `random`
/// collages of seeded random distributors between fibers. Duplicates removed.
std::vector<BruteForceTarget> brute_force_targets(const QFunctor& f,
                                                  std::uint64_t seed = 0,
                                                  int random = 4);

struct BruteForceResult {
  Verdict verdict = Verdict::Passed;  // Passed = exponentiable
  std::size_t targets_tried = 0;
  /// Set when some target has no partial product.
  std::optional<std::string> failing_target;
  std::string detail;
  std::uint64_t work = 0;
  std::uint64_t budget = 0;

  bool exponentiable() const { return verdict == Verdict::Passed; }
};

/// For each target C, searches for any category structure on the object set
/// {(b, H) | H: A_b -> C a functor} whose homs lie below B(b',b) and which
/// satisfies the universal property against points and P_f probes. The
/// probes translate into per-entry constraints: every P_f cone must have a
/// mediator (a lower bound on the hom) and evaluation must be a functor (a
/// set of allowed values); the search then backtracks over the allowed
/// values for the identity and composition inequalities. Uses neither the
/// condition checkers nor sharp.
BruteForceResult brute_force_exponentiable(const QFunctor& f,
                                           std::uint64_t budget = default_budget(),
                                           std::uint64_t seed = 0);

/// The search above for one target. Returns the category found, if any.
std::optional<CategoryPtr> brute_force_partial_product(
    const QFunctor& f, const CategoryPtr& c, std::uint64_t& work,
    std::uint64_t budget, std::string* why = nullptr);

// --- slice exponentials ----------------------------------------------------

/// For each probe X and functor x: X -> B, compares functors
/// X x_B A -> C over B with functors X -> E over B through currying and
/// uncurrying; both round trips must be identities. Also checks that E is a
/// category and that proj and eval are functors over B.
OracleVerdict check_adjunction_bijection(const QFunctor& f, const QFunctor& g,
                                         const SliceExponential& exp,
                                         const std::vector<Probe>& probes,
                                         std::uint64_t budget = default_budget());

// --- enumeration -------------------------------------------------------------

/// Every Q-category on the given typed object list, in lexicographic order of
/// hom matrices (row-major). Stops early when `visit` returns false.
void for_each_qcategory(const QuantaloidPtr& q, const std::vector<int>& types,
                        const std::function<bool(const CategoryPtr&)>& visit);
std::vector<CategoryPtr> enumerate_qcategories(const QuantaloidPtr& q,
                                               const std::vector<int>& types);
/// All categories with 0..max_objects objects over every type vector.
std::vector<CategoryPtr> enumerate_qcategories(const QuantaloidPtr& q,
                                               int max_objects);

/// Preorders on 0..max_objects labelled objects (as boolean-quantale
/// categories); `up_to_iso` keeps the first of each isomorphism class.
std::vector<CategoryPtr> preorder_corpus(const QuantaloidPtr& boolean,
                                         int max_objects, bool up_to_iso);

/// Every functor between members of `cats` (domain first, then codomain, then
/// object map).
std::vector<QFunctor> functor_corpus(const std::vector<CategoryPtr>& domains,
                                     const std::vector<CategoryPtr>& codomains);

/// Whether the object map is a functor (types and hom inequalities).
bool is_functor_map(const QCategory& a, const QCategory& b,
                    const std::vector<int>& map);

}  // namespace qexp
