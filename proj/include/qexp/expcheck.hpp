#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qexp/qcat.hpp"

namespace qexp {

/// (f1 v f2) meet A(a',a) != (f1 meet A(a',a)) v (f2 meet A(a',a)) for
/// f1, f2 below B(Fa',Fa). `nullary` marks the empty-family instance.
struct Cond1Witness {
  int a = 0;
  int a_prime = 0;
  Elem f1 = 0;
  Elem f2 = 0;
  Elem lhs = 0;
  Elem rhs = 0;
  bool nullary = false;

  friend bool operator==(const Cond1Witness&, const Cond1Witness&) = default;
};

/// (g . f) meet A(a'',a) != join over a' in F^-1 b' of
/// (g meet A(a'',a')) . (f meet A(a',a)).
struct Cond2Witness {
  int a = 0;
  int a_dprime = 0;
  int b_prime = 0;
  Elem f = 0;
  Elem g = 0;
  Elem lhs = 0;
  Elem rhs = 0;

  friend bool operator==(const Cond2Witness&, const Cond2Witness&) = default;
};

struct ConditionReport {
  bool verdict = true;
  bool checked_one = false;
  bool checked_two = false;
  std::vector<Cond1Witness> condition_one;
  std::vector<Cond2Witness> condition_two;
};

class ConditionViolated : public std::runtime_error {
 public:
  ConditionViolated(const std::string& what, ConditionReport r)
      : std::runtime_error(what), report(std::move(r)) {}
  ConditionReport report;
};

/// A functor with its fibers, the down-sets below every B(b',b) and the
/// right adjoints of the per-pair maps f -> f meet A(a',a), precomputed once.
/// Immutable after construction.
class FiberedFunctor {
 public:
  explicit FiberedFunctor(QFunctor f);

  const QFunctor& functor() const { return f_; }
  const QCategory& dom() const { return *f_.dom; }
  const QCategory& cod() const { return *f_.cod; }
  const Quantaloid& base() const { return f_.dom->base(); }

  const Fiber& fiber(int b) const { return fibers_[b]; }
  /// Elements of the down-set below B(to, from), ascending index.
  const std::vector<Elem>& downset(int to, int from) const {
    return downsets_[to * cod().size() + from].embed;
  }
  const Downset& downset_lattice(int to, int from) const {
    return downsets_[to * cod().size() + from];
  }

  /// Right adjoint of f -> f meet A(a',a) on the down-set below
  /// B(Fa',Fa), as a map Q(ta,ta') -> down-set; empty if the map is not
  /// join-preserving.
  const std::optional<MonotoneMap>& pair_adjoint(int a_prime, int a) const {
    return pair_adjoints_[a_prime * dom().size() + a];
  }
  /// Failure of join preservation for the hat map of (b, b'), if any.
  const std::optional<SupWitness>& hat_failure(int b_prime, int b) const {
    return hat_failures_[b_prime * cod().size() + b];
  }

 private:
  QFunctor f_;
  std::vector<Fiber> fibers_;
  std::vector<Downset> downsets_;
  std::vector<std::optional<MonotoneMap>> pair_adjoints_;
  std::vector<std::optional<SupWitness>> hat_failures_;
};

// --- the two conditions --------------------------------------------------

/// Distributivity of meet-with-A(a',a) over joins below B(Fa',Fa). Binary and
/// empty joins are checked. Witnesses are sorted by (a, a', f1, f2).
ConditionReport check_condition_one(const FiberedFunctor& f);
ConditionReport check_condition_one(const QFunctor& f);

/// The factorisation condition through fibers; an empty fiber makes the
/// right-hand side the bottom element. Witnesses sorted by
/// (a, a'', b', f, g).
ConditionReport check_condition_two(const FiberedFunctor& f);
ConditionReport check_condition_two(const QFunctor& f);

/// Conjunction of both checks with both witness lists.
ConditionReport is_exponentiable(const FiberedFunctor& f);
ConditionReport is_exponentiable(const QFunctor& f);

/// Single-threaded reference versions of the parallel kernels above. They
/// produce identical reports.
namespace serial {
ConditionReport check_condition_one(const FiberedFunctor& f);
ConditionReport check_condition_two(const FiberedFunctor& f);
}  // namespace serial

// --- the per-pair adjoint maps -------------------------------------------

/// f -> f meet A(a',a) from the down-set below B(Fa',Fa) into Q(ta,ta').
MonotoneMap pair_meet_map(const FiberedFunctor& f, int a_prime, int a);

/// Whether the hat map for (b, b') preserves joins, checked entrywise on
/// matrices.
bool hat_is_sup_preserving(const FiberedFunctor& f, int b_prime, int b);

// --- hat and sharp -------------------------------------------------------

/// The matrix (f meet A(a',a)) indexed by A_{b'} x A_b. `f` is an element of
/// Q(tb,tb') and must lie below B(b',b), else OutOfDownset.
QMatrix hat_matrix(const FiberedFunctor& f, int b, int b_prime, Elem fe);
QDistributor hat(const FiberedFunctor& f, int b, int b_prime, Elem fe);

/// join{ f below B(b',b) | hat(f) <= m } by scanning the down-set. Defined
/// for any matrix; it is the right adjoint only when hat preserves joins.
Elem sharp_by_search(const FiberedFunctor& f, int b, int b_prime,
                     const QMatrix& m);

/// Meet over entries of the per-pair right adjoints applied to m(a',a);
/// B(b',b) when a fiber is empty. Throws AdjointMissing if some pair map has
/// no right adjoint.
Elem sharp_by_meet_formula(const FiberedFunctor& f, int b, int b_prime,
                           const QMatrix& m);

/// The right adjoint of hat at (b, b'). Computed by down-set search and
/// cross-checked against the meet formula (std::logic_error on mismatch).
/// Throws AdjointMissing when hat does not preserve joins at (b, b').
Elem sharp(const FiberedFunctor& f, int b, int b_prime, const QMatrix& phi);
Elem sharp(const FiberedFunctor& f, int b, int b_prime, const QDistributor& phi);

/// The matrix A_{Fa} -> A_{Fa'} with every entry top except (a', a) = g.
QMatrix top_except(const FiberedFunctor& f, int a_prime, int a, Elem g);

// --- lax squares ---------------------------------------------------------

/// hat(g.f) <= hat(g) (x) hat(f) for all f below B(b',b), g below B(b'',b').
/// Also asserts the reverse inequality, which holds for every functor
/// (std::logic_error if it does not).
bool check_fig3_lax(const FiberedFunctor& f, int b, int b_prime, int b_dprime);

/// hat(g) (x) hat(f) <= hat(g.f) for all f, g at this triple.
bool fig3_oplax_holds(const FiberedFunctor& f, int b, int b_prime,
                      int b_dprime);

struct Fig4Options {
  /// Maximum number of (Phi, Psi) pairs examined exhaustively; beyond it the
  /// check takes every pair of hat images, then fills up to `budget` with
  /// pairs drawn using `seed`.
  std::uint64_t budget = 1u << 20;
  /// Maximum size of one listed Dist hom-set; beyond it the hom-set is
  /// represented by the sample described at fiber_distributors.
  std::uint64_t enumeration_limit = 1u << 12;
  std::uint64_t seed = 0;
};

struct Fig4Result {
  bool holds = true;
  bool exhaustive = true;
  std::uint64_t pairs_checked = 0;
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
  /// First failing pair in enumeration order.
  std::optional<std::pair<QMatrix, QMatrix>> counterexample;
};

/// Psi^F . Phi^F <= (Psi (x) Phi)^F for distributors between the fibers over
/// b, b', b''. Throws AdjointMissing if sharp does not exist.
Fig4Result check_fig4_lax(const FiberedFunctor& f, int b, int b_prime,
                          int b_dprime, const Fig4Options& opt = {});

namespace serial {
Fig4Result check_fig4_lax(const FiberedFunctor& f, int b, int b_prime,
                          int b_dprime, const Fig4Options& opt = {});
}  // namespace serial

/// Dist(A_b, A_{b'}) as used by check_fig4_lax: every distributor when there
/// are at most `limit`, else zero, top, the hat images and 64 seeded closures
/// of random matrices. `exhaustive` reports which case applied.
std::vector<QMatrix> fiber_distributors(const FiberedFunctor& f, int b,
                                        int b_prime, std::uint64_t limit,
                                        std::uint64_t seed, bool* exhaustive);

// --- partial products and exponentials -----------------------------------

/// An object (b, H) with H: A_b -> C given by its object map.
struct FiberFunctorKey {
  int b = 0;
  std::vector<int> h;

  friend auto operator<=>(const FiberFunctorKey&, const FiberFunctorKey&) =
      default;
};

struct PartialProduct {
  CategoryPtr p;
  QFunctor proj;      // P -> B
  Pullback p_times_a; // P x_B A
  QFunctor eval;      // P x_B A -> C
  std::vector<FiberFunctorKey> objects;
  std::map<FiberFunctorKey, int> index;

  std::optional<int> object_index(int b, const std::vector<int>& h) const;
};

/// The partial product of F with C. Objects are all (b, H) with H a functor
/// A_b -> C, ordered by b then by H in enumeration order; homs are sharps of
/// the co-span distributors C(H'-, H-). Throws ConditionViolated if F is not
/// exponentiable.
PartialProduct partial_product(const FiberedFunctor& f, const CategoryPtr& c);
PartialProduct partial_product(const QFunctor& f, const CategoryPtr& c);

/// K(x) = (P'x, E'(x, -)). `e_prime` must be defined on
/// pullback(p_prime_map, F) as built by `pullback`. Throws MalformedInput if
/// some E'(x, -) is not an object of the partial product.
QFunctor mediating(const PartialProduct& pp, const FiberedFunctor& f,
                   const QFunctor& p_prime_map, const QFunctor& e_prime);

struct SliceExponential {
  CategoryPtr e;
  QFunctor proj;       // E -> B
  Pullback e_times_a;  // E x_B A
  QFunctor eval;       // E x_B A -> C, over B
  std::vector<FiberFunctorKey> objects;
  std::map<FiberFunctorKey, int> index;

  std::optional<int> object_index(int b, const std::vector<int>& h) const;
};

/// The exponential of G: C -> B by F in Cat(Q)/B. Objects (b, H) with
/// H: A_b -> C and G.H constant at b; homs as in the partial product.
SliceExponential slice_exponential(const FiberedFunctor& f, const QFunctor& g);
SliceExponential slice_exponential(const QFunctor& f, const QFunctor& g);

}  // namespace qexp
