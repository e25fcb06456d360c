#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qexp/lattice.hpp"

namespace qexp {

/// A morphism of the base quantaloid: an element of Q(src, tgt).
struct QArrow {
  int src = 0;
  int tgt = 0;
  Elem elem = 0;

  friend bool operator==(const QArrow&, const QArrow&) = default;
};

/// A finite quantaloid: objects, complete hom-lattices Q(X,Y), composition
/// tables and identities.
///
/// Composition is stored densely per object triple. For X, Y, Z the table
/// maps (g in Q(Y,Z), f in Q(X,Y)) to g.f in Q(X,Z).
///
/// Residuation convention, used throughout: the extension [g,h] is the right
/// adjoint to precomposition with g, the lifting {g,h} is the right adjoint to
/// postcomposition with g.
class Quantaloid {
 public:
  struct ComposeTable {
    int x = 0, y = 0, z = 0;
    /// Row = element of Q(Y,Z), column = element of Q(X,Y).
    std::vector<std::vector<Elem>> table;
  };

  /// Structural validation only (sizes, index ranges); use verify_quantaloid
  /// for the axioms. `homs[x * n + y]` is Q(x, y).
  Quantaloid(std::vector<std::string> objects, std::vector<LatticePtr> homs,
             const std::vector<ComposeTable>& compose, std::vector<Elem> units);

  int num_objects() const { return n_; }
  const std::string& object_name(int x) const { return objects_[x]; }
  const std::vector<std::string>& object_names() const { return objects_; }
  /// Index of a named object; throws MalformedInput if absent.
  int object_index(const std::string& name) const;

  const FiniteLattice& hom(int x, int y) const { return *homs_[x * n_ + y]; }
  const LatticePtr& hom_ptr(int x, int y) const { return homs_[x * n_ + y]; }

  /// g.f for g in Q(y,z), f in Q(x,y). Unchecked.
  Elem compose(int x, int y, int z, Elem g, Elem f) const {
    const auto& t = tables_[(x * n_ + y) * n_ + z];
    return t[g * hom(x, y).size() + f];
  }
  /// Checked composition; throws NonComposable unless src(g) == tgt(f).
  QArrow compose(const QArrow& g, const QArrow& f) const;

  Elem unit(int x) const { return units_[x]; }
  Elem zero(int x, int y) const { return hom(x, y).bottom(); }
  Elem top(int x, int y) const { return hom(x, y).top(); }

  /// [g,h] for g: X->Y, h: X->Z; the largest k: Y->Z with k.g <= h.
  QArrow extension(const QArrow& g, const QArrow& h) const;
  /// {g,h} for g: Y->Z, h: X->Z; the largest k: X->Y with g.k <= h.
  QArrow lifting(const QArrow& g, const QArrow& h) const;

  /// Precomposition with g as a monotone map Q(Y,Z) -> Q(X,Z).
  MonotoneMap precompose_map(const QArrow& g, int z) const;
  /// Postcomposition with g as a monotone map Q(X,Y) -> Q(X,Z).
  MonotoneMap postcompose_map(const QArrow& g, int x) const;

  std::vector<ComposeTable> compose_tables() const;

  /// Largest hom-lattice size.
  int max_hom_size() const;

 private:
  void check_arrow(const QArrow& a) const;

  int n_ = 0;
  std::vector<std::string> objects_;
  std::vector<LatticePtr> homs_;
  std::vector<std::vector<Elem>> tables_;
  std::vector<Elem> units_;
};

using QuantaloidPtr = std::shared_ptr<const Quantaloid>;

/// One violated axiom instance.
struct Violation {
  std::string axiom;
  std::string detail;
};
using Report = std::vector<Violation>;

/// Every violated instance of associativity, the unit laws, and preservation
/// of binary and empty joins in each variable. Empty iff `q` is a quantaloid.
Report verify_quantaloid(const Quantaloid& q);

/// A finite monoid given by its multiplication table.
struct Monoid {
  int size = 1;
  std::vector<int> table;  // table[a * size + b] = a * b
  int identity = 0;

  static Monoid cyclic(int n);
  static Monoid trivial() { return cyclic(1); }
};

/// A finite directed graph. Must be acyclic for the free quantaloid to be
/// finite.
struct Graph {
  std::vector<std::string> vertices;
  std::vector<std::pair<int, int>> edges;
};

/// The two-element locale {0 <= 1} with composition = meet and unit 1.
/// Categories over it are preorders.
QuantaloidPtr boolean_quantale();

/// Truncated distances {0, ..., n} with n read as infinity, ordered by
/// reverse numeric order (0 is top), composition = sum capped at n, unit 0.
/// Element index i is the distance i.
QuantaloidPtr chain_quantale(int n);

/// Subsets of a finite monoid ordered by inclusion; g.f = { x*y | x in g,
/// y in f }, unit { e }. Element index is the subset bitmask.
QuantaloidPtr powerset_monoid_quantale(const Monoid& m);

/// Sets of paths in an acyclic graph. Q(X,Y) is the powerset of the paths
/// from X to Y; composition concatenates. Throws MalformedInput on cycles or
/// if some hom would exceed `max_hom_size` elements.
QuantaloidPtr free_quantaloid_on_graph(const Graph& g, int max_hom_size = 64);

/// Join-preserving endomaps of `l`, ordered pointwise, with composition of
/// maps and the identity as unit.
QuantaloidPtr endo_quantale(const FiniteLattice& l);

/// The five-element diamond {bot, x, y, z, top}.
FiniteLattice diamond_m3();
/// The five-element pentagon {bot, a, b, c, top} with a < c.
FiniteLattice pentagon_n5();

}  // namespace qexp
