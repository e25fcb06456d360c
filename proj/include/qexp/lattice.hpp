#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qexp/errors.hpp"

namespace qexp {

/// Index of an element inside one finite lattice.
using Elem = int;

/// A finite complete lattice given by its full order relation.
///
/// Construction validates that `leq` is a partial order and that all binary
/// joins and meets exist; afterwards every operation is a table lookup.
class FiniteLattice {
 public:
  /// `leq` must list every pair (i, j) with i <= j, reflexive pairs included.
  /// Throws MalformedInput naming the offending pair otherwise.
  FiniteLattice(std::vector<std::string> names,
                const std::vector<std::pair<int, int>>& leq);

  /// The chain 0 < 1 < ... < n-1, element names "0".."n-1".
  static FiniteLattice chain(int n);

  int size() const { return n_; }
  const std::string& name(Elem x) const { return names_[x]; }
  const std::vector<std::string>& names() const { return names_; }

  bool leq(Elem x, Elem y) const { return leq_[x * n_ + y] != 0; }
  Elem join(Elem x, Elem y) const { return join_[x * n_ + y]; }
  Elem meet(Elem x, Elem y) const { return meet_[x * n_ + y]; }
  Elem bottom() const { return bottom_; }
  Elem top() const { return top_; }

  /// Join of an arbitrary finite subset; join of the empty set is bottom.
  Elem join(std::span<const Elem> s) const;
  /// Meet of an arbitrary finite subset; meet of the empty set is top.
  Elem meet(std::span<const Elem> s) const;

  /// All pairs (i, j) with i <= j, in row-major order.
  std::vector<std::pair<int, int>> leq_pairs() const;

  bool contains(Elem x) const { return x >= 0 && x < n_; }

  /// True iff binary meet distributes over binary join everywhere.
  bool is_distributive() const;

  friend bool operator==(const FiniteLattice& a, const FiniteLattice& b) {
    return a.n_ == b.n_ && a.leq_ == b.leq_;
  }

 private:
  void check(Elem x) const;

  int n_ = 0;
  std::vector<std::string> names_;
  std::vector<std::uint8_t> leq_;
  std::vector<Elem> join_;
  std::vector<Elem> meet_;
  Elem bottom_ = 0;
  Elem top_ = 0;
};

using LatticePtr = std::shared_ptr<const FiniteLattice>;

/// An order-preserving map between two finite lattices, stored as a table.
class MonotoneMap {
 public:
  /// Throws MalformedInput if the table has the wrong length, contains an
  /// out-of-range element, or is not monotone.
  MonotoneMap(LatticePtr source, LatticePtr target, std::vector<Elem> table);

  static MonotoneMap identity(LatticePtr l);

  const FiniteLattice& source() const { return *source_; }
  const FiniteLattice& target() const { return *target_; }
  const LatticePtr& source_ptr() const { return source_; }
  const LatticePtr& target_ptr() const { return target_; }
  Elem operator()(Elem x) const { return table_[x]; }
  const std::vector<Elem>& table() const { return table_; }

  friend bool operator==(const MonotoneMap& a, const MonotoneMap& b) {
    return a.table_ == b.table_ && *a.source_ == *b.source_ &&
           *a.target_ == *b.target_;
  }

 private:
  LatticePtr source_;
  LatticePtr target_;
  std::vector<Elem> table_;
};

/// First failure of join preservation, if any. Checks the empty join and all
/// binary joins, which covers arbitrary joins in a finite lattice.
std::optional<SupWitness> sup_preservation_failure(const MonotoneMap& f);

bool is_sup_preserving(const MonotoneMap& f);

/// The right adjoint g(y) = join{ x | f(x) <= y }.
/// Throws NotSupPreserving (with a witness) when no right adjoint exists.
MonotoneMap right_adjoint_of(const MonotoneMap& f);

/// The principal down-set of `b` as a lattice, with its inclusion into the
/// ambient lattice. Index i of `lattice` corresponds to `embed[i]`.
struct Downset {
  LatticePtr lattice;
  std::vector<Elem> embed;

  /// Position of an ambient element inside the down-set, if it lies there.
  std::optional<Elem> index_of(Elem ambient) const;
};

Downset downset_lattice(const FiniteLattice& l, Elem b);

}  // namespace qexp
