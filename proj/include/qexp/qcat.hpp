#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qexp/quantaloid.hpp"

namespace qexp {

/// A Q-enriched category presented by a typed object list and a hom matrix.
///
/// hom(to, from) = A(to, from) is an element of Q(t from, t to): the hom from
/// `from` to `to`. Storage is row-major with row = `to`, matching the
/// instance-file layout. Objects are identified by position.
class QCategory {
 public:
  /// Structural validation only: types and entries in range. Use
  /// verify_category for the identity and composition inequalities.
  QCategory(QuantaloidPtr base, std::vector<std::string> names,
            std::vector<int> types, std::vector<Elem> entries);

  const Quantaloid& base() const { return *base_; }
  const QuantaloidPtr& base_ptr() const { return base_; }
  int size() const { return static_cast<int>(types_.size()); }
  int type(int a) const { return types_[a]; }
  const std::vector<int>& types() const { return types_; }
  const std::string& name(int a) const { return names_[a]; }
  const std::vector<std::string>& names() const { return names_; }
  Elem hom(int to, int from) const { return hom_[to * size() + from]; }
  const std::vector<Elem>& hom_matrix() const { return hom_; }
  /// The lattice Q(t from, t to) that hom(to, from) lives in.
  const FiniteLattice& hom_lattice(int to, int from) const {
    return base_->hom(types_[from], types_[to]);
  }

  /// Copy with one hom entry replaced (used for mutation tests).
  QCategory with_hom(int to, int from, Elem value) const;

  friend bool operator==(const QCategory& a, const QCategory& b) {
    return a.base_ == b.base_ && a.types_ == b.types_ && a.hom_ == b.hom_;
  }

 private:
  QuantaloidPtr base_;
  std::vector<std::string> names_;
  std::vector<int> types_;
  std::vector<Elem> hom_;
};

using CategoryPtr = std::shared_ptr<const QCategory>;

template <class... Args>
CategoryPtr make_category(Args&&... args) {
  return std::make_shared<const QCategory>(std::forward<Args>(args)...);
}

/// A type-preserving object map. Functor equality is object-map equality.
struct QFunctor {
  CategoryPtr dom;
  CategoryPtr cod;
  std::vector<int> map;

  int operator()(int a) const { return map[a]; }
};

/// A Q-valued matrix between two typed object families. Entry (row, col) is
/// an element of Q(col_types[col], row_types[row]).
struct QMatrix {
  QuantaloidPtr base;
  std::vector<int> row_types;
  std::vector<int> col_types;
  std::vector<Elem> entries;

  int rows() const { return static_cast<int>(row_types.size()); }
  int cols() const { return static_cast<int>(col_types.size()); }
  Elem at(int row, int col) const { return entries[row * cols() + col]; }
  Elem& at(int row, int col) { return entries[row * cols() + col]; }
  const FiniteLattice& lattice(int row, int col) const {
    return base->hom(col_types[col], row_types[row]);
  }

  /// Entrywise order.
  bool leq(const QMatrix& other) const;
  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.row_types == b.row_types && a.col_types == b.col_types &&
           a.entries == b.entries;
  }
};

/// A distributor dom -|-> cod. Entry (y, x) for x in dom, y in cod lives in
/// Q(t x, t y); rows are cod objects, columns dom objects.
struct QDistributor {
  CategoryPtr dom;
  CategoryPtr cod;
  QMatrix matrix;

  Elem operator()(int y, int x) const { return matrix.at(y, x); }
};

// --- verification ---------------------------------------------------------

Report verify_category(const QCategory& a);
Report verify_functor(const QFunctor& f);
Report verify_distributor(const QDistributor& d);

// --- basic constructions --------------------------------------------------

/// Objects = Q_0 with t X = X; every hom is the top element.
CategoryPtr terminal(const QuantaloidPtr& q);

/// The one-object category *_X with hom 1_X.
CategoryPtr one_object(const QuantaloidPtr& q, int x);

/// The functor *_{tb} -> B pointing at b.
QFunctor point(const CategoryPtr& b_cat, int b);

QFunctor identity_functor(const CategoryPtr& a);

/// g . f; throws NonComposable on a domain mismatch.
QFunctor compose_functors(const QFunctor& g, const QFunctor& f);

/// The unique functor A -> terminal.
QFunctor to_terminal(const CategoryPtr& a, const CategoryPtr& t);

struct Pullback {
  CategoryPtr cat;
  QFunctor proj_a;
  QFunctor proj_b;
  /// pairs[i] = (a, b) for object i; ordered lexicographically.
  std::vector<std::pair<int, int>> pairs;

  /// Object index of (a, b), if it is in the pullback.
  std::optional<int> index_of(int a, int b) const;
};

/// A x_C B for F: A -> C, G: B -> C; homs A(a',a) meet B(b',b).
Pullback pullback(const QFunctor& f, const QFunctor& g);

struct Fiber {
  CategoryPtr cat;
  /// members[i] is the object of the domain sitting at fiber position i.
  std::vector<int> members;
  int base_object = 0;

  /// Fiber position of a domain object, if it lies over base_object.
  std::optional<int> position_of(int a) const;
};

/// A_b: objects F^-1 b, all of type t b, homs 1_{tb} meet A(a',a).
Fiber fiber(const QFunctor& f, int b);

// --- distributors ---------------------------------------------------------

QMatrix zero_matrix(const QuantaloidPtr& q, std::vector<int> row_types,
                    std::vector<int> col_types);
QMatrix top_matrix(const QuantaloidPtr& q, std::vector<int> row_types,
                   std::vector<int> col_types);

QDistributor zero_distributor(const CategoryPtr& dom, const CategoryPtr& cod);
QDistributor top_distributor(const CategoryPtr& dom, const CategoryPtr& cod);
/// The hom-distributor A -|-> A.
QDistributor hom_distributor(const CategoryPtr& a);

/// (Psi (x) Phi)(z, x) = join over y of Psi(z, y) . Phi(y, x).
/// Throws NonComposable unless cod(Phi) is dom(Psi).
QDistributor compose_distributors(const QDistributor& psi,
                                  const QDistributor& phi);

/// The matrix composite M2 . M1 (same formula, no category data).
QMatrix compose_matrices(const QMatrix& m2, const QMatrix& m1);

/// The smallest distributor above a matrix: Y . M . X.
QDistributor distributor_closure(const CategoryPtr& dom, const CategoryPtr& cod,
                                 const QMatrix& m);

/// C(T-, S-) for a co-span S: X -> C <- Y: T. A distributor X -|-> Y.
QDistributor cospan_distributor(const QFunctor& s, const QFunctor& t);

/// Every distributor X -|-> Y in lexicographic order of entries. Stops early
/// when `visit` returns false.
void for_each_distributor(const CategoryPtr& dom, const CategoryPtr& cod,
                          const std::function<bool(const QMatrix&)>& visit);
std::vector<QMatrix> enumerate_distributors(const CategoryPtr& dom,
                                            const CategoryPtr& cod);

// --- collages -------------------------------------------------------------

struct Collage {
  CategoryPtr cat;
  QFunctor embed_dom;  // S_X
  QFunctor embed_cod;  // S_Y
};

/// The representing co-span of full embeddings for Phi: X -|-> Y. Objects are
/// X then Y; C(y, x) = Phi(y, x), C(x, y) = 0.
Collage collage(const QDistributor& phi);

/// P_f for f: X -> Y: objects X, Y with P_f(Y, X) = f, P_f(X, Y) = 0.
CategoryPtr arrow_category(const QuantaloidPtr& q, const QArrow& f);

struct TripleCollage {
  CategoryPtr cat;
  QFunctor s;  // first block
  QFunctor t;  // second block
  QFunctor u;  // third block
};

/// Three blocks with cross-homs Phi, Psi and Psi (x) Phi; every other cross
/// hom is zero.
TripleCollage triple_collage(const QDistributor& phi, const QDistributor& psi);

// --- enumeration ----------------------------------------------------------

/// Visits every functor A -> B as an object map, in lexicographic order.
/// Stops early when `visit` returns false.
void for_each_functor_map(const QCategory& a, const QCategory& b,
                          const std::function<bool(const std::vector<int>&)>& visit);

std::vector<QFunctor> enumerate_functors(const CategoryPtr& a,
                                         const CategoryPtr& b);

/// Object bijection A -> B preserving types and homs, if one exists.
std::optional<std::vector<int>> find_isomorphism(const QCategory& a,
                                                 const QCategory& b);

/// Full subcategory on the listed objects, in the given order.
CategoryPtr full_subcategory(const QCategory& a, const std::vector<int>& objects);

}  // namespace qexp
