#pragma once

#include <stdexcept>
#include <string>

namespace qexp {

/// Input that does not describe a well-formed structure (bad index, missing
/// reflexive pair, non-lattice order, unresolved reference, ...).
class MalformedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A monotone map that fails to preserve the empty join or some binary join.
/// `nullary` is set when f(bottom) != bottom; otherwise (x, y) is a pair with
/// f(x v y) != f(x) v f(y).
struct SupWitness {
  bool nullary = false;
  int x = -1;
  int y = -1;
};

class NotSupPreserving : public std::runtime_error {
 public:
  NotSupPreserving(const std::string& what, SupWitness w)
      : std::runtime_error(what), witness(w) {}
  SupWitness witness;
};

class NonComposable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfDownset : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The right adjoint of the hat map for some fiber pair does not exist.
class AdjointMissing : public std::runtime_error {
 public:
  AdjointMissing(const std::string& what, SupWitness w)
      : std::runtime_error(what), witness(w) {}
  SupWitness witness;
};

}  // namespace qexp
