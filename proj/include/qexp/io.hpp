#pragma once

#include <map>
#include <string>

#include "json.hpp"
#include "qexp/oracle.hpp"

namespace qexp {

using Json = nlohmann::json;

/// A parsed instance file. Sections are keyed by name; std::map keeps every
/// listing in name order, which is what makes output byte-stable.
struct Instance {
  std::map<std::string, QuantaloidPtr> quantaloids;
  std::map<std::string, CategoryPtr> categories;
  std::map<std::string, QFunctor> functors;
  std::map<std::string, QDistributor> distributors;

  /// Lookups throw MalformedInput naming the missing entry.
  const QuantaloidPtr& quantaloid(const std::string& name) const;
  const CategoryPtr& category(const std::string& name) const;
  const QFunctor& functor(const std::string& name) const;

  std::string name_of(const QuantaloidPtr& q) const;
  std::string name_of(const CategoryPtr& c) const;
};

/// Structural parsing: schema, references and index ranges. Axioms are left
/// to the verify_* functions. Throws MalformedInput.
Instance parse_instance(const Json& doc);
Instance parse_instance_text(const std::string& text);
Instance read_instance(const std::string& path);

Json lattice_to_json(const FiniteLattice& l);
Json quantaloid_to_json(const Quantaloid& q);
Json to_json(const Instance& inst);

/// Two-space indentation and a trailing newline.
std::string dump(const Json& j);

/// Writes through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& content);

/// {"verdict", "condition1", "condition2", "witnesses"}; objects are named,
/// lattice elements are given by index and name.
Json report_to_json(const ConditionReport& r, const QFunctor& f);

Json oracle_to_json(const OracleVerdict& v);
Json brute_force_to_json(const BruteForceResult& r);

/// Every verifier on every structure, keyed "quantaloid Q", "category A", ...
/// Only structures with violations appear.
std::map<std::string, Report> validate_instance(const Instance& inst);

}  // namespace qexp
