#include "qexp/lattice.hpp"

#include <algorithm>
#include <string>

namespace qexp {

namespace {

std::string pair_str(const std::vector<std::string>& names, int i, int j) {
  return "(" + names[i] + "," + names[j] + ")";
}

}  // namespace

FiniteLattice::FiniteLattice(std::vector<std::string> names,
                             const std::vector<std::pair<int, int>>& leq)
    : n_(static_cast<int>(names.size())), names_(std::move(names)) {
  if (n_ == 0) throw MalformedInput("lattice has no elements");
  leq_.assign(static_cast<std::size_t>(n_) * n_, 0);
  for (auto [i, j] : leq) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_) {
      throw MalformedInput("leq pair [" + std::to_string(i) + "," +
                           std::to_string(j) + "] out of range");
    }
    leq_[i * n_ + j] = 1;
  }
  for (int i = 0; i < n_; ++i) {
    if (!leq_[i * n_ + i]) {
      throw MalformedInput("leq not reflexive: missing " +
                           pair_str(names_, i, i));
    }
  }
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if (leq_[i * n_ + j] && leq_[j * n_ + i]) {
        throw MalformedInput("leq not antisymmetric: " +
                             pair_str(names_, i, j) + " and " +
                             pair_str(names_, j, i));
      }
    }
  }
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (!leq_[i * n_ + j]) continue;
      for (int k = 0; k < n_; ++k) {
        if (leq_[j * n_ + k] && !leq_[i * n_ + k]) {
          throw MalformedInput("leq not transitive: " + pair_str(names_, i, j) +
                               " and " + pair_str(names_, j, k) +
                               " present but " + pair_str(names_, i, k) +
                               " missing");
        }
      }
    }
  }

  auto least_of = [&](const std::vector<int>& cands) -> int {
    for (int c : cands) {
      bool least = true;
      for (int d : cands) {
        if (!leq_[c * n_ + d]) {
          least = false;
          break;
        }
      }
      if (least) return c;
    }
    return -1;
  };
  auto greatest_of = [&](const std::vector<int>& cands) -> int {
    for (int c : cands) {
      bool greatest = true;
      for (int d : cands) {
        if (!leq_[d * n_ + c]) {
          greatest = false;
          break;
        }
      }
      if (greatest) return c;
    }
    return -1;
  };

  std::vector<int> all(n_);
  for (int i = 0; i < n_; ++i) all[i] = i;
  bottom_ = least_of(all);
  top_ = greatest_of(all);
  if (bottom_ < 0) throw MalformedInput("order has no bottom element");
  if (top_ < 0) throw MalformedInput("order has no top element");

  join_.assign(static_cast<std::size_t>(n_) * n_, 0);
  meet_.assign(static_cast<std::size_t>(n_) * n_, 0);
  std::vector<int> ub, lb;
  for (int x = 0; x < n_; ++x) {
    for (int y = x; y < n_; ++y) {
      ub.clear();
      lb.clear();
      for (int z = 0; z < n_; ++z) {
        if (leq_[x * n_ + z] && leq_[y * n_ + z]) ub.push_back(z);
        if (leq_[z * n_ + x] && leq_[z * n_ + y]) lb.push_back(z);
      }
      int j = least_of(ub);
      int m = greatest_of(lb);
      if (j < 0) {
        throw MalformedInput("no least upper bound for " +
                             pair_str(names_, x, y));
      }
      if (m < 0) {
        throw MalformedInput("no greatest lower bound for " +
                             pair_str(names_, x, y));
      }
      join_[x * n_ + y] = join_[y * n_ + x] = j;
      meet_[x * n_ + y] = meet_[y * n_ + x] = m;
    }
  }
}

FiniteLattice FiniteLattice::chain(int n) {
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> leq;
  for (int i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    for (int j = i; j < n; ++j) leq.emplace_back(i, j);
  }
  return FiniteLattice(std::move(names), leq);
}

void FiniteLattice::check(Elem x) const {
  if (!contains(x)) {
    throw MalformedInput("element index " + std::to_string(x) +
                         " out of range for lattice of size " +
                         std::to_string(n_));
  }
}

Elem FiniteLattice::join(std::span<const Elem> s) const {
  Elem acc = bottom_;
  for (Elem x : s) {
    check(x);
    acc = join(acc, x);
  }
  return acc;
}

Elem FiniteLattice::meet(std::span<const Elem> s) const {
  Elem acc = top_;
  for (Elem x : s) {
    check(x);
    acc = meet(acc, x);
  }
  return acc;
}

std::vector<std::pair<int, int>> FiniteLattice::leq_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (leq(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

bool FiniteLattice::is_distributive() const {
  for (int x = 0; x < n_; ++x) {
    for (int y = 0; y < n_; ++y) {
      for (int z = 0; z < n_; ++z) {
        if (meet(x, join(y, z)) != join(meet(x, y), meet(x, z))) return false;
      }
    }
  }
  return true;
}

MonotoneMap::MonotoneMap(LatticePtr source, LatticePtr target,
                         std::vector<Elem> table)
    : source_(std::move(source)),
      target_(std::move(target)),
      table_(std::move(table)) {
  if (static_cast<int>(table_.size()) != source_->size()) {
    throw MalformedInput("monotone map table has " +
                         std::to_string(table_.size()) + " entries, expected " +
                         std::to_string(source_->size()));
  }
  for (Elem y : table_) {
    if (!target_->contains(y)) {
      throw MalformedInput("monotone map value " + std::to_string(y) +
                           " out of range");
    }
  }
  const int n = source_->size();
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (source_->leq(x, y) && !target_->leq(table_[x], table_[y])) {
        throw MalformedInput("map is not monotone at " + source_->name(x) +
                             " <= " + source_->name(y));
      }
    }
  }
}

MonotoneMap MonotoneMap::identity(LatticePtr l) {
  std::vector<Elem> t(l->size());
  for (int i = 0; i < l->size(); ++i) t[i] = i;
  return MonotoneMap(l, l, std::move(t));
}

std::optional<SupWitness> sup_preservation_failure(const MonotoneMap& f) {
  const auto& s = f.source();
  const auto& t = f.target();
  if (f(s.bottom()) != t.bottom()) return SupWitness{true, -1, -1};
  for (int x = 0; x < s.size(); ++x) {
    for (int y = x + 1; y < s.size(); ++y) {
      if (f(s.join(x, y)) != t.join(f(x), f(y))) return SupWitness{false, x, y};
    }
  }
  return std::nullopt;
}

bool is_sup_preserving(const MonotoneMap& f) {
  return !sup_preservation_failure(f).has_value();
}

MonotoneMap right_adjoint_of(const MonotoneMap& f) {
  if (auto w = sup_preservation_failure(f)) {
    throw NotSupPreserving(
        w->nullary ? std::string("map does not preserve bottom")
                   : "map does not preserve the join of " +
                         f.source().name(w->x) + " and " +
                         f.source().name(w->y),
        *w);
  }
  const auto& s = f.source();
  const auto& t = f.target();
  std::vector<Elem> g(t.size());
  for (int y = 0; y < t.size(); ++y) {
    Elem acc = s.bottom();
    for (int x = 0; x < s.size(); ++x) {
      if (t.leq(f(x), y)) acc = s.join(acc, x);
    }
    g[y] = acc;
  }
  return MonotoneMap(f.target_ptr(), f.source_ptr(), std::move(g));
}

std::optional<Elem> Downset::index_of(Elem ambient) const {
  auto it = std::find(embed.begin(), embed.end(), ambient);
  if (it == embed.end()) return std::nullopt;
  return static_cast<Elem>(it - embed.begin());
}

Downset downset_lattice(const FiniteLattice& l, Elem b) {
  if (!l.contains(b)) {
    throw MalformedInput("downset generator " + std::to_string(b) +
                         " out of range");
  }
  Downset d;
  std::vector<std::string> names;
  for (int x = 0; x < l.size(); ++x) {
    if (l.leq(x, b)) {
      d.embed.push_back(x);
      names.push_back(l.name(x));
    }
  }
  std::vector<std::pair<int, int>> leq;
  const int m = static_cast<int>(d.embed.size());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (l.leq(d.embed[i], d.embed[j])) leq.emplace_back(i, j);
    }
  }
  d.lattice = std::make_shared<const FiniteLattice>(std::move(names), leq);
  return d;
}

}  // namespace qexp
