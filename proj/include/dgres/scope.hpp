#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dgres {

using GenId = std::uint32_t;

struct GenInfo {
  std::string name;
  int degree = 0;
  int weight = 0;  // 0 = no declared weight

  bool operator==(const GenInfo&) const = default;
};

struct ScopeMismatch : std::logic_error {
  using std::logic_error::logic_error;
};

// An immutable, append-only universe of generators. Extending a scope keeps
// generator ids stable, so elements written over a base scope remain valid in
// any extension. Two scopes are compatible when one lies on the other's
// parent chain.
class Scope;
using ScopePtr = std::shared_ptr<const Scope>;

class Scope {
 public:
  static ScopePtr make(std::vector<GenInfo> gens) {
    return ScopePtr(new Scope(nullptr, std::move(gens)));
  }

  static ScopePtr extend(const ScopePtr& base, std::vector<GenInfo> extra) {
    if (!base) return make(std::move(extra));
    std::vector<GenInfo> all = base->gens_;
    for (auto& g : extra) all.push_back(std::move(g));
    return ScopePtr(new Scope(base, std::move(all)));
  }

  std::size_t size() const { return gens_.size(); }
  const GenInfo& operator[](GenId id) const { return gens_.at(id); }
  int degree(GenId id) const { return gens_.at(id).degree; }
  bool odd(GenId id) const { return degree(id) % 2 != 0; }
  const ScopePtr& parent() const { return parent_; }

  std::optional<GenId> find(std::string_view name) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].name == name) return static_cast<GenId>(i);
    return std::nullopt;
  }

  bool chain_contains(const Scope* other) const {
    for (const Scope* s = this; s != nullptr; s = s->parent_.get())
      if (s == other) return true;
    return false;
  }

 private:
  Scope(ScopePtr parent, std::vector<GenInfo> gens)
      : parent_(std::move(parent)), gens_(std::move(gens)) {}

  ScopePtr parent_;
  std::vector<GenInfo> gens_;  // full list, including every ancestor's
};

// Picks the deeper of two chain-related scopes; null acts as "any scope".
inline const ScopePtr& common_scope(const ScopePtr& a, const ScopePtr& b) {
  if (!a) return b;
  if (!b || a == b) return a;
  if (a->chain_contains(b.get())) return a;
  if (b->chain_contains(a.get())) return b;
  throw ScopeMismatch("elements belong to unrelated generator scopes");
}

}  // namespace dgres
