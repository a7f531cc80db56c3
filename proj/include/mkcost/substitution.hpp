#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "mkcost/term.hpp"

namespace mkcost {

/// Default bound on resolution depth before a substitution is declared cyclic.
inline constexpr std::size_t kDefaultDepthGuard = 1'000'000;

/// Persistent finite map from logic variables to terms, read triangularly:
/// a bound variable's image may mention other bound variables, and
/// `apply` resolves chains on demand. Binding returns a new substitution
/// sharing almost all structure with the old one (a 16-way radix trie keyed
/// by variable index).
class Substitution {
 public:
  Substitution() = default;

  bool empty() const noexcept { return size_ == 0; }
  std::size_t size() const noexcept { return size_; }

  /// The image bound directly to `v`, or nullptr.
  const Term* find(VarIndex v) const;
  bool contains(VarIndex v) const { return find(v) != nullptr; }

  /// Returns a copy with `v` bound to `t` (replacing any earlier binding).
  Substitution bind(VarIndex v, Term t) const;

  /// Bindings in ascending variable order.
  std::vector<std::pair<VarIndex, Term>> bindings() const;

  VarSet domain() const;
  /// Free variables of all images (VRan).
  VarSet var_range() const;

  /// Follows variable bindings at the root of `t` only.
  Term walk(Term t, std::size_t depth_guard = kDefaultDepthGuard) const;

  /// Full resolution: every bound variable reachable in `t` is replaced until
  /// fixpoint. Throws CyclicTermError past `depth_guard` nesting levels.
  Term apply(const Term& t, std::size_t depth_guard = kDefaultDepthGuard) const;

  friend bool operator==(const Substitution& a, const Substitution& b);

 private:
  struct Node;
  template <typename F>
  static void visit(const Node* node, unsigned level, unsigned levels, VarIndex prefix, F& f);

  std::shared_ptr<const Node> root_;
  unsigned levels_ = 0;
  std::size_t size_ = 0;
};

std::string format_substitution(const Substitution& s, const VarNames* names = nullptr);

}  // namespace mkcost
