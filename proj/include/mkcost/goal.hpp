#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mkcost/substitution.hpp"
#include "mkcost/term.hpp"

namespace mkcost {

/// Immutable goal tree: equality, conjunction, disjunction, fresh-variable
/// introduction and relation invocation. Syntactic variables are slots
/// (see Term); a `fresh` node binds the slot of its level inside its body.
class Goal {
 public:
  enum class Kind : std::uint8_t { Unify, Conj, Disj, Fresh, Invoke };

  static Goal unify(Term lhs, Term rhs);
  static Goal conj(Goal left, Goal right);
  static Goal disj(Goal left, Goal right);
  static Goal fresh(std::uint32_t level, std::string name, Goal body);
  static Goal invoke(SymbolId relation, std::vector<Term> args);

  Kind kind() const noexcept;

  const Term& lhs() const;
  const Term& rhs() const;
  const Goal& left() const;
  const Goal& right() const;
  const Goal& body() const;
  std::uint32_t level() const;
  const std::string& name() const;
  SymbolId relation() const;
  std::span<const Term> args() const;

  /// Largest logic-variable index in the goal, 0 if none.
  VarIndex max_var() const noexcept;
  /// Unbound slots occur somewhere in the goal.
  bool has_slots() const noexcept;
  bool has_vars() const noexcept;

  /// g[value / slot level].
  Goal substitute_slot(std::uint32_t level, const Term& value) const;
  /// Replaces slots 0..values.size()-1 (relation parameters).
  Goal substitute_slots(std::span<const Term> values) const;
  /// g sigma: every term fully resolved through `s`.
  Goal apply(const Substitution& s) const;
  Goal rename(const std::map<VarIndex, VarIndex>& pi) const;

  bool same_node(const Goal& other) const noexcept { return node_ == other.node_; }
  friend bool operator==(const Goal& a, const Goal& b);

 private:
  struct Node;
  explicit Goal(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  template <typename TermMap>
  Goal map_terms(const TermMap& f) const;
  std::shared_ptr<const Node> node_;
};

VarSet free_vars(const Goal& g);
/// Some slot occurs outside every `fresh` binding it.
bool has_free_slots(const Goal& g);
void collect_free_vars(const Goal& g, VarSet& out);

/// Surface syntax; `param_names` name slots 0..k-1, fresh binders name
/// their own slots, logic variables print as `_N` unless in `names`.
std::string format_goal(const Goal& g, std::span<const std::string> param_names = {},
                        const VarNames* names = nullptr);

}  // namespace mkcost
