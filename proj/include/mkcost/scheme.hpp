#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mkcost/program.hpp"
#include "mkcost/unify.hpp"

namespace mkcost {

/// Grounding closure: the least superset of `grounded` containing FV(delta(x))
/// for every x it contains.
VarSet upd(const VarSet& grounded, const Substitution& delta);

/// `x = delta(x)` for every x in `grounded` bound by `delta`.
struct Constraint {
  VarIndex var;
  Term value;

  friend bool operator==(const Constraint& a, const Constraint& b) {
    return a.var == b.var && a.value == b.value;
  }
};
std::vector<Constraint> constr(const Substitution& delta, const VarSet& grounded);

struct SchemeNode;
using Scheme = std::shared_ptr<const SchemeNode>;

/// Symbolic execution tree of a goal for a set of grounded variables.
///
/// Leaves are equalities or calls executed last in their branch (or
/// equalities that fail symbolically). Inner equality nodes carry the
/// constraints a valuation has to satisfy to continue; inner call nodes
/// continue once per answer of the call. `goal` holds the node's equality
/// or call with the branch substitution applied.
struct SchemeNode {
  enum class Kind { UnifyLeaf, InvokeLeaf, UnifyNode, InvokeNode, Fork };

  Kind kind = Kind::UnifyLeaf;
  std::optional<Goal> goal;
  /// Variables grounded when the node executes.
  VarSet grounded;
  std::vector<Constraint> constraints;
  /// An equality leaf reached with goals still pending: its terms do not unify.
  bool dead = false;
  Scheme child;
  Scheme left;
  Scheme right;
  /// Surface names of the variables visible at this node.
  VarNames names;
};

/// Builds the scheme of `g` with `deferred` goals pending (next goal last),
/// branch substitution `sigma` (idempotent), counter `n` and grounded set.
Scheme build_scheme(const Goal& g, std::vector<Goal> deferred, const Substitution& sigma, VarIndex n,
                    const VarSet& grounded, const VarNames& names = {});

/// A relation body instantiated with alpha_1..alpha_k for its parameters
/// together with its scheme.
struct RelationScheme {
  const Relation* relation = nullptr;
  std::vector<bool> grounded_params;
  Goal goal;
  VarSet grounded;
  Scheme root;
};

RelationScheme scheme_for_relation(const Relation& relation, const std::vector<bool>& grounded_params);

/// Memoizes schemes per (relation, grounded parameter pattern). Thread-safe.
class SchemeCache {
 public:
  std::shared_ptr<const RelationScheme> get(const Relation& relation, const std::vector<bool>& grounded_params);

 private:
  std::mutex mutex_;
  std::map<std::pair<SymbolId, std::vector<bool>>, std::shared_ptr<const RelationScheme>> cache_;
};

/// Indented tree; grounded variables are suffixed with `*`, dead leaves
/// marked `(fails)`, edges show their constraints in brackets.
std::string render_text(const RelationScheme& scheme);
std::string render_dot(const RelationScheme& scheme);

/// Node count by kind, for tests and summaries.
std::size_t scheme_size(const Scheme& s);

}  // namespace mkcost
