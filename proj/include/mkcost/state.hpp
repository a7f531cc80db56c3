#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "mkcost/goal.hpp"
#include "mkcost/substitution.hpp"

namespace mkcost {

/// Environment (sigma, n): the current substitution and the number of
/// logic variables allocated so far.
struct Env {
  Substitution subst;
  VarIndex counter = 0;

  friend bool operator==(const Env& a, const Env& b) {
    return a.counter == b.counter && a.subst == b.subst;
  }
};

/// Non-terminal search state: a task <g, e>, a sum s1 (+) s2 or a product
/// s (*) g. The terminal state is represented by an empty optional
/// (`MaybeState`).
///
/// A product may be marked `tracked`; stepping a tracked product reports
/// every answer of its left operand together with the left operand's
/// successor (see StepHooks).
class State {
 public:
  enum class Kind : std::uint8_t { Leaf, Sum, Prod };

  static State leaf(Goal goal, Env env);
  static State sum(State left, State right);
  static State prod(State left, Goal goal, bool tracked = false);

  Kind kind() const noexcept;
  bool is_leaf() const noexcept { return kind() == Kind::Leaf; }

  /// Leaf goal or product right operand.
  const Goal& goal() const;
  const Env& env() const;
  State left() const;
  State right() const;
  bool tracked() const;

  bool same_node(const State& other) const noexcept { return node_ == other.node_; }

 private:
  struct Node;
  explicit State(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

using MaybeState = std::optional<State>;

/// Length of the leftmost branch: 1 for a leaf, left + 1 otherwise.
std::size_t lh(const State& s);

/// Leaves: FV(g), Dom(sigma) and VRan(sigma) within alpha_1..alpha_n and no
/// unbound slots. Sums: both sides. Products: left side, and FV of the
/// right goal within the counter of every leaf on the left.
bool well_formed(const State& s);

/// Shape of the state: `(+ l r)`, `(* l)`, and leaves as `[==]`, `[&]`,
/// `[|]`, `[fresh]` or `[relation]`.
std::string format_shape(const State& s);

}  // namespace mkcost
