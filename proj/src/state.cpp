#include "mkcost/state.hpp"

#include <stdexcept>
#include <vector>

namespace mkcost {

struct State::Node {
  Kind kind = Kind::Leaf;
  std::optional<Goal> goal;
  Env env;
  std::shared_ptr<const Node> left;
  std::shared_ptr<const Node> right;
  bool tracked = false;
};

State State::leaf(Goal goal, Env env) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Leaf;
  n->goal = std::move(goal);
  n->env = std::move(env);
  return State(std::move(n));
}

State State::sum(State left, State right) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->left = std::move(left.node_);
  n->right = std::move(right.node_);
  return State(std::move(n));
}

State State::prod(State left, Goal goal, bool tracked) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Prod;
  n->left = std::move(left.node_);
  n->goal = std::move(goal);
  n->tracked = tracked;
  return State(std::move(n));
}

State::Kind State::kind() const noexcept { return node_->kind; }

const Goal& State::goal() const {
  if (kind() == Kind::Sum) throw std::logic_error("sum state has no goal");
  return *node_->goal;
}

const Env& State::env() const {
  if (kind() != Kind::Leaf) throw std::logic_error("only leaf states carry an environment");
  return node_->env;
}

State State::left() const {
  if (kind() == Kind::Leaf) throw std::logic_error("leaf state has no children");
  return State(node_->left);
}

State State::right() const {
  if (kind() != Kind::Sum) throw std::logic_error("only sum states have a right state");
  return State(node_->right);
}

bool State::tracked() const { return kind() == Kind::Prod && node_->tracked; }

std::size_t lh(const State& s) {
  std::size_t h = 1;
  State cur = s;
  while (!cur.is_leaf()) {
    cur = cur.left();
    ++h;
  }
  return h;
}

namespace {

bool leaf_well_formed(const Goal& g, const Env& e) {
  if (has_free_slots(g) || g.max_var() > e.counter) return false;
  for (const auto& [v, t] : e.subst.bindings()) {
    if (v > e.counter || t.max_var() > e.counter) return false;
  }
  return true;
}

// Smallest counter among the leaves of `s`.
VarIndex min_counter(const State& s) {
  if (s.is_leaf()) return s.env().counter;
  VarIndex m = min_counter(s.left());
  if (s.kind() == State::Kind::Sum) m = std::min(m, min_counter(s.right()));
  return m;
}

}  // namespace

bool well_formed(const State& s) {
  switch (s.kind()) {
    case State::Kind::Leaf:
      return leaf_well_formed(s.goal(), s.env());
    case State::Kind::Sum:
      return well_formed(s.left()) && well_formed(s.right());
    case State::Kind::Prod:
      return !has_free_slots(s.goal()) && well_formed(s.left()) && s.goal().max_var() <= min_counter(s.left());
  }
  return false;
}

namespace {

void shape(const State& s, std::string& out) {
  switch (s.kind()) {
    case State::Kind::Leaf:
      switch (s.goal().kind()) {
        case Goal::Kind::Unify: out += "[==]"; return;
        case Goal::Kind::Conj: out += "[&]"; return;
        case Goal::Kind::Disj: out += "[|]"; return;
        case Goal::Kind::Fresh: out += "[fresh]"; return;
        case Goal::Kind::Invoke: out += "[" + Symbols::name(s.goal().relation()) + "]"; return;
      }
      return;
    case State::Kind::Sum:
      out += "(+ ";
      shape(s.left(), out);
      out += ' ';
      shape(s.right(), out);
      out += ')';
      return;
    case State::Kind::Prod:
      out += "(* ";
      shape(s.left(), out);
      out += ')';
      return;
  }
}

}  // namespace

std::string format_shape(const State& s) {
  std::string out;
  shape(s, out);
  return out;
}

}  // namespace mkcost
