#include "mkcost/goal.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mkcost {

struct Goal::Node {
  Kind kind = Kind::Unify;
  VarIndex max_var = 0;
  bool vars = false;
  bool slots = false;
  std::vector<Term> terms;  // unify: lhs, rhs; invoke: arguments
  std::vector<Goal> kids;   // conj/disj: 2, fresh: 1
  std::uint32_t level = 0;
  std::string name;
  SymbolId relation = 0;
};

namespace {
void absorb(VarIndex& max_var, bool& vars, bool& slots, const Term& t) {
  max_var = std::max(max_var, t.max_var());
  vars = vars || t.has_vars();
  slots = slots || t.has_slots();
}
}  // namespace

Goal Goal::unify(Term lhs, Term rhs) {
  Node n;
  n.kind = Kind::Unify;
  absorb(n.max_var, n.vars, n.slots, lhs);
  absorb(n.max_var, n.vars, n.slots, rhs);
  n.terms = {std::move(lhs), std::move(rhs)};
  return Goal(std::make_shared<const Node>(std::move(n)));
}

Goal Goal::conj(Goal left, Goal right) {
  Node n;
  n.kind = Kind::Conj;
  n.max_var = std::max(left.max_var(), right.max_var());
  n.vars = left.has_vars() || right.has_vars();
  n.slots = left.has_slots() || right.has_slots();
  n.kids = {std::move(left), std::move(right)};
  return Goal(std::make_shared<const Node>(std::move(n)));
}

Goal Goal::disj(Goal left, Goal right) {
  Node n;
  n.kind = Kind::Disj;
  n.max_var = std::max(left.max_var(), right.max_var());
  n.vars = left.has_vars() || right.has_vars();
  n.slots = left.has_slots() || right.has_slots();
  n.kids = {std::move(left), std::move(right)};
  return Goal(std::make_shared<const Node>(std::move(n)));
}

Goal Goal::fresh(std::uint32_t level, std::string name, Goal body) {
  Node n;
  n.kind = Kind::Fresh;
  n.max_var = body.max_var();
  n.vars = body.has_vars();
  n.slots = body.has_slots();
  n.level = level;
  n.name = std::move(name);
  n.kids = {std::move(body)};
  return Goal(std::make_shared<const Node>(std::move(n)));
}

Goal Goal::invoke(SymbolId relation, std::vector<Term> args) {
  Node n;
  n.kind = Kind::Invoke;
  for (const auto& a : args) absorb(n.max_var, n.vars, n.slots, a);
  n.relation = relation;
  n.terms = std::move(args);
  return Goal(std::make_shared<const Node>(std::move(n)));
}

Goal::Kind Goal::kind() const noexcept { return node_->kind; }

const Term& Goal::lhs() const {
  if (kind() != Kind::Unify) throw std::logic_error("goal is not an equality");
  return node_->terms[0];
}
const Term& Goal::rhs() const {
  if (kind() != Kind::Unify) throw std::logic_error("goal is not an equality");
  return node_->terms[1];
}
const Goal& Goal::left() const {
  if (kind() != Kind::Conj && kind() != Kind::Disj) throw std::logic_error("goal is not binary");
  return node_->kids[0];
}
const Goal& Goal::right() const {
  if (kind() != Kind::Conj && kind() != Kind::Disj) throw std::logic_error("goal is not binary");
  return node_->kids[1];
}
const Goal& Goal::body() const {
  if (kind() != Kind::Fresh) throw std::logic_error("goal is not fresh");
  return node_->kids[0];
}
std::uint32_t Goal::level() const {
  if (kind() != Kind::Fresh) throw std::logic_error("goal is not fresh");
  return node_->level;
}
const std::string& Goal::name() const {
  if (kind() != Kind::Fresh) throw std::logic_error("goal is not fresh");
  return node_->name;
}
SymbolId Goal::relation() const {
  if (kind() != Kind::Invoke) throw std::logic_error("goal is not an invocation");
  return node_->relation;
}
std::span<const Term> Goal::args() const {
  if (kind() != Kind::Invoke) throw std::logic_error("goal is not an invocation");
  return node_->terms;
}

VarIndex Goal::max_var() const noexcept { return node_->max_var; }
bool Goal::has_slots() const noexcept { return node_->slots; }
bool Goal::has_vars() const noexcept { return node_->vars; }

template <typename TermMap>
Goal Goal::map_terms(const TermMap& f) const {
  switch (kind()) {
    case Kind::Unify:
      return unify(f(node_->terms[0]), f(node_->terms[1]));
    case Kind::Conj:
      return conj(node_->kids[0].map_terms(f), node_->kids[1].map_terms(f));
    case Kind::Disj:
      return disj(node_->kids[0].map_terms(f), node_->kids[1].map_terms(f));
    case Kind::Fresh:
      return fresh(node_->level, node_->name, node_->kids[0].map_terms(f));
    case Kind::Invoke: {
      std::vector<Term> args;
      args.reserve(node_->terms.size());
      for (const auto& a : node_->terms) args.push_back(f(a));
      return invoke(node_->relation, std::move(args));
    }
  }
  throw std::logic_error("unreachable goal kind");
}

Goal Goal::substitute_slot(std::uint32_t level, const Term& value) const {
  if (!has_slots()) return *this;
  return map_terms([&](const Term& t) { return mkcost::substitute_slot(t, level, value); });
}

Goal Goal::substitute_slots(std::span<const Term> values) const {
  if (!has_slots()) return *this;
  return map_terms([&](const Term& t) { return mkcost::substitute_slots(t, values); });
}

Goal Goal::apply(const Substitution& s) const {
  if (!has_vars() || s.empty()) return *this;
  return map_terms([&](const Term& t) { return s.apply(t); });
}

Goal Goal::rename(const std::map<VarIndex, VarIndex>& pi) const {
  if (!has_vars()) return *this;
  return map_terms([&](const Term& t) { return mkcost::rename(t, pi); });
}

bool operator==(const Goal& a, const Goal& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Goal::Kind::Unify:
      return x.terms == y.terms;
    case Goal::Kind::Conj:
    case Goal::Kind::Disj:
      return x.kids[0] == y.kids[0] && x.kids[1] == y.kids[1];
    case Goal::Kind::Fresh:
      return x.level == y.level && x.kids[0] == y.kids[0];
    case Goal::Kind::Invoke:
      return x.relation == y.relation && x.terms == y.terms;
  }
  return false;
}

void collect_free_vars(const Goal& g, VarSet& out) {
  if (!g.has_vars()) return;
  switch (g.kind()) {
    case Goal::Kind::Unify:
      collect_free_vars(g.lhs(), out);
      collect_free_vars(g.rhs(), out);
      return;
    case Goal::Kind::Conj:
    case Goal::Kind::Disj:
      collect_free_vars(g.left(), out);
      collect_free_vars(g.right(), out);
      return;
    case Goal::Kind::Fresh:
      collect_free_vars(g.body(), out);
      return;
    case Goal::Kind::Invoke:
      for (const auto& a : g.args()) collect_free_vars(a, out);
      return;
  }
}

VarSet free_vars(const Goal& g) {
  VarSet out;
  collect_free_vars(g, out);
  return out;
}

namespace {

bool term_has_free_slot(const Term& t, const std::vector<bool>& bound) {
  if (!t.has_slots()) return false;
  if (t.is_slot()) return t.slot_level() >= bound.size() || !bound[t.slot_level()];
  for (const auto& a : t.args()) {
    if (term_has_free_slot(a, bound)) return true;
  }
  return false;
}

bool goal_has_free_slot(const Goal& g, std::vector<bool>& bound) {
  if (!g.has_slots()) return false;
  switch (g.kind()) {
    case Goal::Kind::Unify:
      return term_has_free_slot(g.lhs(), bound) || term_has_free_slot(g.rhs(), bound);
    case Goal::Kind::Invoke:
      for (const auto& a : g.args()) {
        if (term_has_free_slot(a, bound)) return true;
      }
      return false;
    case Goal::Kind::Conj:
    case Goal::Kind::Disj:
      return goal_has_free_slot(g.left(), bound) || goal_has_free_slot(g.right(), bound);
    case Goal::Kind::Fresh: {
      auto level = g.level();
      if (bound.size() <= level) bound.resize(level + 1, false);
      bool saved = bound[level];
      bound[level] = true;
      bool r = goal_has_free_slot(g.body(), bound);
      bound[level] = saved;
      return r;
    }
  }
  return false;
}

}  // namespace

bool has_free_slots(const Goal& g) {
  std::vector<bool> bound;
  return goal_has_free_slot(g, bound);
}

namespace {

struct GoalPrinter {
  std::vector<std::string> slot_names;
  const VarNames* names;
  std::ostringstream os;

  std::string slot_name(std::uint32_t level) const {
    if (level < slot_names.size() && !slot_names[level].empty()) return slot_names[level];
    return "$" + std::to_string(level);
  }

  void term(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Slot:
        os << slot_name(t.slot_level());
        return;
      case Term::Kind::Var:
        os << format_term(t, names);
        return;
      case Term::Kind::Ctor:
        os << Symbols::name(t.symbol());
        if (!t.args().empty()) {
          os << '(';
          for (std::size_t i = 0; i < t.args().size(); ++i) {
            if (i) os << ", ";
            term(t.args()[i]);
          }
          os << ')';
        }
        return;
    }
  }

  // Precedence: 0 disjunction, 1 conjunction, 2 base.
  void goal(const Goal& g, int context) {
    switch (g.kind()) {
      case Goal::Kind::Unify:
        term(g.lhs());
        os << " == ";
        term(g.rhs());
        return;
      case Goal::Kind::Invoke:
        os << Symbols::name(g.relation()) << '(';
        for (std::size_t i = 0; i < g.args().size(); ++i) {
          if (i) os << ", ";
          term(g.args()[i]);
        }
        os << ')';
        return;
      case Goal::Kind::Fresh: {
        os << "fresh ";
        // Collapse immediately nested binders into one list.
        const Goal* cur = &g;
        bool first = true;
        std::vector<std::pair<std::uint32_t, std::string>> saved;
        while (cur->kind() == Goal::Kind::Fresh) {
          if (!first) os << ", ";
          first = false;
          auto level = cur->level();
          if (slot_names.size() <= level) slot_names.resize(level + 1);
          saved.emplace_back(level, slot_names[level]);
          slot_names[level] = cur->name();
          os << cur->name();
          cur = &cur->body();
        }
        os << " { ";
        goal(*cur, 0);
        os << " }";
        for (auto it = saved.rbegin(); it != saved.rend(); ++it) slot_names[it->first] = it->second;
        return;
      }
      case Goal::Kind::Conj:
      case Goal::Kind::Disj: {
        int own = g.kind() == Goal::Kind::Disj ? 0 : 1;
        const char* op = own == 0 ? " | " : " & ";
        bool parens = own < context;
        if (parens) os << '(';
        goal(g.left(), own);
        os << op;
        // Chains are left-nested, so a right operand of the same operator needs parentheses.
        goal(g.right(), own + 1);
        if (parens) os << ')';
        return;
      }
    }
  }
};

}  // namespace

std::string format_goal(const Goal& g, std::span<const std::string> param_names, const VarNames* names) {
  GoalPrinter p{std::vector<std::string>(param_names.begin(), param_names.end()), names, {}};
  p.goal(g, 0);
  return p.os.str();
}

}  // namespace mkcost
