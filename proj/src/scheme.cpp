#include "mkcost/scheme.hpp"

#include <sstream>

#include "mkcost/error.hpp"

namespace mkcost {

VarSet upd(const VarSet& grounded, const Substitution& delta) {
  VarSet out = grounded;
  std::vector<VarIndex> work(grounded.begin(), grounded.end());
  while (!work.empty()) {
    VarIndex x = work.back();
    work.pop_back();
    const Term* image = delta.find(x);
    if (!image) continue;
    for (VarIndex y : free_vars(*image)) {
      if (out.insert(y).second) work.push_back(y);
    }
  }
  return out;
}

std::vector<Constraint> constr(const Substitution& delta, const VarSet& grounded) {
  std::vector<Constraint> out;
  for (const auto& [x, t] : delta.bindings()) {
    if (grounded.count(x)) out.push_back({x, t});
  }
  return out;
}

namespace {

std::shared_ptr<SchemeNode> node(SchemeNode::Kind kind, const VarSet& grounded, const VarNames& names) {
  auto n = std::make_shared<SchemeNode>();
  n->kind = kind;
  n->grounded = grounded;
  n->names = names;
  return n;
}

Goal applied(const Goal& g, const Substitution& sigma) {
  if (g.kind() == Goal::Kind::Unify) return Goal::unify(sigma.apply(g.lhs()), sigma.apply(g.rhs()));
  std::vector<Term> args;
  for (const auto& a : g.args()) args.push_back(sigma.apply(a));
  return Goal::invoke(g.relation(), std::move(args));
}

}  // namespace

Scheme build_scheme(const Goal& g, std::vector<Goal> deferred, const Substitution& sigma, VarIndex n,
                    const VarSet& grounded, const VarNames& names) {
  switch (g.kind()) {
    case Goal::Kind::Conj:
      deferred.push_back(g.right());
      return build_scheme(g.left(), std::move(deferred), sigma, n, grounded, names);
    case Goal::Kind::Disj: {
      auto fork = node(SchemeNode::Kind::Fork, grounded, names);
      fork->left = build_scheme(g.left(), deferred, sigma, n, grounded, names);
      fork->right = build_scheme(g.right(), std::move(deferred), sigma, n, grounded, names);
      return fork;
    }
    case Goal::Kind::Fresh: {
      VarNames inner = names;
      inner[n + 1] = g.name();
      return build_scheme(g.body().substitute_slot(g.level(), Term::var(n + 1)), std::move(deferred), sigma,
                          n + 1, grounded, inner);
    }
    case Goal::Kind::Unify: {
      Goal here = applied(g, sigma);
      if (deferred.empty()) {
        auto leaf = node(SchemeNode::Kind::UnifyLeaf, grounded, names);
        leaf->goal = here;
        return leaf;
      }
      auto delta = unify(here.lhs(), here.rhs(), UnifyOptions{true, kDefaultDepthGuard});
      if (!delta) {
        auto leaf = node(SchemeNode::Kind::UnifyLeaf, grounded, names);
        leaf->goal = here;
        leaf->dead = true;
        return leaf;
      }
      Substitution d = resolved(*delta);
      VarSet next_grounded = upd(grounded, d);
      auto inner = node(SchemeNode::Kind::UnifyNode, grounded, names);
      inner->goal = here;
      inner->constraints = constr(d, next_grounded);
      Goal next = deferred.back();
      deferred.pop_back();
      inner->child = build_scheme(next, std::move(deferred), compose(sigma, d), n, next_grounded, names);
      return inner;
    }
    case Goal::Kind::Invoke: {
      Goal here = applied(g, sigma);
      if (deferred.empty()) {
        auto leaf = node(SchemeNode::Kind::InvokeLeaf, grounded, names);
        leaf->goal = here;
        return leaf;
      }
      VarSet next_grounded = grounded;
      for (const auto& a : here.args()) collect_free_vars(a, next_grounded);
      auto inner = node(SchemeNode::Kind::InvokeNode, grounded, names);
      inner->goal = here;
      Goal next = deferred.back();
      deferred.pop_back();
      inner->child = build_scheme(next, std::move(deferred), sigma, n, next_grounded, names);
      return inner;
    }
  }
  throw EngineError("unknown goal kind");
}

RelationScheme scheme_for_relation(const Relation& relation, const std::vector<bool>& grounded_params) {
  if (grounded_params.size() != relation.arity()) {
    throw EngineError("relation '" + relation.name + "' has " + std::to_string(relation.arity()) +
                      " parameters, grounded pattern has " + std::to_string(grounded_params.size()));
  }
  std::vector<Term> args;
  VarSet grounded;
  VarNames names;
  for (std::size_t i = 0; i < relation.arity(); ++i) {
    auto v = static_cast<VarIndex>(i + 1);
    args.push_back(Term::var(v));
    names[v] = relation.params[i];
    if (grounded_params[i]) grounded.insert(v);
  }
  Goal goal = instantiate(relation, args);
  Scheme root = build_scheme(goal, {}, Substitution{}, static_cast<VarIndex>(relation.arity()), grounded, names);
  return RelationScheme{&relation, grounded_params, goal, grounded, root};
}

std::shared_ptr<const RelationScheme> SchemeCache::get(const Relation& relation,
                                                       const std::vector<bool>& grounded_params) {
  std::lock_guard lock(mutex_);
  auto key = std::make_pair(relation.symbol, grounded_params);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  auto s = std::make_shared<const RelationScheme>(scheme_for_relation(relation, grounded_params));
  cache_.emplace(key, s);
  return s;
}

std::size_t scheme_size(const Scheme& s) {
  if (!s) return 0;
  return 1 + scheme_size(s->child) + scheme_size(s->left) + scheme_size(s->right);
}

namespace {

void marked_term(std::ostream& os, const Term& t, const VarNames& names, const VarSet* grounded) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = names.find(t.var_index());
      if (it != names.end()) {
        os << it->second;
      } else {
        os << '_' << t.var_index();
      }
      if (grounded && grounded->count(t.var_index())) os << '*';
      return;
    }
    case Term::Kind::Slot:
      os << '$' << t.slot_level();
      return;
    case Term::Kind::Ctor:
      os << Symbols::name(t.symbol());
      if (!t.args().empty()) {
        os << '(';
        for (std::size_t i = 0; i < t.args().size(); ++i) {
          if (i) os << ", ";
          marked_term(os, t.args()[i], names, grounded);
        }
        os << ')';
      }
      return;
  }
}

std::string node_label(const SchemeNode& n) {
  std::ostringstream os;
  if (n.kind == SchemeNode::Kind::Fork) return "fork";
  const Goal& g = *n.goal;
  if (g.kind() == Goal::Kind::Unify) {
    marked_term(os, g.lhs(), n.names, &n.grounded);
    os << " == ";
    marked_term(os, g.rhs(), n.names, &n.grounded);
    if (n.dead) os << "  (fails)";
  } else {
    os << Symbols::name(g.relation()) << '(';
    for (std::size_t i = 0; i < g.args().size(); ++i) {
      if (i) os << ", ";
      marked_term(os, g.args()[i], n.names, &n.grounded);
    }
    os << ')';
  }
  return os.str();
}

std::string edge_label(const SchemeNode& n) {
  std::ostringstream os;
  if (n.kind == SchemeNode::Kind::UnifyNode) {
    for (std::size_t i = 0; i < n.constraints.size(); ++i) {
      if (i) os << ", ";
      marked_term(os, Term::var(n.constraints[i].var), n.names, nullptr);
      os << " = ";
      marked_term(os, n.constraints[i].value, n.names, nullptr);
    }
  } else {
    const Goal& g = *n.goal;
    os << '(';
    for (std::size_t i = 0; i < g.args().size(); ++i) {
      if (i) os << ", ";
      marked_term(os, g.args()[i], n.names, nullptr);
    }
    os << ") in " << Symbols::name(g.relation());
  }
  return os.str();
}

std::string header(const RelationScheme& rs) {
  std::ostringstream os;
  os << rs.relation->name << '(';
  for (std::size_t i = 0; i < rs.relation->arity(); ++i) {
    if (i) os << ", ";
    os << rs.relation->params[i] << (rs.grounded_params[i] ? "*" : "");
  }
  os << ')';
  return os.str();
}

void text(std::ostream& os, const Scheme& s, int depth) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  os << pad << node_label(*s) << '\n';
  switch (s->kind) {
    case SchemeNode::Kind::Fork:
      text(os, s->left, depth + 1);
      text(os, s->right, depth + 1);
      return;
    case SchemeNode::Kind::UnifyNode:
    case SchemeNode::Kind::InvokeNode:
      os << pad << "  [" << edge_label(*s) << "]\n";
      text(os, s->child, depth + 1);
      return;
    default:
      return;
  }
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

int dot(std::ostream& os, const Scheme& s, int& next_id) {
  int id = next_id++;
  if (s->kind == SchemeNode::Kind::Fork) {
    os << "  n" << id << " [label=\"\", shape=point];\n";
  } else {
    os << "  n" << id << " [label=\"" << dot_escape(node_label(*s)) << "\"" << (s->dead ? ", style=dashed" : "")
       << "];\n";
  }
  switch (s->kind) {
    case SchemeNode::Kind::Fork: {
      int l = dot(os, s->left, next_id);
      int r = dot(os, s->right, next_id);
      os << "  n" << id << " -> n" << l << ";\n";
      os << "  n" << id << " -> n" << r << ";\n";
      break;
    }
    case SchemeNode::Kind::UnifyNode:
    case SchemeNode::Kind::InvokeNode: {
      int c = dot(os, s->child, next_id);
      os << "  n" << id << " -> n" << c << " [label=\"" << dot_escape(edge_label(*s)) << "\"];\n";
      break;
    }
    default:
      break;
  }
  return id;
}

}  // namespace

std::string render_text(const RelationScheme& scheme) {
  std::ostringstream os;
  os << header(scheme) << '\n';
  text(os, scheme.root, 1);
  return os.str();
}

std::string render_dot(const RelationScheme& scheme) {
  std::ostringstream os;
  os << "digraph scheme {\n";
  os << "  label=\"" << dot_escape(header(scheme)) << "\";\n";
  os << "  node [shape=box, fontname=\"monospace\"];\n";
  int next_id = 0;
  dot(os, scheme.root, next_id);
  os << "}\n";
  return os.str();
}

}  // namespace mkcost
