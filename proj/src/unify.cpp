#include "mkcost/unify.hpp"

#include <utility>
#include <vector>

#include "mkcost/error.hpp"

namespace mkcost {

bool occurs(VarIndex v, const Term& t, const Substitution& s, std::size_t depth_guard) {
  std::vector<Term> work{t};
  std::size_t visited = 0;
  while (!work.empty()) {
    Term cur = s.walk(std::move(work.back()), depth_guard);
    work.pop_back();
    if (++visited > depth_guard) throw CyclicTermError("occurs check exceeds depth guard");
    if (!cur.has_vars()) continue;
    if (cur.is_var()) {
      if (cur.var_index() == v) return true;
      continue;
    }
    for (const auto& a : cur.args()) work.push_back(a);
  }
  return false;
}

std::optional<Substitution> unify_in(const Substitution& base, const Term& t1, const Term& t2,
                                     const UnifyOptions& options) {
  Substitution s = base;
  std::vector<std::pair<Term, Term>> work{{t1, t2}};
  std::size_t iterations = 0;
  while (!work.empty()) {
    auto [a, b] = std::move(work.back());
    work.pop_back();
    if (++iterations > options.depth_guard) {
      throw CyclicTermError("unification exceeds depth guard (cyclic substitution?)");
    }
    a = s.walk(std::move(a), options.depth_guard);
    b = s.walk(std::move(b), options.depth_guard);
    if (a.same_node(b)) continue;
    if (a.is_slot() || b.is_slot()) throw EngineError("unification met an unresolved syntactic variable");
    if (a.is_var()) {
      if (b.is_var() && b.var_index() == a.var_index()) continue;
      if (options.occurs_check && occurs(a.var_index(), b, s, options.depth_guard)) return std::nullopt;
      s = s.bind(a.var_index(), std::move(b));
      continue;
    }
    if (b.is_var()) {
      if (options.occurs_check && occurs(b.var_index(), a, s, options.depth_guard)) return std::nullopt;
      s = s.bind(b.var_index(), std::move(a));
      continue;
    }
    if (a.symbol() != b.symbol() || a.args().size() != b.args().size()) return std::nullopt;
    if (a.is_ground() && b.is_ground()) {
      if (!(a == b)) return std::nullopt;
      continue;
    }
    for (std::size_t i = a.args().size(); i-- > 0;) work.emplace_back(a.args()[i], b.args()[i]);
  }
  return s;
}

std::optional<Substitution> unify(const Term& t1, const Term& t2, const UnifyOptions& options) {
  return unify_in(Substitution{}, t1, t2, options);
}

std::optional<Substitution> unify(const Term& t1, const Term& t2, bool occurs_check) {
  return unify(t1, t2, UnifyOptions{occurs_check, kDefaultDepthGuard});
}

Substitution resolved(const Substitution& s, std::size_t depth_guard) {
  Substitution out;
  for (const auto& [v, t] : s.bindings()) out = out.bind(v, s.apply(t, depth_guard));
  return out;
}

Substitution compose(const Substitution& sigma, const Substitution& delta) {
  Substitution out;
  for (const auto& [v, t] : sigma.bindings()) {
    Term image = delta.apply(sigma.apply(t));
    if (image.is_var() && image.var_index() == v) continue;
    out = out.bind(v, std::move(image));
  }
  for (const auto& [v, t] : delta.bindings()) {
    if (!sigma.contains(v)) out = out.bind(v, t);
  }
  return out;
}

}  // namespace mkcost
