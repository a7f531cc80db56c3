#include "mkcost/dnf.hpp"

namespace mkcost {

namespace {

bool is_base(const Goal& g) { return g.kind() == Goal::Kind::Unify || g.kind() == Goal::Kind::Invoke; }

DnfCheck fail(const std::string& what, const Goal& g) {
  return {false, what + ": " + format_goal(g)};
}

DnfCheck check_conj(const Goal& g) {
  const Goal* cur = &g;
  while (cur->kind() == Goal::Kind::Conj) {
    if (!is_base(cur->right())) return fail("conjunct is not an equality or call", cur->right());
    cur = &cur->left();
  }
  if (!is_base(*cur)) return fail("conjunct is not an equality or call", *cur);
  return {};
}

DnfCheck check_fresh(const Goal& g) {
  const Goal* cur = &g;
  while (cur->kind() == Goal::Kind::Fresh) cur = &cur->body();
  if (cur->kind() == Goal::Kind::Disj) return fail("disjunction under fresh or conjunction", *cur);
  return check_conj(*cur);
}

}  // namespace

DnfCheck validate_dnf(const Goal& g) {
  const Goal* cur = &g;
  while (cur->kind() == Goal::Kind::Disj) {
    if (cur->right().kind() == Goal::Kind::Disj) return fail("disjunction is not left-nested", cur->right());
    if (auto r = check_fresh(cur->right()); !r) return r;
    cur = &cur->left();
  }
  return check_fresh(*cur);
}

}  // namespace mkcost
