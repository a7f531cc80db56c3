#pragma once

#include <map>
#include <optional>

#include "mkcost/substitution.hpp"

namespace mkcost {

struct UnifyOptions {
  bool occurs_check = false;
  std::size_t depth_guard = kDefaultDepthGuard;
};

/// Extends `base` triangularly with the bindings of mgu(t1 base, t2 base).
/// The result `r` satisfies apply(r, t) == apply(mgu, apply(base, t)).
/// Absent when the terms do not unify. A variable meeting a variable binds
/// the left one.
std::optional<Substitution> unify_in(const Substitution& base, const Term& t1, const Term& t2,
                                     const UnifyOptions& options = {});

/// Most general unifier of two terms, as a triangular substitution whose
/// domain lies within FV(t1) ∪ FV(t2).
std::optional<Substitution> unify(const Term& t1, const Term& t2, const UnifyOptions& options = {});
std::optional<Substitution> unify(const Term& t1, const Term& t2, bool occurs_check);

/// Idempotent form: every image fully applied.
Substitution resolved(const Substitution& s, std::size_t depth_guard = kDefaultDepthGuard);

/// Composition "first sigma, then delta":
/// apply(compose(sigma, delta), t) == apply(delta, apply(sigma, t)).
/// Requires VRan(delta) ∩ Dom(sigma) = ∅, which holds whenever delta is a
/// unifier of sigma-applied terms.
Substitution compose(const Substitution& sigma, const Substitution& delta);

/// Whether `v` occurs in `t` after walking through `s`.
bool occurs(VarIndex v, const Term& t, const Substitution& s,
            std::size_t depth_guard = kDefaultDepthGuard);

}  // namespace mkcost
