#pragma once

#include <string>

#include "mkcost/goal.hpp"

namespace mkcost {

struct DnfCheck {
  bool ok = true;
  /// Names the offending subgoal when `ok` is false.
  std::string diagnostic;

  explicit operator bool() const noexcept { return ok; }
};

/// Disjunctive normal form:
///
///     base := t == t | R(t, ...)
///     conj := base | conj & base
///     frsh := conj | fresh x { frsh }
///     dnf  := frsh | dnf | frsh
DnfCheck validate_dnf(const Goal& g);

}  // namespace mkcost
