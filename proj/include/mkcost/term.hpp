#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mkcost {

/// Index i of the logic variable alpha_i. Valid indices start at 1.
using VarIndex = std::uint32_t;
using SymbolId = std::uint32_t;
using VarSet = std::set<VarIndex>;
using VarNames = std::map<VarIndex, std::string>;

/// Process-wide table of interned constructor and relation names.
/// Thread-safe.
class Symbols {
 public:
  static SymbolId intern(std::string_view name);
  static std::string name(SymbolId id);
};

/// Immutable first-order term. Copies share structure.
///
/// Besides logic variables and constructor applications a term may hold a
/// `Slot`: a syntactic variable of a relation body, identified by its binder
/// level (parameters take levels 0..k-1, each nested `fresh` the next level).
/// Slots are replaced before a goal reaches the engine.
class Term {
 public:
  enum class Kind : std::uint8_t { Var, Slot, Ctor };

  static Term var(VarIndex index);
  static Term slot(std::uint32_t level);
  static Term ctor(SymbolId symbol, std::vector<Term> args = {});
  static Term ctor(std::string_view name, std::vector<Term> args = {});

  Kind kind() const noexcept;
  bool is_var() const noexcept { return kind() == Kind::Var; }
  bool is_slot() const noexcept { return kind() == Kind::Slot; }
  bool is_ctor() const noexcept { return kind() == Kind::Ctor; }

  VarIndex var_index() const;
  std::uint32_t slot_level() const;
  SymbolId symbol() const;
  std::span<const Term> args() const;

  /// No logic variables and no slots.
  bool is_ground() const noexcept;
  bool has_vars() const noexcept;
  bool has_slots() const noexcept;
  /// Largest logic-variable index occurring in the term, 0 if none.
  VarIndex max_var() const noexcept;

  bool same_node(const Term& other) const noexcept { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

VarSet free_vars(const Term& t);
void collect_free_vars(const Term& t, VarSet& out);
inline bool is_ground(const Term& t) { return t.is_ground(); }

/// Structural copy with variables remapped; variables absent from `pi` are
/// kept. Throws std::invalid_argument when the induced map on FV(t) is not
/// injective.
Term rename(const Term& t, const std::map<VarIndex, VarIndex>& pi);

/// Replaces slot `level` by `value`.
Term substitute_slot(const Term& t, std::uint32_t level, const Term& value);
/// Replaces slots 0..values.size()-1.
Term substitute_slots(const Term& t, std::span<const Term> values);

/// `Cons(_1, Nil)`; variables print as `_N` unless named in `names`.
std::string format_term(const Term& t, const VarNames* names = nullptr);
std::ostream& operator<<(std::ostream& os, const Term& t);

/// Ground list `Cons(e, ... Nil)` of `length` copies of `element`.
Term make_list(std::size_t length, const Term& element);
Term make_list(std::span<const Term> elements);
/// Peano numeral `S(...S(O))`.
Term make_peano(std::size_t value);

}  // namespace mkcost
