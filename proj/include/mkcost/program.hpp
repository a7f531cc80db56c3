#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mkcost/goal.hpp"

namespace mkcost {

/// `rel name(params) { body }`. Parameters occupy slots 0..arity-1 of the body.
struct Relation {
  std::string name;
  SymbolId symbol = 0;
  std::vector<std::string> params;
  Goal body;

  std::size_t arity() const noexcept { return params.size(); }
};

/// A goal over logic variables together with the surface names of its
/// free variables, in first-occurrence order.
struct Query {
  Goal goal;
  std::vector<std::pair<std::string, VarIndex>> vars;

  VarNames names() const;
};

/// A set of relation definitions plus an optional top-level goal.
/// Immutable once built.
class Program {
 public:
  /// Throws Error on a duplicate name.
  void add(Relation relation);

  const Relation* find(SymbolId symbol) const;
  const Relation* find(std::string_view name) const;
  /// Throws EngineError for an unknown relation.
  const Relation& get(SymbolId symbol) const;

  /// Relations in definition order.
  std::span<const Relation> relations() const { return relations_; }

  const std::optional<Query>& top() const { return top_; }
  void set_top(Query q) { top_ = std::move(q); }

  /// Constructor arities seen in the program text.
  const std::map<SymbolId, std::size_t>& constructor_arities() const { return ctor_arity_; }
  void record_arity(SymbolId ctor, std::size_t arity) { ctor_arity_.emplace(ctor, arity); }

 private:
  std::vector<Relation> relations_;
  std::map<SymbolId, std::size_t> index_;
  std::map<SymbolId, std::size_t> ctor_arity_;
  std::optional<Query> top_;
};

/// body[args / params]. Throws EngineError on an arity mismatch.
Goal instantiate(const Relation& relation, std::span<const Term> args);

std::string format_relation(const Relation& relation);

}  // namespace mkcost
