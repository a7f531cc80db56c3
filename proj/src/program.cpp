#include "mkcost/program.hpp"

#include <sstream>

#include "mkcost/error.hpp"

namespace mkcost {

VarNames Query::names() const {
  VarNames out;
  for (const auto& [name, v] : vars) out.emplace(v, name);
  return out;
}

void Program::add(Relation relation) {
  if (index_.count(relation.symbol)) throw Error("duplicate relation '" + relation.name + "'");
  index_.emplace(relation.symbol, relations_.size());
  relations_.push_back(std::move(relation));
}

const Relation* Program::find(SymbolId symbol) const {
  auto it = index_.find(symbol);
  return it == index_.end() ? nullptr : &relations_[it->second];
}

const Relation* Program::find(std::string_view name) const {
  for (const auto& r : relations_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const Relation& Program::get(SymbolId symbol) const {
  const Relation* r = find(symbol);
  if (!r) throw EngineError("unknown relation '" + Symbols::name(symbol) + "'");
  return *r;
}

Goal instantiate(const Relation& relation, std::span<const Term> args) {
  if (args.size() != relation.arity()) {
    throw EngineError("relation '" + relation.name + "' expects " + std::to_string(relation.arity()) +
                      " arguments, got " + std::to_string(args.size()));
  }
  return relation.body.substitute_slots(args);
}

std::string format_relation(const Relation& relation) {
  std::ostringstream os;
  os << "rel " << relation.name << '(';
  for (std::size_t i = 0; i < relation.params.size(); ++i) {
    if (i) os << ", ";
    os << relation.params[i];
  }
  os << ") { " << format_goal(relation.body, relation.params) << " }";
  return os.str();
}

}  // namespace mkcost
