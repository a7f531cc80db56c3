#include "mkcost/term.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace mkcost {

namespace {

struct SymbolTable {
  std::mutex mutex;
  std::deque<std::string> names;
  std::unordered_map<std::string, SymbolId> ids;
};

SymbolTable& symbol_table() {
  static SymbolTable table;
  return table;
}

}  // namespace

SymbolId Symbols::intern(std::string_view name) {
  auto& table = symbol_table();
  std::lock_guard lock(table.mutex);
  auto it = table.ids.find(std::string(name));
  if (it != table.ids.end()) return it->second;
  auto id = static_cast<SymbolId>(table.names.size());
  table.names.emplace_back(name);
  table.ids.emplace(table.names.back(), id);
  return id;
}

std::string Symbols::name(SymbolId id) {
  auto& table = symbol_table();
  std::lock_guard lock(table.mutex);
  if (id >= table.names.size()) throw std::out_of_range("unknown symbol id");
  return table.names[id];
}

struct Term::Node {
  Kind kind;
  bool vars;
  bool slots;
  std::uint32_t index;  // var index, slot level or symbol id
  VarIndex max_var;
  std::vector<Term> args;
};

Term Term::var(VarIndex index) {
  if (index == 0) throw std::invalid_argument("logic variable indices start at 1");
  return Term(std::make_shared<const Node>(Node{Kind::Var, true, false, index, index, {}}));
}

Term Term::slot(std::uint32_t level) {
  return Term(std::make_shared<const Node>(Node{Kind::Slot, false, true, level, 0, {}}));
}

Term Term::ctor(SymbolId symbol, std::vector<Term> args) {
  bool vars = false;
  bool slots = false;
  VarIndex max_var = 0;
  for (const auto& a : args) {
    vars = vars || a.node_->vars;
    slots = slots || a.node_->slots;
    max_var = std::max(max_var, a.node_->max_var);
  }
  return Term(std::make_shared<const Node>(
      Node{Kind::Ctor, vars, slots, symbol, max_var, std::move(args)}));
}

Term Term::ctor(std::string_view name, std::vector<Term> args) {
  return ctor(Symbols::intern(name), std::move(args));
}

Term::Kind Term::kind() const noexcept { return node_->kind; }

VarIndex Term::var_index() const {
  if (node_->kind != Kind::Var) throw std::logic_error("term is not a variable");
  return node_->index;
}

std::uint32_t Term::slot_level() const {
  if (node_->kind != Kind::Slot) throw std::logic_error("term is not a slot");
  return node_->index;
}

SymbolId Term::symbol() const {
  if (node_->kind != Kind::Ctor) throw std::logic_error("term is not a constructor");
  return node_->index;
}

std::span<const Term> Term::args() const { return node_->args; }

bool Term::is_ground() const noexcept { return !node_->vars && !node_->slots; }
bool Term::has_vars() const noexcept { return node_->vars; }
bool Term::has_slots() const noexcept { return node_->slots; }
VarIndex Term::max_var() const noexcept { return node_->max_var; }

bool operator==(const Term& a, const Term& b) {
  std::vector<std::pair<const Term::Node*, const Term::Node*>> work{{a.node_.get(), b.node_.get()}};
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    if (x == y) continue;
    if (x->kind != y->kind || x->index != y->index || x->args.size() != y->args.size()) return false;
    if (x->max_var != y->max_var || x->vars != y->vars || x->slots != y->slots) return false;
    for (std::size_t i = 0; i < x->args.size(); ++i) {
      work.emplace_back(x->args[i].node_.get(), y->args[i].node_.get());
    }
  }
  return true;
}

void collect_free_vars(const Term& t, VarSet& out) {
  if (!t.has_vars()) return;
  if (t.is_var()) {
    out.insert(t.var_index());
    return;
  }
  for (const auto& a : t.args()) collect_free_vars(a, out);
}

VarSet free_vars(const Term& t) {
  VarSet out;
  collect_free_vars(t, out);
  return out;
}

namespace {

Term rename_rec(const Term& t, const std::map<VarIndex, VarIndex>& pi) {
  if (!t.has_vars()) return t;
  if (t.is_var()) {
    auto it = pi.find(t.var_index());
    return it == pi.end() ? t : Term::var(it->second);
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(rename_rec(a, pi));
  return Term::ctor(t.symbol(), std::move(args));
}

template <typename Replace>
Term map_slots(const Term& t, const Replace& replace) {
  if (!t.has_slots()) return t;
  if (t.is_slot()) return replace(t);
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(map_slots(a, replace));
  return Term::ctor(t.symbol(), std::move(args));
}

void format_rec(std::ostream& os, const Term& t, const VarNames* names) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      if (names) {
        auto it = names->find(t.var_index());
        if (it != names->end()) {
          os << it->second;
          return;
        }
      }
      os << '_' << t.var_index();
      return;
    }
    case Term::Kind::Slot:
      os << '$' << t.slot_level();
      return;
    case Term::Kind::Ctor:
      os << Symbols::name(t.symbol());
      if (!t.args().empty()) {
        os << '(';
        bool first = true;
        for (const auto& a : t.args()) {
          if (!first) os << ", ";
          first = false;
          format_rec(os, a, names);
        }
        os << ')';
      }
      return;
  }
}

}  // namespace

Term rename(const Term& t, const std::map<VarIndex, VarIndex>& pi) {
  std::map<VarIndex, VarIndex> image;
  for (VarIndex v : free_vars(t)) {
    auto it = pi.find(v);
    VarIndex target = it == pi.end() ? v : it->second;
    if (target == 0) throw std::invalid_argument("renaming maps a variable to index 0");
    auto [pos, inserted] = image.emplace(target, v);
    if (!inserted) {
      throw std::invalid_argument("renaming is not injective: _" + std::to_string(pos->second) +
                                  " and _" + std::to_string(v) + " both map to _" +
                                  std::to_string(target));
    }
  }
  return rename_rec(t, pi);
}

Term substitute_slot(const Term& t, std::uint32_t level, const Term& value) {
  return map_slots(t, [&](const Term& s) { return s.slot_level() == level ? value : s; });
}

Term substitute_slots(const Term& t, std::span<const Term> values) {
  return map_slots(t, [&](const Term& s) {
    return s.slot_level() < values.size() ? values[s.slot_level()] : s;
  });
}

std::string format_term(const Term& t, const VarNames* names) {
  std::ostringstream os;
  format_rec(os, t, names);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Term& t) {
  format_rec(os, t, nullptr);
  return os;
}

Term make_list(std::size_t length, const Term& element) {
  static const SymbolId cons = Symbols::intern("Cons");
  Term list = Term::ctor("Nil");
  for (std::size_t i = 0; i < length; ++i) list = Term::ctor(cons, {element, list});
  return list;
}

Term make_list(std::span<const Term> elements) {
  static const SymbolId cons = Symbols::intern("Cons");
  Term list = Term::ctor("Nil");
  for (auto it = elements.rbegin(); it != elements.rend(); ++it) list = Term::ctor(cons, {*it, list});
  return list;
}

Term make_peano(std::size_t value) {
  static const SymbolId succ = Symbols::intern("S");
  Term n = Term::ctor("O");
  for (std::size_t i = 0; i < value; ++i) n = Term::ctor(succ, {n});
  return n;
}

}  // namespace mkcost
