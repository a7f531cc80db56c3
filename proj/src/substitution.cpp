#include "mkcost/substitution.hpp"

#include <array>
#include <sstream>
#include <variant>

#include "mkcost/error.hpp"

namespace mkcost {

namespace {
constexpr unsigned kBits = 4;
constexpr unsigned kFanout = 1u << kBits;
constexpr unsigned kMask = kFanout - 1;

unsigned digit(VarIndex key, unsigned depth, unsigned levels) {
  return (key >> (kBits * (levels - 1 - depth))) & kMask;
}

unsigned levels_for(VarIndex key) {
  unsigned levels = 1;
  std::uint64_t capacity = kFanout;
  while (key >= capacity) {
    capacity <<= kBits;
    ++levels;
  }
  return levels;
}
}  // namespace

struct Substitution::Node {
  using Inner = std::array<std::shared_ptr<const Node>, kFanout>;
  using Leaf = std::array<std::optional<Term>, kFanout>;
  std::variant<Inner, Leaf> data;
};

const Term* Substitution::find(VarIndex v) const {
  if (!root_ || v >> (kBits * levels_) != 0) return nullptr;
  const Node* node = root_.get();
  for (unsigned depth = 0; depth + 1 < levels_; ++depth) {
    node = std::get<Node::Inner>(node->data)[digit(v, depth, levels_)].get();
    if (!node) return nullptr;
  }
  const auto& slot = std::get<Node::Leaf>(node->data)[digit(v, levels_ - 1, levels_)];
  return slot ? &*slot : nullptr;
}

Substitution Substitution::bind(VarIndex v, Term t) const {
  Substitution out = *this;
  unsigned needed = levels_for(v);
  if (!out.root_) {
    out.levels_ = needed;
  } else {
    while (out.levels_ < needed) {
      Node grown{Node::Inner{}};
      std::get<Node::Inner>(grown.data)[0] = out.root_;
      out.root_ = std::make_shared<const Node>(std::move(grown));
      ++out.levels_;
    }
  }

  bool added = false;
  auto insert = [&](auto&& self, const Node* node, unsigned depth) -> std::shared_ptr<const Node> {
    unsigned d = digit(v, depth, out.levels_);
    if (depth + 1 == out.levels_) {
      Node copy = node ? *node : Node{Node::Leaf{}};
      auto& slot = std::get<Node::Leaf>(copy.data)[d];
      added = !slot.has_value();
      slot = std::move(t);
      return std::make_shared<const Node>(std::move(copy));
    }
    Node copy = node ? *node : Node{Node::Inner{}};
    auto& kid = std::get<Node::Inner>(copy.data)[d];
    kid = self(self, kid.get(), depth + 1);
    return std::make_shared<const Node>(std::move(copy));
  };
  out.root_ = insert(insert, out.root_.get(), 0);
  if (added) ++out.size_;
  return out;
}

template <typename F>
void Substitution::visit(const Node* node, unsigned depth, unsigned levels, VarIndex prefix, F& f) {
  if (!node) return;
  if (depth + 1 == levels) {
    const auto& leaf = std::get<Node::Leaf>(node->data);
    for (unsigned i = 0; i < kFanout; ++i) {
      if (leaf[i]) f((prefix << kBits) | i, *leaf[i]);
    }
    return;
  }
  const auto& inner = std::get<Node::Inner>(node->data);
  for (unsigned i = 0; i < kFanout; ++i) {
    visit(inner[i].get(), depth + 1, levels, (prefix << kBits) | i, f);
  }
}

std::vector<std::pair<VarIndex, Term>> Substitution::bindings() const {
  std::vector<std::pair<VarIndex, Term>> out;
  out.reserve(size_);
  auto f = [&](VarIndex v, const Term& t) { out.emplace_back(v, t); };
  visit(root_.get(), 0, levels_, 0, f);
  return out;
}

VarSet Substitution::domain() const {
  VarSet out;
  auto f = [&](VarIndex v, const Term&) { out.insert(v); };
  visit(root_.get(), 0, levels_, 0, f);
  return out;
}

VarSet Substitution::var_range() const {
  VarSet out;
  auto f = [&](VarIndex, const Term& t) { collect_free_vars(t, out); };
  visit(root_.get(), 0, levels_, 0, f);
  return out;
}

Term Substitution::walk(Term t, std::size_t depth_guard) const {
  std::size_t hops = 0;
  while (t.is_var()) {
    const Term* bound = find(t.var_index());
    if (!bound) break;
    if (++hops > depth_guard) throw CyclicTermError("variable chain exceeds depth guard");
    t = *bound;
  }
  return t;
}

Term Substitution::apply(const Term& t, std::size_t depth_guard) const {
  if (!t.has_vars() || empty()) return t;

  // Explicit stack so that the depth guard, not the call stack, bounds cyclic input.
  struct Frame {
    Term term;
    std::size_t next = 0;
    std::vector<Term> built;
    bool changed = false;
  };
  std::vector<Frame> stack;
  std::optional<Term> result;

  auto push = [&](const Term& raw) {
    Term w = walk(raw, depth_guard);
    bool walked = !w.same_node(raw);
    if (!w.has_vars() || w.is_var()) {
      result = std::move(w);
      return walked;
    }
    if (stack.size() >= depth_guard) {
      throw CyclicTermError("term resolution exceeds depth guard (cyclic substitution?)");
    }
    stack.push_back(Frame{std::move(w), 0, {}, walked});
    stack.back().built.reserve(stack.back().term.args().size());
    return walked;
  };

  push(t);
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (result) {
      top.changed = top.changed || !result->same_node(top.term.args()[top.next]);
      top.built.push_back(std::move(*result));
      result.reset();
      ++top.next;
      continue;
    }
    if (top.next < top.term.args().size()) {
      const Term& child = top.term.args()[top.next];
      if (!child.has_vars()) {
        top.built.push_back(child);
        ++top.next;
        continue;
      }
      push(child);
      continue;
    }
    Frame done = std::move(stack.back());
    stack.pop_back();
    bool changed = done.changed;
    for (std::size_t i = 0; i < done.built.size() && !changed; ++i) {
      changed = !done.built[i].same_node(done.term.args()[i]);
    }
    result = changed ? Term::ctor(done.term.symbol(), std::move(done.built)) : done.term;
  }
  return *result;
}

bool operator==(const Substitution& a, const Substitution& b) {
  if (a.size_ != b.size_) return false;
  auto x = a.bindings();
  auto y = b.bindings();
  return x == y;
}

std::string format_substitution(const Substitution& s, const VarNames* names) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [v, t] : s.bindings()) {
    if (!first) os << ", ";
    first = false;
    os << format_term(Term::var(v), names) << " -> " << format_term(t, names);
  }
  os << '}';
  return os.str();
}

}  // namespace mkcost
