#include "mkcost/engine.hpp"

#include <set>
#include <sstream>

#include "mkcost/error.hpp"

namespace mkcost {

namespace {

Transition step_leaf(const Goal& g, const Env& e, const Program& program, const UnifyOptions& unify) {
  Transition tr;
  switch (g.kind()) {
    case Goal::Kind::Unify:
      if (auto s = unify_in(e.subst, g.lhs(), g.rhs(), unify)) tr.answer = Env{std::move(*s), e.counter};
      return tr;
    case Goal::Kind::Disj:
      tr.next = State::sum(State::leaf(g.left(), e), State::leaf(g.right(), e));
      return tr;
    case Goal::Kind::Conj:
      tr.next = State::prod(State::leaf(g.left(), e), g.right());
      return tr;
    case Goal::Kind::Fresh: {
      VarIndex v = e.counter + 1;
      tr.next = State::leaf(g.body().substitute_slot(g.level(), Term::var(v)), Env{e.subst, v});
      return tr;
    }
    case Goal::Kind::Invoke:
      tr.next = State::leaf(instantiate(program.get(g.relation()), g.args()), e);
      return tr;
  }
  throw EngineError("unknown goal kind");
}

}  // namespace

Transition step(const State& s, const Program& program, const UnifyOptions& unify, const StepHooks* hooks) {
  std::vector<State> spine{s};
  while (!spine.back().is_leaf()) spine.push_back(spine.back().left());

  const State& leaf = spine.back();
  Transition tr = step_leaf(leaf.goal(), leaf.env(), program, unify);
  tr.height = spine.size();

  for (std::size_t i = spine.size() - 1; i-- > 0;) {
    const State& node = spine[i];
    if (node.kind() == State::Kind::Sum) {
      tr.next = tr.next ? State::sum(node.right(), std::move(*tr.next)) : node.right();
      continue;
    }
    const Goal& g = node.goal();
    if (tr.answer && node.tracked() && hooks && hooks->on_tracked_answer) {
      hooks->on_tracked_answer(*tr.answer, tr.next);
    }
    if (tr.answer) {
      State task = State::leaf(g, std::move(*tr.answer));
      tr.answer.reset();
      tr.next = tr.next ? State::sum(std::move(task), State::prod(std::move(*tr.next), g, node.tracked()))
                        : std::move(task);
    } else if (tr.next) {
      tr.next = State::prod(std::move(*tr.next), g, node.tracked());
    }
  }
  return tr;
}

State init(const Goal& g) {
  if (has_free_slots(g)) throw EngineError("goal has unbound syntactic variables: " + format_goal(g));
  return State::leaf(g, Env{Substitution{}, g.max_var()});
}

TraceStats run(const State& s, const Program& program, const RunOptions& options) {
  TraceStats stats;
  MaybeState cur = s;
  const StepHooks* hooks = options.hooks.on_tracked_answer ? &options.hooks : nullptr;
  while (cur) {
    if (stats.d >= options.step_limit ||
        (options.max_answers && stats.answers.size() >= options.max_answers)) {
      stats.truncated = true;
      break;
    }
    Transition tr = step(*cur, program, options.unify, hooks);
    ++stats.d;
    stats.t += tr.height;
    if (options.on_step) options.on_step(stats.d, *cur, tr);
    if (tr.answer) stats.answers.push_back(std::move(*tr.answer));
    cur = std::move(tr.next);
  }
  return stats;
}

std::vector<Term> reify(const Env& answer, const std::vector<VarIndex>& vars, std::size_t depth_guard) {
  std::vector<Term> out;
  out.reserve(vars.size());
  for (VarIndex v : vars) out.push_back(answer.subst.apply(Term::var(v), depth_guard));
  return out;
}

std::string format_answer(const Env& answer, const std::vector<std::pair<std::string, VarIndex>>& vars) {
  VarNames names;
  for (const auto& [name, v] : vars) names.emplace(v, name);
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) os << ", ";
    os << vars[i].first << " = " << format_term(answer.subst.apply(Term::var(vars[i].second)), &names);
  }
  os << '}';
  return os.str();
}

AnswerReport check_answers(const TraceStats& stats, const Goal& query) {
  AnswerReport report;
  report.answers = stats.answers.size();
  VarSet fv = free_vars(query);
  std::vector<VarIndex> vars(fv.begin(), fv.end());
  std::set<std::string> seen;
  for (std::size_t i = 0; i < stats.answers.size(); ++i) {
    auto terms = reify(stats.answers[i], vars);
    std::string key;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      if (!terms[k].is_ground()) {
        ++report.non_ground;
        report.violations.push_back("answer " + std::to_string(i + 1) + ": _" + std::to_string(vars[k]) +
                                    " = " + format_term(terms[k]) + " is not ground");
      }
      key += format_term(terms[k]);
      key += '\n';
    }
    if (!seen.insert(key).second) {
      ++report.duplicates;
      report.violations.push_back("answer " + std::to_string(i + 1) + " duplicates an earlier answer");
    }
  }
  return report;
}

std::string format_trace_line(std::uint64_t index, const State& from, const Transition& tr,
                              const std::vector<std::pair<std::string, VarIndex>>& vars) {
  std::ostringstream os;
  os << index << "; " << tr.height << "; ";
  if (tr.answer) {
    os << format_answer(*tr.answer, vars);
  } else {
    os << "∘";
  }
  os << "; " << format_shape(from);
  return os.str();
}

}  // namespace mkcost
