#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mkcost/program.hpp"
#include "mkcost/state.hpp"
#include "mkcost/unify.hpp"

namespace mkcost {

/// One transition: the label (an answer environment or silent) and the
/// successor, empty for the terminal state.
struct Transition {
  std::optional<Env> answer;
  MaybeState next;
  /// lh of the state that was stepped.
  std::size_t height = 0;
};

struct StepHooks {
  /// Called when a tracked product receives an answer from its left
  /// operand, with that answer and the left operand's successor.
  std::function<void(const Env& answer, const MaybeState& rest)> on_tracked_answer;
};

/// Performs exactly one transition of the interleaving-search LTS.
/// Throws EngineError on an unknown relation or an arity mismatch.
Transition step(const State& s, const Program& program, const UnifyOptions& unify = {},
                const StepHooks* hooks = nullptr);

/// Leaf <g, (empty, n)> with n the largest variable index of g.
/// Throws EngineError when g still contains syntactic variables.
State init(const Goal& g);

struct RunOptions {
  std::uint64_t step_limit = 10'000'000;
  /// Stop after this many answers; 0 means no limit.
  std::uint64_t max_answers = 0;
  UnifyOptions unify;
  /// Called after each transition with its 1-based index, the stepped
  /// state and the transition.
  std::function<void(std::uint64_t index, const State& from, const Transition& tr)> on_step;
  StepHooks hooks;
};

struct TraceStats {
  /// Non-terminal states visited, the initial one included.
  std::uint64_t d = 0;
  /// Sum of lh over those states.
  std::uint64_t t = 0;
  std::vector<Env> answers;
  /// The run stopped at step_limit or max_answers before reaching the
  /// terminal state.
  bool truncated = false;
};

TraceStats run(const State& s, const Program& program, const RunOptions& options = {});

/// The images of `vars` under the answer substitution.
std::vector<Term> reify(const Env& answer, const std::vector<VarIndex>& vars,
                        std::size_t depth_guard = kDefaultDepthGuard);

/// `{x = Nil, y = Cons(_4, Nil)}`.
std::string format_answer(const Env& answer, const std::vector<std::pair<std::string, VarIndex>>& vars);

struct AnswerReport {
  std::size_t answers = 0;
  /// Non-ground (answer, variable) pairs.
  std::size_t non_ground = 0;
  std::size_t duplicates = 0;
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Groundness and pairwise uniqueness of the answers projected onto the free
/// variables of `query`.
AnswerReport check_answers(const TraceStats& stats, const Goal& query);

/// `index; lh; label; shape` where label is `∘` or the reified answer.
std::string format_trace_line(std::uint64_t index, const State& from, const Transition& tr,
                              const std::vector<std::pair<std::string, VarIndex>>& vars);

}  // namespace mkcost
