#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "mkcost/engine.hpp"
#include "mkcost/scheme.hpp"

namespace mkcost {

/// Ground terms for grounded variables.
using Valuation = std::map<VarIndex, Term>;

Substitution to_substitution(const Valuation& rho);

/// Measures and answer set of one relation call.
struct CallOutcome {
  std::uint64_t d = 0;
  std::uint64_t t = 0;
  /// Each answer as the tuple of ground call arguments.
  std::vector<std::vector<Term>> answers;
};

/// Runs calls on the engine and memoizes the outcome per call pattern
/// (calls equal up to variable renaming share an entry). Thread-safe.
///
/// Throws FactorError when a call is truncated by the step limit, has a
/// non-ground answer or repeats an answer.
class AnswerOracle {
 public:
  AnswerOracle(const Program& program, RunOptions options = {}, bool memoize = true);

  std::shared_ptr<const CallOutcome> call(const Goal& invocation);

  std::size_t cache_size() const;
  const Program& program() const { return program_; }
  const RunOptions& options() const { return options_; }

 private:
  const Program& program_;
  RunOptions options_;
  bool memoize_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const CallOutcome>> cache_;
};

struct FactorReport {
  std::uint64_t D = 0;
  std::uint64_t T = 0;
  /// Leaf tasks with their d values.
  std::vector<std::pair<std::string, std::uint64_t>> L;

  /// Largest d over L, 0 when L is empty.
  std::uint64_t max_L() const;
};

struct FactorOptions {
  /// Check every equality node against concrete unification.
  bool cross_check = true;
};

/// Sums of d, t and the leaf tasks over all executions of the scheme's
/// nodes for valuation `rho` of the root's grounded set.
FactorReport eval_factors(const Scheme& scheme, const Valuation& rho, AnswerOracle& oracle,
                          const FactorOptions& options = {});

struct TheoremRow {
  std::string label;
  std::uint64_t d = 0;
  std::uint64_t D = 0;
  std::uint64_t t = 0;
  std::uint64_t T = 0;
  std::uint64_t max_L = 0;
  /// (t - T) / (D - max_L + 1).
  double ratio = 0;

  std::int64_t offset() const { return static_cast<std::int64_t>(d) - static_cast<std::int64_t>(D); }
};

struct TheoremReport {
  std::vector<TheoremRow> rows;
  bool offset_constant = false;
  double band_min = 0;
  double band_max = 0;
  bool pass = false;

  double band_ratio() const { return band_min > 0 ? band_max / band_min : 0; }
};

/// One valuation of the grounded parameters, labelled for reporting;
/// `values` lists terms for the grounded parameters in parameter order.
struct ValuationCase {
  std::string label;
  std::vector<Term> values;
};

/// Compares d and t of the instantiated relation body against the scheme
/// factors over a family of valuations. Passes when d - D is constant and
/// the ratio band satisfies 0 < min and max / min <= max_band_ratio.
TheoremReport check_theorem(const RelationScheme& scheme, const std::vector<ValuationCase>& family,
                            AnswerOracle& oracle, double max_band_ratio = 4.0);

/// Valuation of a relation scheme's grounded parameters.
Valuation valuation_for(const RelationScheme& scheme, const std::vector<Term>& values);

}  // namespace mkcost
