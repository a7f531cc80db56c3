#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mkcost/engine.hpp"

namespace mkcost {

/// A family of goals indexed by a size: one relation, some arguments
/// ground terms of that size, the rest fresh logic variables.
struct Suite {
  std::string id;
  std::string relation;
  std::string description;
  /// Ground argument terms for a size; an empty optional marks a free argument.
  /// `element` supplies list elements.
  std::function<std::vector<std::optional<Term>>(std::size_t size, const std::function<Term()>& element)> args;
};

const std::vector<Suite>& builtin_suites();
/// Throws BenchError for an unknown id.
const Suite& find_suite(const std::string& id);

/// Query of a suite at one size; free arguments become _1, _2, ... in order.
Goal suite_goal(const Suite& suite, std::size_t size, const std::function<Term()>& element);

struct SeriesPoint {
  std::size_t size = 0;
  std::uint64_t d = 0;
  std::uint64_t t = 0;
  std::uint64_t wall_ns = 0;
  std::uint64_t answers = 0;
};

struct BenchOptions {
  /// Timed repetitions per size; the median is reported.
  unsigned reps = 3;
  std::uint64_t step_limit = 10'000'000;
  UnifyOptions unify;
  /// When set, list elements are drawn from a small constructor alphabet
  /// with this seed instead of being all `Zero`.
  std::optional<std::uint64_t> seed;
};

/// Runs the suite at every size. Repetitions are interleaved across sizes.
/// Throws BenchError when a run hits the step limit or repetitions disagree.
std::vector<SeriesPoint> run_series(const Suite& suite, const std::vector<std::size_t>& sizes, const Program& program,
                                    const BenchOptions& options = {});

enum class Field { D, T, Wall };
const char* field_name(Field f);

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  std::size_t window_lo = 0;
  std::size_t window_hi = 0;
  std::size_t points = 0;
};

/// Least-squares line through (log size, log value) over the upper half of
/// the sizes. Needs at least 5 points spanning a factor of 8 in size;
/// non-positive values are skipped. Throws BenchError otherwise.
FitResult fit_loglog(const std::vector<SeriesPoint>& points, Field field);

/// Least-squares line through (log x, log y) for all pairs.
FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// Pearson correlation between wall time and t.
double wall_t_correlation(const std::vector<SeriesPoint>& points);
double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// `suite,size,d,t,wall_ns,answers`.
void emit_csv(std::ostream& os, const std::string& suite, const std::vector<SeriesPoint>& points,
              bool header = true);
/// `suite,field,slope,intercept,r2,window_lo,window_hi`.
void emit_fit_csv(std::ostream& os, const std::string& suite, Field field, const FitResult& fit, bool header = true);

/// `a:b:c` (from a to b step c), `a..b` (step 1) or `a,b,c`.
/// Throws BenchError on malformed input.
std::vector<std::size_t> parse_sizes(const std::string& text);

}  // namespace mkcost
