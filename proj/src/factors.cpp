#include "mkcost/factors.hpp"

#include <algorithm>
#include <set>

#include "mkcost/error.hpp"

namespace mkcost {

Substitution to_substitution(const Valuation& rho) {
  Substitution s;
  for (const auto& [v, t] : rho) s = s.bind(v, t);
  return s;
}

namespace {

// Free variables renamed to 1..m in first-occurrence order.
Goal canonical(const Goal& call) {
  std::map<VarIndex, VarIndex> pi;
  std::vector<const Term*> stack;
  for (auto it = call.args().rbegin(); it != call.args().rend(); ++it) stack.push_back(&*it);
  while (!stack.empty()) {
    const Term* t = stack.back();
    stack.pop_back();
    if (t->is_var()) {
      pi.emplace(t->var_index(), static_cast<VarIndex>(pi.size() + 1));
    } else if (t->is_ctor() && t->has_vars()) {
      for (auto it = t->args().rbegin(); it != t->args().rend(); ++it) stack.push_back(&*it);
    }
  }
  return pi.empty() ? call : call.rename(pi);
}

Goal apply_to_call(const Goal& g, const Substitution& s) {
  if (g.kind() == Goal::Kind::Unify) return Goal::unify(s.apply(g.lhs()), s.apply(g.rhs()));
  std::vector<Term> args;
  for (const auto& a : g.args()) args.push_back(s.apply(a));
  return Goal::invoke(g.relation(), std::move(args));
}

}  // namespace

AnswerOracle::AnswerOracle(const Program& program, RunOptions options, bool memoize)
    : program_(program), options_(std::move(options)), memoize_(memoize) {
  options_.on_step = nullptr;
  options_.hooks = {};
  options_.max_answers = 0;
}

std::size_t AnswerOracle::cache_size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

std::shared_ptr<const CallOutcome> AnswerOracle::call(const Goal& invocation) {
  if (invocation.kind() != Goal::Kind::Invoke) throw FactorError("oracle expects a relation call");
  Goal canon = canonical(invocation);
  std::string key = format_goal(canon);
  if (memoize_) {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }

  TraceStats stats = run(init(canon), program_, options_);
  if (stats.truncated) {
    throw FactorError("call " + key + " did not terminate within " + std::to_string(options_.step_limit) +
                      " steps");
  }
  auto out = std::make_shared<CallOutcome>();
  out->d = stats.d;
  out->t = stats.t;
  std::set<std::string> seen;
  for (const auto& answer : stats.answers) {
    std::vector<Term> tuple;
    std::string tuple_key;
    for (const auto& a : canon.args()) {
      Term value = answer.subst.apply(a, options_.unify.depth_guard);
      if (!value.is_ground()) {
        throw FactorError("call " + key + " has a non-ground answer: " + format_term(value));
      }
      tuple_key += format_term(value);
      tuple_key += '\n';
      tuple.push_back(std::move(value));
    }
    if (!seen.insert(tuple_key).second) throw FactorError("call " + key + " repeats an answer");
    out->answers.push_back(std::move(tuple));
  }

  if (memoize_) {
    std::lock_guard lock(mutex_);
    auto [it, inserted] = cache_.emplace(key, out);
    return it->second;
  }
  return out;
}

std::uint64_t FactorReport::max_L() const {
  std::uint64_t m = 0;
  for (const auto& [desc, d] : L) m = std::max(m, d);
  return m;
}

namespace {

struct Evaluator {
  AnswerOracle& oracle;
  const FactorOptions& options;
  FactorReport report;

  // Restriction of `s` to `vars`, all of which must be ground.
  Valuation restrict(const Substitution& s, const VarSet& vars) {
    Valuation out;
    for (VarIndex v : vars) {
      Term value = s.apply(Term::var(v));
      if (!value.is_ground()) {
        throw FactorError("grounded variable _" + std::to_string(v) + " is not determined: " + format_term(value));
      }
      out.emplace(v, std::move(value));
    }
    return out;
  }

  void leaf(const Goal& g, std::uint64_t d, std::uint64_t t) {
    report.D += d;
    report.T += t;
    report.L.emplace_back(format_goal(g), d);
  }

  void eval(const Scheme& s, const Valuation& rho) {
    Substitution r = to_substitution(rho);
    switch (s->kind) {
      case SchemeNode::Kind::Fork:
        eval(s->left, rho);
        eval(s->right, rho);
        return;
      case SchemeNode::Kind::UnifyLeaf:
        leaf(apply_to_call(*s->goal, r), 1, 1);
        return;
      case SchemeNode::Kind::InvokeLeaf: {
        Goal call = apply_to_call(*s->goal, r);
        auto outcome = oracle.call(call);
        leaf(call, outcome->d, outcome->t);
        return;
      }
      case SchemeNode::Kind::UnifyNode: {
        report.D += 1;
        report.T += 1;
        std::optional<Substitution> ext = r;
        for (const auto& c : s->constraints) {
          ext = unify_in(*ext, Term::var(c.var), c.value, UnifyOptions{true, kDefaultDepthGuard});
          if (!ext) break;
        }
        if (options.cross_check) {
          const Goal& g = *s->goal;
          bool concrete = unify(r.apply(g.lhs()), r.apply(g.rhs()), UnifyOptions{true, kDefaultDepthGuard})
                              .has_value();
          if (concrete != ext.has_value()) {
            throw FactorError("constraint solving disagrees with unification at " + format_goal(apply_to_call(g, r)));
          }
        }
        if (ext) eval(s->child, restrict(*ext, s->child->grounded));
        return;
      }
      case SchemeNode::Kind::InvokeNode: {
        Goal call = apply_to_call(*s->goal, r);
        auto outcome = oracle.call(call);
        report.D += outcome->d;
        report.T += outcome->t;
        for (const auto& tuple : outcome->answers) {
          std::optional<Substitution> ext = r;
          for (std::size_t i = 0; i < tuple.size() && ext; ++i) {
            ext = unify_in(*ext, call.args()[i], tuple[i], UnifyOptions{true, kDefaultDepthGuard});
          }
          if (!ext) throw FactorError("answer of " + format_goal(call) + " does not match the call");
          eval(s->child, restrict(*ext, s->child->grounded));
        }
        return;
      }
    }
  }
};

}  // namespace

FactorReport eval_factors(const Scheme& scheme, const Valuation& rho, AnswerOracle& oracle,
                          const FactorOptions& options) {
  Evaluator e{oracle, options, {}};
  e.eval(scheme, rho);
  return std::move(e.report);
}

Valuation valuation_for(const RelationScheme& scheme, const std::vector<Term>& values) {
  Valuation rho;
  std::size_t k = 0;
  for (std::size_t i = 0; i < scheme.grounded_params.size(); ++i) {
    if (!scheme.grounded_params[i]) continue;
    if (k >= values.size()) throw FactorError("too few values for the grounded parameters");
    if (!values[k].is_ground()) throw FactorError("valuation term is not ground: " + format_term(values[k]));
    rho.emplace(static_cast<VarIndex>(i + 1), values[k++]);
  }
  if (k != values.size()) throw FactorError("too many values for the grounded parameters");
  return rho;
}

TheoremReport check_theorem(const RelationScheme& scheme, const std::vector<ValuationCase>& family,
                            AnswerOracle& oracle, double max_band_ratio) {
  TheoremReport report;
  for (const auto& vc : family) {
    Valuation rho = valuation_for(scheme, vc.values);
    FactorReport f = eval_factors(scheme.root, rho, oracle);
    Goal g = scheme.goal.apply(to_substitution(rho));
    TraceStats stats = run(init(g), oracle.program(), oracle.options());
    if (stats.truncated) throw FactorError("goal for " + vc.label + " did not terminate");
    TheoremRow row;
    row.label = vc.label;
    row.d = stats.d;
    row.t = stats.t;
    row.D = f.D;
    row.T = f.T;
    row.max_L = f.max_L();
    double denom = static_cast<double>(f.D) - static_cast<double>(row.max_L) + 1.0;
    row.ratio = (static_cast<double>(stats.t) - static_cast<double>(f.T)) / denom;
    report.rows.push_back(std::move(row));
  }
  if (report.rows.empty()) return report;
  report.offset_constant = std::all_of(report.rows.begin(), report.rows.end(),
                                       [&](const TheoremRow& r) { return r.offset() == report.rows[0].offset(); });
  auto [lo, hi] = std::minmax_element(report.rows.begin(), report.rows.end(),
                                      [](const TheoremRow& a, const TheoremRow& b) { return a.ratio < b.ratio; });
  report.band_min = lo->ratio;
  report.band_max = hi->ratio;
  report.pass = report.offset_constant && report.band_min > 0 && report.band_ratio() <= max_band_ratio;
  return report;
}

}  // namespace mkcost
