// Acceptance runner: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion numbers...]

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "mkcost/bench.hpp"
#include "mkcost/factors.hpp"
#include "mkcost/scheme.hpp"
#include "support/testkit.hpp"

using namespace mkcost;
using testkit::Gen;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void fail(const std::string& why) {
    pass = false;
    if (failures.size() < 5) failures.push_back(why);
  }
};

const Program& prog() { return testkit::builtin_program(); }

std::int64_t i64(std::uint64_t x) { return static_cast<std::int64_t>(x); }

TraceStats measure(const State& s, std::uint64_t limit = 200000) {
  return run(s, prog(), testkit::checked_run_options(limit));
}

std::string fmt(double x, int prec = 3) {
  std::ostringstream ss;
  ss.precision(prec);
  ss << std::fixed << x;
  return ss.str();
}

// ---------------------------------------------------------------------------
// 1. Sum, product and task equations, exactly.

bool check_leaf_step(const State& s, Outcome& out) {
  if (!s.is_leaf()) return false;
  Transition tr = step(s, prog(), {true});
  TraceStats whole = measure(s);
  std::int64_t d_next = 0, t_next = 0;
  if (tr.next) {
    TraceStats rest = measure(*tr.next);
    d_next = i64(rest.d);
    t_next = i64(rest.t);
  }
  if (i64(whole.d) != d_next + 1 || i64(whole.t) != t_next + 1) {
    out.fail("leaf step equation fails at " + format_shape(s));
  }
  return true;
}

// Left operands for products; half of them are built to deliver several answers.
Goal left_goal(Gen& gen) {
  if (gen.chance(0.5)) return gen.goal(3, 4);
  if (gen.chance(0.3)) {
    return Goal::invoke(Symbols::intern("appendo_opt"), {Term::var(1), Term::var(2), gen.small_list()});
  }
  auto branch = [&] {
    Goal b = Goal::unify(Term::var(static_cast<VarIndex>(1 + gen.below(3))), gen.term(0, 2));
    return gen.chance(0.5) ? Goal::conj(b, gen.goal(3, 1)) : b;
  };
  Goal g = branch();
  for (std::size_t k = 1 + gen.below(3); k > 0; --k) g = Goal::disj(g, branch());
  return Goal::conj(Goal::unify(Term::var(3), Term::var(3)), g);
}

Outcome criterion1() {
  Outcome out;
  Gen gen(1);
  int sums = 0, prods = 0, leaves = 0, composite = 0, multi = 0;
  std::uint64_t max_d = 0;

  while (sums < 600) {
    auto s1 = testkit::sample_state(gen, gen.goal(3, 4), prog());
    auto s2 = testkit::sample_state(gen, gen.goal(3, 4), prog());
    if (!s1 || !s2) continue;
    TraceStats m1 = measure(*s1), m2 = measure(*s2), ms = measure(State::sum(*s1, *s2));
    if (m1.truncated || m2.truncated || ms.truncated) continue;
    std::int64_t cost = std::min(2 * i64(m1.d) - 1, 2 * i64(m2.d));
    if (i64(ms.d) != i64(m1.d) + i64(m2.d) || i64(ms.t) != i64(m1.t) + i64(m2.t) + cost) {
      out.fail("sum equations: d=" + std::to_string(ms.d) + " t=" + std::to_string(ms.t));
    }
    ++sums;
    composite += !s1->is_leaf();
    max_d = std::max(max_d, ms.d);

    // Leaf step equation on every leaf in the trace of s1.
    std::vector<State> seen;
    RunOptions o = testkit::checked_run_options();
    o.on_step = [&](std::uint64_t, const State& from, const Transition&) {
      if (from.is_leaf()) seen.push_back(from);
    };
    run(*s1, prog(), o);
    for (const auto& leaf : seen) leaves += check_leaf_step(leaf, out);
  }

  while (prods < 600) {
    Goal g0 = left_goal(gen);
    auto s = testkit::sample_state(gen, g0, prog());
    if (!s) continue;
    Goal g = gen.goal(g0.max_var(), 2);
    State prod = State::prod(*s, g, true);
    if (!well_formed(prod)) {
      out.fail("generated product is not well-formed");
      continue;
    }
    std::vector<std::pair<Env, MaybeState>> tracked;
    RunOptions o = testkit::checked_run_options(200000);
    o.hooks.on_tracked_answer = [&](const Env& a, const MaybeState& rest) { tracked.emplace_back(a, rest); };
    std::vector<State> seen;
    o.on_step = [&](std::uint64_t, const State& from, const Transition&) {
      if (from.is_leaf()) seen.push_back(from);
    };
    TraceStats mp = run(prod, prog(), o);
    for (const auto& leaf : seen) leaves += check_leaf_step(leaf, out);
    TraceStats ml = measure(*s);
    if (mp.truncated || ml.truncated) continue;

    if (tracked.size() != ml.answers.size()) {
      out.fail("product saw a different number of left answers");
      continue;
    }
    std::int64_t d = i64(ml.d), t = i64(ml.t) + i64(ml.d);
    bool complete = true;
    for (std::size_t i = 0; i < tracked.size() && complete; ++i) {
      const auto& [answer, rest] = tracked[i];
      if (!(answer == ml.answers[i])) out.fail("left answers differ in order");
      TraceStats task = measure(State::leaf(g, answer));
      std::int64_t d_rest = 0;
      if (rest) {
        TraceStats r = measure(State::prod(*rest, g));
        complete = !r.truncated;
        d_rest = i64(r.d);
      }
      complete = complete && !task.truncated;
      d += i64(task.d);
      t += i64(task.t) + std::min(2 * i64(task.d) - 1, 2 * d_rest);
    }
    if (!complete) continue;
    if (i64(mp.d) != d || i64(mp.t) != t) {
      out.fail("product equations: measured d=" + std::to_string(mp.d) + " t=" + std::to_string(mp.t) +
               ", equations give d=" + std::to_string(d) + " t=" + std::to_string(t));
    }
    ++prods;
    composite += !s->is_leaf();
    multi += tracked.size() > 1;
    max_d = std::max(max_d, mp.d);
  }

  out.detail = std::to_string(sums) + " sums, " + std::to_string(prods) + " products, " + std::to_string(leaves) +
               " leaf steps; " + std::to_string(composite) + " composite states, " + std::to_string(multi) +
               " products with several left answers, max d " + std::to_string(max_d);
  return out;
}

// ---------------------------------------------------------------------------
// 2. d <= t <= d^2 across suites and random goals.

Outcome criterion2() {
  Outcome out;
  std::size_t runs = 0;
  auto check = [&](const TraceStats& s, const std::string& what) {
    ++runs;
    if (!(s.d <= s.t && s.t <= s.d * s.d)) {
      out.fail(what + ": d=" + std::to_string(s.d) + " t=" + std::to_string(s.t));
    }
  };
  auto zero = [] { return Term::ctor("Zero"); };
  for (const auto& suite : builtin_suites()) {
    for (std::size_t n : {1, 2, 3, 5, 8, 13, 21}) {
      TraceStats s = run(init(suite_goal(suite, n, zero)), prog());
      if (s.truncated) {
        out.fail(suite.id + " did not terminate at size " + std::to_string(n));
        continue;
      }
      check(s, suite.id + "@" + std::to_string(n));
    }
  }
  Gen gen(2);
  for (int i = 0; i < 2000; ++i) {
    TraceStats s = run(init(gen.goal(3, 4)), prog(), testkit::checked_run_options());
    if (!s.truncated) check(s, "random goal");
  }
  out.detail = std::to_string(runs) + " runs";
  return out;
}

// ---------------------------------------------------------------------------
// 3. Renaming and environment changes leave d and t unchanged.

Outcome criterion3() {
  Outcome out;
  Gen gen(3);
  int cases = 0;
  while (cases < 200) {
    Goal g = gen.goal(4, 3);
    VarSet fv = free_vars(g);
    if (fv.empty()) continue;
    VarIndex n0 = g.max_var();
    VarIndex x = *std::next(fv.begin(), static_cast<long>(gen.below(fv.size())));
    Term u = gen.term(n0, 2);
    if (testkit::occurs_in(x, u)) continue;
    Substitution sigma = Substitution{}.bind(x, u);
    VarIndex extra = static_cast<VarIndex>(gen.below(4));
    State a = State::leaf(g, Env{sigma, n0 + extra});

    std::vector<VarIndex> perm(n0);
    for (VarIndex i = 0; i < n0; ++i) perm[i] = i + 1;
    std::shuffle(perm.begin(), perm.end(), gen.rng());
    VarIndex shift = static_cast<VarIndex>(gen.below(50));
    std::map<VarIndex, VarIndex> pi;
    for (VarIndex i = 0; i < n0; ++i) pi[i + 1] = perm[i] + shift;
    Goal renamed = g.apply(sigma).rename(pi);
    State b = State::leaf(renamed, Env{{}, n0 + shift + static_cast<VarIndex>(gen.below(4))});
    if (!well_formed(a) || !well_formed(b)) {
      out.fail("generated state is not well-formed");
      continue;
    }
    TraceStats ma = measure(a, 20000), mb = measure(b, 20000);
    if (ma.truncated || mb.truncated) continue;
    if (ma.d != mb.d || ma.t != mb.t) {
      out.fail("renaming changed the measures of " + format_goal(g));
    }
    ++cases;
  }
  out.detail = std::to_string(cases) + " triples";
  return out;
}

// ---------------------------------------------------------------------------
// 4. Factor bands for appendo and appendo_opt.

Outcome criterion4() {
  Outcome out;
  AnswerOracle oracle(prog());
  for (const char* name : {"appendo", "appendo_opt"}) {
    RelationScheme rs = scheme_for_relation(*prog().find(name), {true, true, false});
    std::vector<ValuationCase> family;
    for (std::size_t n = 1; n <= 30; ++n) {
      family.push_back({std::to_string(n), {make_list(n, Term::ctor("Zero")), Term::ctor("Nil")}});
    }
    TheoremReport r = check_theorem(rs, family, oracle, 4.0);
    if (!r.offset_constant) out.fail(std::string(name) + ": d - D is not constant");
    if (!r.pass) out.fail(std::string(name) + ": ratio band [" + fmt(r.band_min) + ", " + fmt(r.band_max) + "]");
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += std::string(name) + " d-D=" + std::to_string(r.rows[0].offset()) + " band [" + fmt(r.band_min) +
                  ", " + fmt(r.band_max) + "] x" + fmt(r.band_ratio(), 2);
  }
  return out;
}

// ---------------------------------------------------------------------------
// 5. Log-log slopes of the benchmark suites.

struct SlopeSpec {
  const char* suite;
  const char* sizes;
  double d, d_tol, t, t_tol;
};

Outcome criterion5() {
  static const SlopeSpec specs[] = {
      {"appendo", "25:400:25", 1.0, 0.1, 2.0, 0.15},
      {"appendo_opt", "25:400:25", 1.0, 0.1, 1.0, 0.1},
      {"appendo_opt_bwd", "25:400:25", 1.0, 0.1, 1.0, 0.1},
      {"reverso", "25:400:25", 2.0, 0.15, 3.0, 0.2},
      {"reverso_bwd", "25:400:25", 2.0, 0.15, 2.0, 0.15},
      {"pluso_nm", "20:200:20", 1.0, 0.1, 1.0, 0.1},
      {"pluso_nr", "20:200:20", 1.0, 0.1, 1.0, 0.1},
      {"pluso_r", "20:200:20", 1.0, 0.1, 1.0, 0.1},
      {"multo_nm", "20:200:20", 1.0, 0.1, 2.0, 0.15},
      {"multo_ssr", "20:200:20", 2.0, 0.2, 2.0, 0.2},
  };
  Outcome out;
  BenchOptions o;
  o.reps = 1;
  for (const auto& sp : specs) {
    auto points = run_series(find_suite(sp.suite), parse_sizes(sp.sizes), prog(), o);
    double sd = fit_loglog(points, Field::D).slope;
    double st = fit_loglog(points, Field::T).slope;
    bool ok = std::abs(sd - sp.d) <= sp.d_tol && std::abs(st - sp.t) <= sp.t_tol;
    if (!ok) out.fail(std::string(sp.suite) + " slopes d=" + fmt(sd) + " t=" + fmt(st));
    if (!out.detail.empty()) out.detail += ", ";
    out.detail += std::string(sp.suite) + " " + fmt(sd, 2) + "/" + fmt(st, 2);
  }
  return out;
}

// ---------------------------------------------------------------------------
// 6. Wall time follows t.

Outcome criterion6() {
  Outcome out;
  BenchOptions o;
  o.reps = 3;
  auto points = run_series(find_suite("appendo"), parse_sizes("25:400:25"), prog(), o);
  double r = wall_t_correlation(points);
  if (r < 0.95) out.fail("Pearson r = " + fmt(r, 4));
  out.detail = "appendo Pearson r = " + fmt(r, 4);
  return out;
}

// ---------------------------------------------------------------------------
// 7. Answer counts of backward appendo and the appendo scheme.

Outcome criterion7() {
  Outcome out;
  for (std::size_t k : {0, 1, 2, 3, 5}) {
    Goal target = Goal::invoke(Symbols::intern("appendo_opt"),
                               {Term::var(1), Term::var(2), make_list(k, Term::ctor("Zero"))});
    TraceStats s = run(init(target), prog());
    AnswerReport r = check_answers(s, target);
    if (s.truncated || s.answers.size() != k + 1 || !r.ok()) {
      out.fail("appendo_opt on a " + std::to_string(k) + "-list: " + std::to_string(s.answers.size()) + " answers");
    }
    // appendo runs on after its last answer; only the answers it emits are checked.
    Goal plain = Goal::invoke(Symbols::intern("appendo"),
                              {Term::var(1), Term::var(2), make_list(k, Term::ctor("Zero"))});
    RunOptions lim;
    lim.step_limit = 20000;
    lim.max_answers = k + 2;
    TraceStats p = run(init(plain), prog(), lim);
    if (p.answers.size() != k + 1 || !check_answers(p, plain).ok()) {
      out.fail("appendo on a " + std::to_string(k) + "-list: " + std::to_string(p.answers.size()) + " answers");
    }
  }
  RelationScheme rs = scheme_for_relation(*prog().find("appendo"), {true, true, false});
  if (render_text(rs) != testkit::read_text(testkit::golden_path("appendo_scheme.txt"))) {
    out.fail("appendo scheme differs from the golden file");
  }
  out.detail = "k in {0,1,2,3,5}; scheme golden";
  return out;
}

// ---------------------------------------------------------------------------
// 8. Symbolic unification against concrete unification.

Term tuple(const std::vector<Term>& ts) {
  Term acc = Term::ctor("Nil");
  for (auto it = ts.rbegin(); it != ts.rend(); ++it) acc = Term::ctor("Tuple", {*it, acc});
  return acc;
}

Outcome criterion8() {
  Outcome out;
  Gen gen(8);
  const VarIndex k = 5;
  int both = 0, neither = 0, symbolic_fail = 0;
  for (int i = 0; i < 1000; ++i) {
    Term t1 = gen.term(k, 3);
    Term t2 = gen.term(k, 3);
    if (gen.chance(0.5)) {
      // A near-instance of t1 unifies far more often than an independent term.
      VarIndex x = static_cast<VarIndex>(1 + gen.below(k));
      Term repl = gen.term(k, 1);
      if (!testkit::occurs_in(x, repl)) t2 = Substitution{}.bind(x, repl).apply(t1);
    }
    VarSet V;
    Valuation rho;
    for (VarIndex x = 1; x <= k; ++x) {
      if (gen.chance(0.5)) {
        V.insert(x);
        rho.emplace(x, gen.ground(2));
      }
    }
    Substitution rs = to_substitution(rho);
    auto concrete = testkit::reference_mgu(rs.apply(t1), rs.apply(t2));

    auto delta = unify(t1, t2, true);
    if (!delta) {
      ++symbolic_fail;
      if (concrete) out.fail("mgu(t1, t2) fails but the instances unify");
      continue;
    }
    Substitution dr = resolved(*delta);
    VarSet U = upd(V, dr);
    std::vector<Constraint> cs = constr(dr, U);

    // rho' over U: agrees with rho on V and satisfies every constraint.
    std::vector<Term> lhs, rhs;
    for (const auto& [x, val] : rho) {
      lhs.push_back(Term::var(x));
      rhs.push_back(val);
    }
    for (const auto& c : cs) {
      lhs.push_back(Term::var(c.var));
      rhs.push_back(c.value);
    }
    auto ext = testkit::reference_mgu(tuple(lhs), tuple(rhs));
    bool exists = ext.has_value();
    if (ext) {
      for (VarIndex u : U) {
        if (!testkit::apply_solution(*ext, Term::var(u)).is_ground()) {
          out.fail("extension leaves a grounded variable open");
          exists = false;
        }
      }
    }
    if (exists != concrete.has_value()) {
      out.fail("extension " + std::string(exists ? "exists" : "missing") + " but concrete unification " +
               (concrete ? "succeeds" : "fails") + ": " + format_term(t1) + " = " + format_term(t2));
      continue;
    }
    if (!exists) {
      ++neither;
      continue;
    }
    ++both;
    VarSet fv = free_vars(t1);
    collect_free_vars(t2, fv);
    std::vector<Term> left, right;
    for (VarIndex x : fv) {
      left.push_back(testkit::apply_solution(*concrete, rs.apply(Term::var(x))));
      right.push_back(testkit::apply_solution(*ext, dr.apply(Term::var(x))));
    }
    if (!testkit::variants(left, right)) out.fail("composed substitutions differ beyond renaming");
  }
  out.detail = std::to_string(both) + " unifiable, " + std::to_string(neither) + " blocked by constraints, " +
               std::to_string(symbolic_fail) + " without mgu";
  if (both < 100 || neither < 100) out.fail("too few cases on one side");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exact measure equations", criterion1}, {"d <= t <= d^2", criterion2},
      {"renaming invariance", criterion3},     {"factor bands", criterion4},
      {"complexity slopes", criterion5},       {"wall time tracks t", criterion6},
      {"answer counts and scheme", criterion7}, {"symbolic unification", criterion8},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << "  " << criteria[i].first << "  (" << o.detail << "; "
              << fmt(secs, 1) << "s)" << std::endl;
    for (const auto& f : o.failures) std::cout << "      " << f << std::endl;
  }
  return all ? 0 : 1;
}
