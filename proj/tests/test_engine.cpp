#include <doctest.h>

#include <sstream>

#include "mkcost/error.hpp"
#include "support/testkit.hpp"

using namespace mkcost;
using testkit::cons;
using testkit::nil;
using testkit::v;

namespace {

const Program& prog() { return testkit::builtin_program(); }

TraceStats measure(const std::string& goal) { return run(init(parse_query(goal, prog()).goal), prog()); }

}  // namespace

TEST_SUITE("engine") {
  // Hand-traced values.
  TEST_CASE("single equality") {
    TraceStats s = run(init(Goal::unify(nil(), nil())), prog());
    CHECK(s.d == 1);
    CHECK(s.t == 1);
    CHECK(s.answers.size() == 1);
    CHECK_FALSE(s.truncated);
  }

  TEST_CASE("failing equality") {
    TraceStats s = run(init(Goal::unify(nil(), Term::ctor("Zero"))), prog());
    CHECK(s.d == 1);
    CHECK(s.t == 1);
    CHECK(s.answers.empty());
  }

  TEST_CASE("disjunction: leaf, sum, leaf") {
    Goal u = Goal::unify(nil(), nil());
    TraceStats s = run(init(Goal::disj(u, u)), prog());
    CHECK(s.d == 3);
    CHECK(s.t == 4);
    CHECK(s.answers.size() == 2);
  }

  TEST_CASE("conjunction: leaf, product, leaf") {
    Goal u = Goal::unify(nil(), nil());
    TraceStats s = run(init(Goal::conj(u, u)), prog());
    CHECK(s.d == 3);
    CHECK(s.t == 4);
    CHECK(s.answers.size() == 1);
  }

  TEST_CASE("appendo on short lists") {
    TraceStats a = measure("appendo(Nil, Nil, q)");
    CHECK(a.d == 11);
    CHECK(a.t == 20);
    TraceStats b = measure("appendo(Cons(Zero, Nil), Nil, q)");
    CHECK(b.d == 22);
    CHECK(b.t == 50);
    REQUIRE(b.answers.size() == 1);
    CHECK(reify(b.answers[0], {1})[0] == cons(Term::ctor("Zero"), nil()));
  }

  TEST_CASE("answers in search order") {
    Query q = parse_query("appendo_opt(a, b, Cons(Zero, Cons(One, Nil)))", prog());
    TraceStats s = run(init(q.goal), prog());
    REQUIRE(s.answers.size() == 3);
    CHECK(format_answer(s.answers[0], q.vars) == "{a = Nil, b = Cons(Zero, Cons(One, Nil))}");
    CHECK(format_answer(s.answers[1], q.vars) == "{a = Cons(Zero, Nil), b = Cons(One, Nil)}");
    CHECK(format_answer(s.answers[2], q.vars) == "{a = Cons(Zero, Cons(One, Nil)), b = Nil}");
  }

  TEST_CASE("backward modes") {
    CHECK(measure("pluso(n, m, S(S(S(O))))").answers.size() == 4);
    CHECK(measure("reverso_bwd(a, Cons(Zero, Cons(One, Nil)))").answers.size() == 1);
    Query q = parse_query("multo_bwd(S(x), S(y), S(S(S(S(O)))))", prog());
    TraceStats s = run(init(q.goal), prog());
    CHECK(s.answers.size() == 3);
    CHECK(check_answers(s, q.goal).ok());
  }

  TEST_CASE("fresh allocates above the counter") {
    Query q = parse_query("fresh z { z == x }", prog());
    TraceStats s = run(init(q.goal), prog());
    REQUIRE(s.answers.size() == 1);
    CHECK(s.answers[0].counter == 2);
    CHECK(s.answers[0].subst.apply(v(2)) == v(1));
  }

  TEST_CASE("step limit and answer limit") {
    RunOptions o;
    o.step_limit = 100;
    TraceStats s = run(init(parse_query("appendo(a, b, Cons(Zero, Nil))", prog()).goal), prog(), o);
    CHECK(s.truncated);
    CHECK(s.d == 100);
    RunOptions first;
    first.max_answers = 1;
    TraceStats f = run(init(parse_query("pluso(n, m, S(S(O)))", prog()).goal), prog(), first);
    CHECK(f.truncated);
    CHECK(f.answers.size() == 1);
  }

  TEST_CASE("init rejects unbound slots") {
    CHECK_THROWS_AS(init(Goal::unify(Term::slot(0), nil())), EngineError);
    CHECK(init(Goal::fresh(0, "x", Goal::unify(Term::slot(0), nil()))).is_leaf());
  }

  TEST_CASE("unknown relation and arity errors") {
    Goal bad = Goal::invoke(Symbols::intern("no_such_relation"), {nil()});
    CHECK_THROWS_AS(run(init(bad), prog()), EngineError);
    Goal arity = Goal::invoke(Symbols::intern("appendo"), {nil()});
    CHECK_THROWS_AS(run(init(arity), prog()), EngineError);
  }

  TEST_CASE("cyclic bindings without the occurs check") {
    Query q = parse_query("x == Cons(x, Nil)", prog());
    TraceStats s = run(init(q.goal), prog());
    REQUIRE(s.answers.size() == 1);
    CHECK_THROWS_AS(reify(s.answers[0], {1}, 1000), CyclicTermError);
    RunOptions on;
    on.unify.occurs_check = true;
    CHECK(run(init(q.goal), prog(), on).answers.empty());
  }

  TEST_CASE("lh and well-formedness along a trace") {
    RunOptions o;
    std::uint64_t t = 0;
    bool all_wf = true;
    o.on_step = [&](std::uint64_t, const State& from, const Transition& tr) {
      CHECK(tr.height == lh(from));
      t += tr.height;
      all_wf = all_wf && well_formed(from);
    };
    TraceStats s = run(init(parse_query("reverso(Cons(Zero, Cons(One, Nil)), r)", prog()).goal), prog(), o);
    CHECK(all_wf);
    CHECK(t == s.t);
  }

  TEST_CASE("well_formed rejects variables above the counter") {
    Goal g = Goal::unify(v(3), nil());
    CHECK(well_formed(State::leaf(g, Env{{}, 3})));
    CHECK_FALSE(well_formed(State::leaf(g, Env{{}, 2})));
    CHECK_FALSE(well_formed(State::leaf(Goal::unify(v(1), nil()), Env{Substitution{}.bind(4, nil()), 3})));
  }

  TEST_CASE("d <= t <= d^2 on random goals") {
    testkit::Gen gen(5);
    int converged = 0;
    for (int i = 0; i < 200; ++i) {
      Goal g = gen.goal(3, 4);
      TraceStats s = run(init(g), prog(), testkit::checked_run_options());
      if (s.truncated) continue;
      ++converged;
      CHECK(s.d <= s.t);
      CHECK(s.t <= s.d * s.d);
    }
    CHECK(converged > 150);
  }

  TEST_CASE("check_answers flags non-ground and repeated answers") {
    Query dup = parse_query("x == Nil | x == Nil", prog());
    AnswerReport r = check_answers(run(init(dup.goal), prog()), dup.goal);
    CHECK(r.duplicates == 1);
    CHECK_FALSE(r.ok());
    Query open = parse_query("x == Cons(y, Nil)", prog());
    AnswerReport o = check_answers(run(init(open.goal), prog()), open.goal);
    CHECK(o.non_ground == 2);
  }

  TEST_CASE("trace golden") {
    Query q = parse_query("appendo(Cons(Zero, Nil), Nil, q)", prog());
    std::ostringstream out;
    RunOptions o;
    o.on_step = [&](std::uint64_t i, const State& from, const Transition& tr) {
      out << format_trace_line(i, from, tr, q.vars) << '\n';
    };
    run(init(q.goal), prog(), o);
    CHECK(out.str() == testkit::read_text(testkit::golden_path("trace_appendo_1.txt")));
  }

  TEST_CASE("hand-checked trace shape") {
    Query q = parse_query("x == Nil | x == Zero", prog());
    std::vector<std::string> lines;
    RunOptions o;
    o.on_step = [&](std::uint64_t i, const State& from, const Transition& tr) {
      lines.push_back(format_trace_line(i, from, tr, q.vars));
    };
    run(init(q.goal), prog(), o);
    CHECK(lines == std::vector<std::string>{"1; 1; ∘; [|]", "2; 2; {x = Nil}; (+ [==] [==])", "3; 1; {x = Zero}; [==]"});
  }

  TEST_CASE("tracked product reports every left answer") {
    Goal left = parse_query("x == Nil | x == Zero", prog()).goal;
    Goal right = Goal::unify(v(1), v(1));
    State s = State::prod(init(left), right, true);
    int calls = 0;
    RunOptions o;
    o.hooks.on_tracked_answer = [&](const Env&, const MaybeState&) { ++calls; };
    TraceStats st = run(s, prog(), o);
    CHECK(calls == 2);
    CHECK(st.answers.size() == 2);
  }
}
