#include "mkcost/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mkcost/bench.hpp"
#include "mkcost/builtin_programs.hpp"
#include "mkcost/dnf.hpp"
#include "mkcost/error.hpp"
#include "mkcost/factors.hpp"
#include "mkcost/parser.hpp"
#include "mkcost/scheme.hpp"

namespace mkcost {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string file;
  std::string goal;
  std::string occurs = "off";
  std::uint64_t limit = 10'000'000;
  std::size_t depth_guard = kDefaultDepthGuard;
  std::string format = "text";
  std::optional<std::uint64_t> seed;
  std::uint64_t max_answers = 0;
  std::string rel;
  std::string grounded;
  std::string dot_path;
  std::string sizes;
  std::string vary;
  std::vector<std::string> values;
  std::string kind = "list";
  std::string csv_path;
  double band = 4.0;
  bool fit = false;
  unsigned reps = 3;
  std::string suite;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

Program load(const Config& c, bool require_dnf = true) {
  if (c.file.empty()) return parse_program(builtin::kBenchmarks);
  return parse_program(read_file(c.file), ParseOptions{require_dnf});
}

Query goal_of(const Config& c, const Program& p) {
  if (!c.goal.empty()) return parse_query(c.goal, p);
  if (p.top()) return *p.top();
  throw UsageError("no goal: pass --goal or end the program with a goal");
}

RunOptions run_options(const Config& c) {
  RunOptions o;
  o.step_limit = c.limit;
  o.max_answers = c.max_answers;
  o.unify.occurs_check = c.occurs == "on";
  o.unify.depth_guard = c.depth_guard;
  return o;
}

void require_format(const Config& c, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (c.format == f) return;
  }
  std::string list;
  for (const char* f : allowed) list += std::string(list.empty() ? "" : ", ") + f;
  throw UsageError("--format " + c.format + " is not supported here (use " + list + ")");
}

json answer_json(const Env& answer, const Query& q) {
  VarNames names = q.names();
  json obj = json::object();
  for (const auto& [name, v] : q.vars) obj[name] = format_term(answer.subst.apply(Term::var(v)), &names);
  return obj;
}

int cmd_run(const Config& c, std::ostream& out, std::ostream& err) {
  require_format(c, {"text", "json"});
  Program p = load(c);
  Query q = goal_of(c, p);
  TraceStats stats = run(init(q.goal), p, run_options(c));
  if (c.format == "json") {
    json answers = json::array();
    for (const auto& a : stats.answers) answers.push_back(answer_json(a, q));
    out << json{{"answers", answers}, {"count", stats.answers.size()}, {"truncated", stats.truncated}}.dump(2)
        << '\n';
  } else {
    for (const auto& a : stats.answers) out << format_answer(a, q.vars) << '\n';
  }
  if (stats.truncated && (c.max_answers == 0 || stats.answers.size() < c.max_answers)) {
    err << "warning: stopped at the step limit (" << c.limit << ")\n";
  }
  return 0;
}

int cmd_trace(const Config& c, std::ostream& out, std::ostream& err) {
  require_format(c, {"text", "json"});
  Program p = load(c);
  Query q = goal_of(c, p);
  RunOptions o = run_options(c);
  json steps = json::array();
  o.on_step = [&](std::uint64_t index, const State& from, const Transition& tr) {
    if (c.format == "json") {
      steps.push_back({{"step", index},
                       {"lh", tr.height},
                       {"label", tr.answer ? json(answer_json(*tr.answer, q)) : json("silent")},
                       {"state", format_shape(from)}});
    } else {
      out << format_trace_line(index, from, tr, q.vars) << '\n';
    }
  };
  TraceStats stats = run(init(q.goal), p, o);
  if (c.format == "json") out << json{{"steps", steps}, {"truncated", stats.truncated}}.dump(2) << '\n';
  if (stats.truncated) err << "warning: stopped at the step limit (" << c.limit << ")\n";
  return 0;
}

int cmd_measure(const Config& c, std::ostream& out, std::ostream& err) {
  require_format(c, {"text", "json"});
  Program p = load(c);
  Query q = goal_of(c, p);
  TraceStats stats = run(init(q.goal), p, run_options(c));
  if (c.format == "json") {
    out << json{{"d", stats.d}, {"t", stats.t}, {"answers", stats.answers.size()}, {"truncated", stats.truncated}}
               .dump(2)
        << '\n';
  } else {
    out << "d=" << stats.d << ", t=" << stats.t << ", answers=" << stats.answers.size() << '\n';
  }
  if (stats.truncated) {
    err << "error: the goal did not terminate within " << c.limit << " steps\n";
    return 1;
  }
  return 0;
}

const Relation& relation_of(const Config& c, const Program& p) {
  if (c.rel.empty()) throw UsageError("--rel is required");
  const Relation* r = p.find(c.rel);
  if (!r) throw Error("unknown relation '" + c.rel + "'");
  return *r;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto b = part.find_first_not_of(' ');
    auto e = part.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(part.substr(b, e - b + 1));
  }
  return out;
}

std::vector<bool> grounded_pattern(const Relation& r, const std::string& text) {
  std::vector<bool> pattern(r.arity(), false);
  for (const auto& name : split_names(text)) {
    auto it = std::find(r.params.begin(), r.params.end(), name);
    if (it == r.params.end()) throw Error("relation '" + r.name + "' has no parameter '" + name + "'");
    pattern[static_cast<std::size_t>(it - r.params.begin())] = true;
  }
  return pattern;
}

json scheme_json(const Scheme& s) {
  static const char* kinds[] = {"unify_leaf", "invoke_leaf", "unify_node", "invoke_node", "fork"};
  json j{{"kind", kinds[static_cast<int>(s->kind)]}};
  json grounded = json::array();
  for (VarIndex v : s->grounded) {
    auto it = s->names.find(v);
    grounded.push_back(it != s->names.end() ? it->second : "_" + std::to_string(v));
  }
  j["grounded"] = grounded;
  if (s->goal) j["goal"] = format_goal(*s->goal, {}, &s->names);
  if (s->dead) j["dead"] = true;
  if (s->kind == SchemeNode::Kind::UnifyNode) {
    json cs = json::array();
    for (const auto& c : s->constraints) {
      cs.push_back({{"var", format_term(Term::var(c.var), &s->names)}, {"value", format_term(c.value, &s->names)}});
    }
    j["constraints"] = cs;
  }
  if (s->child) j["child"] = scheme_json(s->child);
  if (s->left) j["left"] = scheme_json(s->left);
  if (s->right) j["right"] = scheme_json(s->right);
  return j;
}

int cmd_scheme(const Config& c, std::ostream& out, std::ostream&) {
  require_format(c, {"text", "dot", "json"});
  Program p = load(c);
  const Relation& r = relation_of(c, p);
  RelationScheme s = scheme_for_relation(r, grounded_pattern(r, c.grounded));
  if (!c.dot_path.empty()) write_file(c.dot_path, render_dot(s));
  if (c.format == "dot") {
    out << render_dot(s);
  } else if (c.format == "json") {
    out << json{{"relation", r.name}, {"grounded", split_names(c.grounded)}, {"scheme", scheme_json(s.root)}}.dump(2)
        << '\n';
  } else {
    out << render_text(s);
  }
  return 0;
}

int cmd_factors(const Config& c, std::ostream& out, std::ostream& err) {
  require_format(c, {"text", "csv", "json"});
  if (c.sizes.empty()) throw UsageError("--sizes is required");
  if (c.kind != "list" && c.kind != "peano") throw UsageError("--kind must be list or peano");
  Program p = load(c);
  const Relation& r = relation_of(c, p);
  std::vector<bool> pattern = grounded_pattern(r, c.grounded);
  std::vector<std::string> grounded_names = split_names(c.grounded);
  if (grounded_names.empty()) throw UsageError("--grounded must name at least one parameter");

  std::map<std::string, Term> fixed;
  for (const auto& v : c.values) {
    auto eq = v.find('=');
    if (eq == std::string::npos) throw UsageError("--value expects NAME=TERM, got '" + v + "'");
    fixed.emplace(v.substr(0, eq), parse_term(v.substr(eq + 1)));
  }
  std::string vary = c.vary;
  if (vary.empty()) {
    for (std::size_t i = 0; i < r.arity(); ++i) {
      if (pattern[i] && !fixed.count(r.params[i])) {
        vary = r.params[i];
        break;
      }
    }
  }

  std::vector<ValuationCase> family;
  for (std::size_t n : parse_sizes(c.sizes)) {
    ValuationCase vc{vary + "=" + std::to_string(n), {}};
    for (std::size_t i = 0; i < r.arity(); ++i) {
      if (!pattern[i]) continue;
      const std::string& name = r.params[i];
      std::size_t size = name == vary ? n : 0;
      if (auto it = fixed.find(name); it != fixed.end() && name != vary) {
        vc.values.push_back(it->second);
      } else {
        vc.values.push_back(c.kind == "list" ? make_list(size, Term::ctor("Zero")) : make_peano(size));
      }
    }
    family.push_back(std::move(vc));
  }

  AnswerOracle oracle(p, run_options(c));
  RelationScheme s = scheme_for_relation(r, pattern);
  TheoremReport report = check_theorem(s, family, oracle, c.band);

  std::ostringstream csv;
  csv << "size,d,D,t,T,maxL,ratio\n";
  for (const auto& row : report.rows) {
    csv << row.label << ',' << row.d << ',' << row.D << ',' << row.t << ',' << row.T << ',' << row.max_L << ','
        << row.ratio << '\n';
  }
  if (!c.csv_path.empty()) write_file(c.csv_path, csv.str());
  if (c.format == "json") {
    json rows = json::array();
    for (const auto& row : report.rows) {
      rows.push_back({{"size", row.label},
                      {"d", row.d},
                      {"D", row.D},
                      {"t", row.t},
                      {"T", row.T},
                      {"maxL", row.max_L},
                      {"ratio", row.ratio}});
    }
    out << json{{"rows", rows},
                {"offset_constant", report.offset_constant},
                {"band", {report.band_min, report.band_max}},
                {"pass", report.pass}}
               .dump(2)
        << '\n';
  } else {
    out << csv.str();
    err << "d - D " << (report.offset_constant ? "constant" : "not constant") << "; ratio band [" << report.band_min
        << ", " << report.band_max << "]; " << (report.pass ? "within" : "outside") << " the " << c.band
        << "x limit\n";
  }
  return 0;
}

int cmd_bench(const Config& c, std::ostream& out, std::ostream& err) {
  require_format(c, {"text", "csv", "json"});
  if (c.suite.empty()) throw UsageError("--suite is required");
  if (c.sizes.empty()) throw UsageError("--sizes is required");
  Program p = load(c);
  std::vector<const Suite*> suites;
  if (c.suite == "all") {
    for (const auto& s : builtin_suites()) suites.push_back(&s);
  } else {
    suites.push_back(&find_suite(c.suite));
  }
  BenchOptions o;
  o.reps = c.reps;
  o.step_limit = c.limit;
  o.unify.occurs_check = c.occurs == "on";
  o.unify.depth_guard = c.depth_guard;
  o.seed = c.seed;
  std::vector<std::size_t> sizes = parse_sizes(c.sizes);

  std::ostringstream series, fits;
  json doc = json::array();
  bool first = true;
  for (const Suite* s : suites) {
    auto points = run_series(*s, sizes, p, o);
    emit_csv(series, s->id, points, first);
    json entry{{"suite", s->id}};
    if (c.format == "json") {
      json pts = json::array();
      for (const auto& pt : points) {
        pts.push_back({{"size", pt.size}, {"d", pt.d}, {"t", pt.t}, {"wall_ns", pt.wall_ns}, {"answers", pt.answers}});
      }
      entry["points"] = pts;
    }
    if (c.fit) {
      json fj = json::array();
      for (Field f : {Field::D, Field::T, Field::Wall}) {
        try {
          FitResult r = fit_loglog(points, f);
          emit_fit_csv(fits, s->id, f, r, first && f == Field::D);
          fj.push_back({{"field", field_name(f)}, {"slope", r.slope}, {"intercept", r.intercept}, {"r2", r.r2}});
        } catch (const BenchError& e) {
          err << "warning: " << s->id << " " << field_name(f) << ": " << e.what() << '\n';
        }
      }
      if (points.size() >= 2) entry["pearson_wall_t"] = wall_t_correlation(points);
      entry["fits"] = fj;
    }
    doc.push_back(entry);
    first = false;
  }
  if (!c.csv_path.empty()) write_file(c.csv_path, series.str());
  if (c.format == "json") {
    out << doc.dump(2) << '\n';
  } else {
    out << series.str();
    if (c.fit) out << '\n' << fits.str();
  }
  return 0;
}

int cmd_check(const Config& c, std::ostream& out, std::ostream&) {
  require_format(c, {"text", "json"});
  Program p = load(c, false);
  bool ok = true;
  json rels = json::array();
  for (const auto& r : p.relations()) {
    DnfCheck check = validate_dnf(r.body);
    ok = ok && check.ok;
    if (c.format == "json") {
      rels.push_back({{"relation", r.name}, {"dnf", check.ok}, {"diagnostic", check.diagnostic}});
    } else {
      out << "rel " << r.name << ": " << (check.ok ? "ok" : "not in DNF: " + check.diagnostic) << '\n';
    }
  }
  json goal_json;
  if (!c.goal.empty() || p.top()) {
    Query q = goal_of(c, p);
    TraceStats stats = run(init(q.goal), p, run_options(c));
    AnswerReport report = check_answers(stats, q.goal);
    if (stats.truncated) report.violations.push_back("the goal did not terminate within the step limit");
    ok = ok && report.ok();
    if (c.format == "json") {
      goal_json = {{"answers", report.answers}, {"truncated", stats.truncated}, {"violations", report.violations}};
    } else {
      out << "goal: " << report.answers << " answers";
      if (report.ok()) out << ", all ground and unique";
      out << '\n';
      for (const auto& v : report.violations) out << "  " << v << '\n';
    }
  }
  if (c.format == "json") {
    json doc{{"relations", rels}, {"ok", ok}};
    if (!goal_json.is_null()) doc["goal"] = goal_json;
    out << doc.dump(2) << '\n';
  }
  return ok ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scheduling cost analysis for interleaving search", "mkcost"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--occurs-check", c.occurs, "Occurs check in unification")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    sub->add_option("--limit", c.limit, "Step limit per run")->capture_default_str();
    sub->add_option("--depth-guard", c.depth_guard, "Resolution depth treated as a cycle")->capture_default_str();
    sub->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "dot", "csv"}))
        ->capture_default_str();
  };
  auto with_file = [&](CLI::App* sub) {
    sub->add_option("file", c.file, "Program file")->required();
  };
  auto with_goal = [&](CLI::App* sub) {
    sub->add_option("-g,--goal", c.goal, "Goal expression; defaults to the program's goal");
  };

  std::map<CLI::App*, int (*)(const Config&, std::ostream&, std::ostream&)> handlers;

  auto* run_cmd = app.add_subcommand("run", "Print the answers of a goal");
  with_file(run_cmd);
  with_goal(run_cmd);
  common(run_cmd);
  run_cmd->add_option("-n,--answers", c.max_answers, "Stop after this many answers (0: all)");
  handlers[run_cmd] = cmd_run;

  auto* trace_cmd = app.add_subcommand("trace", "Print every transition of a run");
  with_file(trace_cmd);
  with_goal(trace_cmd);
  common(trace_cmd);
  handlers[trace_cmd] = cmd_trace;

  auto* measure_cmd = app.add_subcommand("measure", "Print d, t and the number of answers");
  with_file(measure_cmd);
  with_goal(measure_cmd);
  common(measure_cmd);
  handlers[measure_cmd] = cmd_measure;

  auto* scheme_cmd = app.add_subcommand("scheme", "Build the symbolic scheme of a relation");
  with_file(scheme_cmd);
  common(scheme_cmd);
  scheme_cmd->add_option("--rel", c.rel, "Relation name")->required();
  scheme_cmd->add_option("--grounded", c.grounded, "Comma-separated grounded parameters");
  scheme_cmd->add_option("--dot", c.dot_path, "Also write Graphviz output to this file");
  handlers[scheme_cmd] = cmd_scheme;

  auto* factors_cmd = app.add_subcommand("factors", "Compare measured d and t with the scheme factors");
  with_file(factors_cmd);
  common(factors_cmd);
  factors_cmd->add_option("--rel", c.rel, "Relation name")->required();
  factors_cmd->add_option("--grounded", c.grounded, "Comma-separated grounded parameters")->required();
  factors_cmd->add_option("--sizes", c.sizes, "Sizes: a:b:step, a..b or a,b,c")->required();
  factors_cmd->add_option("--vary", c.vary, "Grounded parameter that takes the size (default: first)");
  factors_cmd->add_option("--value", c.values, "Fixed value NAME=TERM for another grounded parameter");
  factors_cmd->add_option("--kind", c.kind, "Value shape: list or peano")
      ->check(CLI::IsMember({"list", "peano"}))
      ->capture_default_str();
  factors_cmd->add_option("--csv", c.csv_path, "Also write the table to this file");
  factors_cmd->add_option("--band", c.band, "Largest accepted max/min ratio")->capture_default_str();
  handlers[factors_cmd] = cmd_factors;

  auto* bench_cmd = app.add_subcommand("bench", "Run benchmark series");
  bench_cmd->add_option("--program", c.file, "Program file (default: built-in benchmarks)");
  common(bench_cmd);
  bench_cmd->add_option("--suite", c.suite, "Suite id or 'all'")->required();
  bench_cmd->add_option("--sizes", c.sizes, "Sizes: a:b:step, a..b or a,b,c")->required();
  bench_cmd->add_option("--reps", c.reps, "Timed repetitions per size")->capture_default_str();
  bench_cmd->add_option("--csv", c.csv_path, "Also write the series to this file");
  bench_cmd->add_flag("--fit", c.fit, "Append log-log slope fits");
  bench_cmd->add_option("--seed", c.seed, "Draw list elements at random with this seed");
  handlers[bench_cmd] = cmd_bench;

  auto* check_cmd = app.add_subcommand("check", "Validate DNF, groundness and answer uniqueness");
  with_file(check_cmd);
  with_goal(check_cmd);
  common(check_cmd);
  handlers[check_cmd] = cmd_check;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  for (auto& [sub, handler] : handlers) {
    if (!sub->parsed()) continue;
    try {
      return handler(c, out, err);
    } catch (const UsageError& e) {
      err << "error: " << e.what() << '\n';
      return 2;
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return 1;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return 2;
}

}  // namespace mkcost
