#include "mkcost/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "mkcost/error.hpp"

namespace mkcost {

namespace {

using Args = std::vector<std::optional<Term>>;
using Element = std::function<Term()>;

constexpr std::size_t kSecondListLength = 100;
constexpr std::size_t kFixedSummand = 10;
constexpr std::size_t kFixedFactor = 5;

Term list_of(std::size_t n, const Element& element) {
  std::vector<Term> items;
  items.reserve(n);
  for (std::size_t i = 0; i < n; ++i) items.push_back(element());
  return make_list(items);
}

Term succ(const Term& t) { return Term::ctor("S", {t}); }

std::vector<Suite> make_suites() {
  std::vector<Suite> s;
  s.push_back({"appendo", "appendo", "appendo a b ab; a of length n, b of length 100",
               [](std::size_t n, const Element& e) -> Args {
                 return {list_of(n, e), list_of(kSecondListLength, e), std::nullopt};
               }});
  s.push_back({"appendo_opt", "appendo_opt", "appendo_opt a b ab; a of length n, b of length 100",
               [](std::size_t n, const Element& e) -> Args {
                 return {list_of(n, e), list_of(kSecondListLength, e), std::nullopt};
               }});
  s.push_back({"appendo_opt_bwd", "appendo_opt", "appendo_opt a b ab; ab of length n",
               [](std::size_t n, const Element& e) -> Args { return {std::nullopt, std::nullopt, list_of(n, e)}; }});
  s.push_back({"reverso", "reverso", "reverso a r; a of length n",
               [](std::size_t n, const Element& e) -> Args { return {list_of(n, e), std::nullopt}; }});
  s.push_back({"reverso_bwd", "reverso_bwd", "reverso_bwd a r; r of length n",
               [](std::size_t n, const Element& e) -> Args { return {std::nullopt, list_of(n, e)}; }});
  s.push_back({"pluso_nm", "pluso", "pluso n m r; |n| = n, |m| = 10",
               [](std::size_t n, const Element&) -> Args {
                 return {make_peano(n), make_peano(kFixedSummand), std::nullopt};
               }});
  s.push_back({"pluso_nr", "pluso", "pluso n m r; |n| = n, |r| = 2n",
               [](std::size_t n, const Element&) -> Args {
                 return {make_peano(n), std::nullopt, make_peano(2 * n)};
               }});
  s.push_back({"pluso_r", "pluso", "pluso n m r; |r| = n",
               [](std::size_t n, const Element&) -> Args { return {std::nullopt, std::nullopt, make_peano(n)}; }});
  s.push_back({"multo_nm", "multo", "multo n m r; |n| = n, |m| = 5",
               [](std::size_t n, const Element&) -> Args {
                 return {make_peano(n), make_peano(kFixedFactor), std::nullopt};
               }});
  s.push_back({"multo_ssr", "multo_bwd", "multo_bwd S(n) S(m) r; |r| = n",
               [](std::size_t n, const Element&) -> Args {
                 return {succ(Term::var(1)), succ(Term::var(2)), make_peano(n)};
               }});
  return s;
}

std::uint64_t now_ns() {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now().time_since_epoch())
          .count());
}

}  // namespace

const std::vector<Suite>& builtin_suites() {
  static const std::vector<Suite> suites = make_suites();
  return suites;
}

const Suite& find_suite(const std::string& id) {
  for (const auto& s : builtin_suites()) {
    if (s.id == id) return s;
  }
  throw BenchError("unknown suite '" + id + "'");
}

Goal suite_goal(const Suite& suite, std::size_t size, const Element& element) {
  Args args = suite.args(size, element);
  VarIndex next = 1;
  for (const auto& a : args) {
    if (a) next = std::max(next, a->max_var() + 1);
  }
  std::vector<Term> terms;
  for (auto& a : args) terms.push_back(a ? *a : Term::var(next++));
  return Goal::invoke(Symbols::intern(suite.relation), std::move(terms));
}

std::vector<SeriesPoint> run_series(const Suite& suite, const std::vector<std::size_t>& sizes, const Program& program,
                                    const BenchOptions& options) {
  if (!program.find(suite.relation)) throw BenchError("program has no relation '" + suite.relation + "'");
  std::mt19937_64 rng(options.seed.value_or(0));
  static const char* alphabet[] = {"Zero", "One", "Two", "Three"};
  Element element = [&]() -> Term {
    if (!options.seed) return Term::ctor("Zero");
    return Term::ctor(alphabet[std::uniform_int_distribution<int>(0, 3)(rng)]);
  };

  std::vector<Goal> goals;
  for (std::size_t n : sizes) goals.push_back(suite_goal(suite, n, element));

  RunOptions run_options;
  run_options.step_limit = options.step_limit;
  run_options.unify = options.unify;

  std::vector<SeriesPoint> points(sizes.size());
  std::vector<std::vector<std::uint64_t>> times(sizes.size());
  unsigned reps = std::max(1u, options.reps);
  for (unsigned rep = 0; rep < reps; ++rep) {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      State start = init(goals[i]);
      std::uint64_t t0 = now_ns();
      TraceStats stats = run(start, program, run_options);
      std::uint64_t t1 = now_ns();
      if (stats.truncated) {
        throw BenchError("suite " + suite.id + " at size " + std::to_string(sizes[i]) + " exceeded " +
                         std::to_string(options.step_limit) + " steps");
      }
      SeriesPoint p{sizes[i], stats.d, stats.t, 0, stats.answers.size()};
      if (rep == 0) {
        points[i] = p;
      } else if (points[i].d != p.d || points[i].t != p.t || points[i].answers != p.answers) {
        throw BenchError("suite " + suite.id + " is not deterministic at size " + std::to_string(sizes[i]));
      }
      times[i].push_back(t1 - t0);
    }
  }
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    auto& v = times[i];
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    points[i].wall_ns = v[v.size() / 2];
  }
  return points;
}

const char* field_name(Field f) {
  switch (f) {
    case Field::D: return "d";
    case Field::T: return "t";
    case Field::Wall: return "wall_ns";
  }
  return "?";
}

FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw BenchError("fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  double vx = sxx - sx * sx / n;
  double vy = syy - sy * sy / n;
  double cxy = sxy - sx * sy / n;
  if (vx <= 0) throw BenchError("fit needs distinct sizes");
  FitResult r;
  r.slope = cxy / vx;
  r.intercept = (sy - r.slope * sx) / n;
  r.r2 = vy <= 0 ? 1.0 : std::clamp(cxy * cxy / (vx * vy), 0.0, 1.0);
  r.points = x.size();
  return r;
}

FitResult fit_loglog(const std::vector<SeriesPoint>& points, Field field) {
  std::vector<SeriesPoint> sorted = points;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.size < b.size; });
  std::vector<SeriesPoint> usable;
  for (const auto& p : sorted) {
    std::uint64_t v = field == Field::D ? p.d : field == Field::T ? p.t : p.wall_ns;
    if (p.size > 0 && v > 0) usable.push_back(p);
  }
  if (usable.size() < 5) throw BenchError("fit needs at least 5 points with positive values");
  if (usable.back().size < 8 * usable.front().size) throw BenchError("fit needs sizes spanning a factor of 8");
  std::size_t start = usable.size() / 2;
  std::vector<double> x, y;
  for (std::size_t i = start; i < usable.size(); ++i) {
    const auto& p = usable[i];
    x.push_back(static_cast<double>(p.size));
    y.push_back(static_cast<double>(field == Field::D ? p.d : field == Field::T ? p.t : p.wall_ns));
  }
  FitResult r = fit_loglog(x, y);
  r.window_lo = usable[start].size;
  r.window_hi = usable.back().size;
  return r;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw BenchError("correlation needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double cxy = 0, vx = 0, vy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cxy += (x[i] - mx) * (y[i] - my);
    vx += (x[i] - mx) * (x[i] - mx);
    vy += (y[i] - my) * (y[i] - my);
  }
  if (vx <= 0 || vy <= 0) return 0;
  return cxy / std::sqrt(vx * vy);
}

double wall_t_correlation(const std::vector<SeriesPoint>& points) {
  std::vector<double> w, t;
  for (const auto& p : points) {
    w.push_back(static_cast<double>(p.wall_ns));
    t.push_back(static_cast<double>(p.t));
  }
  return pearson(w, t);
}

void emit_csv(std::ostream& os, const std::string& suite, const std::vector<SeriesPoint>& points, bool header) {
  if (header) os << "suite,size,d,t,wall_ns,answers\n";
  for (const auto& p : points) {
    os << suite << ',' << p.size << ',' << p.d << ',' << p.t << ',' << p.wall_ns << ',' << p.answers << '\n';
  }
}

void emit_fit_csv(std::ostream& os, const std::string& suite, Field field, const FitResult& fit, bool header) {
  if (header) os << "suite,field,slope,intercept,r2,window_lo,window_hi\n";
  os << suite << ',' << field_name(field) << ',' << fit.slope << ',' << fit.intercept << ',' << fit.r2 << ','
     << fit.window_lo << ',' << fit.window_hi << '\n';
}

namespace {

std::size_t parse_size(const std::string& s, const std::string& whole) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size() || s.find('-') != std::string::npos) {
    throw BenchError("malformed size list '" + whole + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    std::size_t lo = parse_size(text.substr(0, dots), text);
    std::size_t hi = parse_size(text.substr(dots + 2), text);
    if (hi < lo) throw BenchError("empty size range '" + text + "'");
    for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw BenchError("size range must be start:stop:step, got '" + text + "'");
    std::size_t lo = parse_size(parts[0], text), hi = parse_size(parts[1], text), step = parse_size(parts[2], text);
    if (step == 0 || hi < lo) throw BenchError("empty size range '" + text + "'");
    for (std::size_t n = lo; n <= hi; n += step) out.push_back(n);
    return out;
  }
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(parse_size(part, text));
  if (out.empty()) throw BenchError("empty size list");
  return out;
}

}  // namespace mkcost
