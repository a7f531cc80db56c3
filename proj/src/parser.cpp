#include "mkcost/parser.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <map>

#include "mkcost/dnf.hpp"
#include "mkcost/error.hpp"

namespace mkcost {

namespace {

enum class Tok { Ident, Ctor, LogicVar, Rel, Fresh, LParen, RParen, LBrace, RBrace, Comma, Bar, Amp, EqEq, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

const char* describe(Tok k) {
  switch (k) {
    case Tok::Ident: return "identifier";
    case Tok::Ctor: return "constructor";
    case Tok::LogicVar: return "logic variable";
    case Tok::Rel: return "'rel'";
    case Tok::Fresh: return "'fresh'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Bar: return "'|'";
    case Tok::Amp: return "'&'";
    case Tok::EqEq: return "'=='";
    case Tok::End: return "end of input";
  }
  return "?";
}

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, cl = col;
    auto single = [&](Tok k) {
      out.push_back({k, std::string(1, c), l, cl});
      advance(1);
    };
    switch (c) {
      case '(': single(Tok::LParen); continue;
      case ')': single(Tok::RParen); continue;
      case '{': single(Tok::LBrace); continue;
      case '}': single(Tok::RBrace); continue;
      case ',': single(Tok::Comma); continue;
      case '|': single(Tok::Bar); continue;
      case '&': single(Tok::Amp); continue;
      default: break;
    }
    if (c == '=') {
      if (i + 1 < src.size() && src[i + 1] == '=') {
        out.push_back({Tok::EqEq, "==", l, cl});
        advance(2);
        continue;
      }
      throw ParseError(l, cl, "expected '=='");
    }
    if (c == '_' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
      std::size_t j = i + 1;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && ident_char(src[j])) throw ParseError(l, cl, "malformed logic variable");
      out.push_back({Tok::LogicVar, std::string(src.substr(i + 1, j - i - 1)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      Tok k = std::isupper(static_cast<unsigned char>(c)) ? Tok::Ctor : Tok::Ident;
      if (word == "rel") k = Tok::Rel;
      if (word == "fresh") k = Tok::Fresh;
      out.push_back({k, std::move(word), l, cl});
      advance(j - i);
      continue;
    }
    throw ParseError(l, cl, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct CallSite {
  std::string name;
  std::size_t arity;
  int line;
  int col;
};

// Free identifiers of a top-level goal get placeholder indices above this
// bound until explicit `_N` variables are known.
constexpr VarIndex kProvisional = std::numeric_limits<VarIndex>::max() / 2;

class Parser {
 public:
  Parser(std::vector<Token> toks, std::map<SymbolId, std::size_t> ctor_arity)
      : toks_(std::move(toks)), ctor_arity_(std::move(ctor_arity)) {}

  Program program(const ParseOptions& opts) {
    Program prog;
    while (peek().kind == Tok::Rel) {
      const Token& kw = next();
      Relation r = reldef();
      if (prog.find(r.name)) throw ParseError(kw.line, kw.col, "duplicate relation '" + r.name + "'");
      if (opts.require_dnf) {
        if (auto check = validate_dnf(r.body); !check) {
          throw ParseError(kw.line, kw.col, "relation '" + r.name + "' is not in DNF: " + check.diagnostic);
        }
      }
      prog.add(std::move(r));
    }
    if (peek().kind != Tok::End) prog.set_top(top_goal());
    expect(Tok::End);
    for (const auto& site : calls_) {
      const Relation* r = prog.find(site.name);
      if (!r) throw ParseError(site.line, site.col, "unknown relation '" + site.name + "'");
      if (r->arity() != site.arity) throw arity_error(site, r->arity());
    }
    for (const auto& [sym, n] : ctor_arity_) prog.record_arity(sym, n);
    return prog;
  }

  Query query(const Program& prog) {
    Query q = top_goal();
    expect(Tok::End);
    for (const auto& site : calls_) {
      const Relation* r = prog.find(site.name);
      if (!r) throw ParseError(site.line, site.col, "unknown relation '" + site.name + "'");
      if (r->arity() != site.arity) throw arity_error(site, r->arity());
    }
    return q;
  }

  Term single_term() {
    top_level_ = true;
    Term t = term();
    expect(Tok::End);
    if (!free_names_.empty()) {
      throw ParseError(1, 1, "named variables are not allowed here; use _N");
    }
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  const Token& expect(Tok k) {
    const Token& t = peek();
    if (t.kind != k) {
      throw ParseError(t.line, t.col,
                       std::string("expected ") + describe(k) + ", found " + describe(t.kind) +
                           (t.text.empty() ? "" : " '" + t.text + "'"));
    }
    return next();
  }

  static ParseError arity_error(const CallSite& site, std::size_t expected) {
    return ParseError(site.line, site.col,
                      "arity mismatch: '" + site.name + "' expects " + std::to_string(expected) +
                          " arguments, got " + std::to_string(site.arity));
  }

  Relation reldef() {
    const Token& name = expect(Tok::Ident);
    std::vector<std::string> params;
    expect(Tok::LParen);
    if (peek().kind != Tok::RParen) {
      for (;;) {
        const Token& p = expect(Tok::Ident);
        for (const auto& q : params) {
          if (q == p.text) throw ParseError(p.line, p.col, "duplicate parameter '" + p.text + "'");
        }
        params.push_back(p.text);
        if (peek().kind != Tok::Comma) break;
        next();
      }
    }
    expect(Tok::RParen);
    expect(Tok::LBrace);
    top_level_ = false;
    scope_ = params;
    Goal body = goal();
    scope_.clear();
    expect(Tok::RBrace);
    return Relation{name.text, Symbols::intern(name.text), std::move(params), std::move(body)};
  }

  Query top_goal() {
    top_level_ = true;
    scope_.clear();
    free_names_.clear();
    explicit_vars_.clear();
    Goal g = goal();
    // Final indices: first-occurrence order, skipping explicit `_N`.
    std::map<VarIndex, VarIndex> pi;
    Query q{g, {}};
    VarIndex candidate = 1;
    for (std::size_t k = 0; k < free_names_.size(); ++k) {
      while (explicit_vars_.count(candidate)) ++candidate;
      pi.emplace(kProvisional + static_cast<VarIndex>(k), candidate);
      q.vars.emplace_back(free_names_[k], candidate);
      ++candidate;
    }
    if (!pi.empty()) q.goal = g.rename(pi);
    return q;
  }

  static void flatten(const Goal& g, Goal::Kind op, std::vector<Goal>& out) {
    if (g.kind() == op) {
      flatten(g.left(), op, out);
      flatten(g.right(), op, out);
    } else {
      out.push_back(g);
    }
  }

  static Goal fold(std::vector<Goal>& items, Goal::Kind op) {
    Goal acc = items.front();
    for (std::size_t i = 1; i < items.size(); ++i) {
      acc = op == Goal::Kind::Conj ? Goal::conj(acc, items[i]) : Goal::disj(acc, items[i]);
    }
    return acc;
  }

  Goal goal() {
    std::vector<Goal> items;
    flatten(conj(), Goal::Kind::Disj, items);
    while (peek().kind == Tok::Bar) {
      next();
      flatten(conj(), Goal::Kind::Disj, items);
    }
    return fold(items, Goal::Kind::Disj);
  }

  Goal conj() {
    std::vector<Goal> items;
    flatten(base(), Goal::Kind::Conj, items);
    while (peek().kind == Tok::Amp) {
      next();
      flatten(base(), Goal::Kind::Conj, items);
    }
    return fold(items, Goal::Kind::Conj);
  }

  Goal base() {
    const Token& t = peek();
    if (t.kind == Tok::Fresh) {
      next();
      std::vector<std::string> names;
      for (;;) {
        names.push_back(expect(Tok::Ident).text);
        if (peek().kind != Tok::Comma) break;
        next();
      }
      expect(Tok::LBrace);
      std::size_t saved = scope_.size();
      for (const auto& n : names) scope_.push_back(n);
      Goal body = goal();
      expect(Tok::RBrace);
      for (std::size_t k = names.size(); k-- > 0;) {
        body = Goal::fresh(static_cast<std::uint32_t>(saved + k), names[k], body);
      }
      scope_.resize(saved);
      return body;
    }
    if (t.kind == Tok::LParen) {
      next();
      Goal g = goal();
      expect(Tok::RParen);
      return g;
    }
    if (t.kind == Tok::Ident && peek(1).kind == Tok::LParen) {
      const Token& name = next();
      next();
      std::vector<Term> args;
      if (peek().kind != Tok::RParen) args = terms();
      expect(Tok::RParen);
      calls_.push_back({name.text, args.size(), name.line, name.col});
      return Goal::invoke(Symbols::intern(name.text), std::move(args));
    }
    Term lhs = term();
    expect(Tok::EqEq);
    Term rhs = term();
    return Goal::unify(std::move(lhs), std::move(rhs));
  }

  std::vector<Term> terms() {
    std::vector<Term> out;
    out.push_back(term());
    while (peek().kind == Tok::Comma) {
      next();
      out.push_back(term());
    }
    return out;
  }

  Term term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: {
        next();
        return variable(t);
      }
      case Tok::LogicVar: {
        next();
        if (!top_level_) throw ParseError(t.line, t.col, "relation body must be closed: _" + t.text);
        VarIndex idx = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), idx);
        if (ec != std::errc() || idx == 0 || idx >= kProvisional) {
          throw ParseError(t.line, t.col, "invalid logic variable _" + t.text);
        }
        explicit_vars_.insert(idx);
        return Term::var(idx);
      }
      case Tok::Ctor: {
        next();
        std::vector<Term> args;
        if (peek().kind == Tok::LParen) {
          next();
          if (peek().kind != Tok::RParen) args = terms();
          expect(Tok::RParen);
        }
        SymbolId sym = Symbols::intern(t.text);
        auto [it, inserted] = ctor_arity_.emplace(sym, args.size());
        if (!inserted && it->second != args.size()) {
          throw ParseError(t.line, t.col,
                           "arity mismatch: constructor '" + t.text + "' used with " +
                               std::to_string(args.size()) + " arguments, previously " +
                               std::to_string(it->second));
        }
        return Term::ctor(sym, std::move(args));
      }
      default:
        throw ParseError(t.line, t.col,
                         std::string("expected a term, found ") + describe(t.kind) +
                             (t.text.empty() ? "" : " '" + t.text + "'"));
    }
  }

  Term variable(const Token& t) {
    for (std::size_t k = scope_.size(); k-- > 0;) {
      if (scope_[k] == t.text) return Term::slot(static_cast<std::uint32_t>(k));
    }
    if (!top_level_) throw ParseError(t.line, t.col, "unbound variable '" + t.text + "'");
    for (std::size_t k = 0; k < free_names_.size(); ++k) {
      if (free_names_[k] == t.text) return Term::var(kProvisional + static_cast<VarIndex>(k));
    }
    free_names_.push_back(t.text);
    return Term::var(kProvisional + static_cast<VarIndex>(free_names_.size() - 1));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<SymbolId, std::size_t> ctor_arity_;
  std::vector<CallSite> calls_;
  std::vector<std::string> scope_;
  bool top_level_ = false;
  std::vector<std::string> free_names_;
  VarSet explicit_vars_;
};

}  // namespace

Program parse_program(std::string_view text, const ParseOptions& options) {
  Parser p(lex(text), {});
  return p.program(options);
}

Query parse_query(std::string_view text, const Program& program) {
  Parser p(lex(text), program.constructor_arities());
  return p.query(program);
}

Term parse_term(std::string_view text) {
  Parser p(lex(text), {});
  return p.single_term();
}

}  // namespace mkcost
