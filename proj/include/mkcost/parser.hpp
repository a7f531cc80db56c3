#pragma once

#include <string_view>

#include "mkcost/error.hpp"
#include "mkcost/program.hpp"

namespace mkcost {

struct ParseOptions {
  /// Reject relation bodies outside disjunctive normal form.
  bool require_dnf = true;
};

/// Parses a program:
///
///     program  := reldef* goal?
///     reldef   := "rel" IDENT "(" params ")" "{" goal "}"
///     goal     := disj
///     disj     := conj ("|" conj)*
///     conj     := base ("&" base)*
///     base     := term "==" term | IDENT "(" terms ")"
///               | "fresh" IDENT ("," IDENT)* "{" goal "}" | "(" goal ")"
///     term     := IDENT | CTOR ("(" terms? ")")? | "_" DIGITS
///
/// Conjunction and disjunction chains, parenthesized or not, are
/// re-associated to the left. Free identifiers of the top-level goal become
/// logic variables in first-occurrence order; `_N` denotes alpha_N directly.
/// Throws ParseError.
Program parse_program(std::string_view text, const ParseOptions& options = {});

/// Parses a goal expression against the relations of `program`.
Query parse_query(std::string_view text, const Program& program);

/// Parses a single term; identifiers are rejected unless `_N`.
Term parse_term(std::string_view text);

}  // namespace mkcost
