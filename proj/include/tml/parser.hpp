// Concrete text syntax for formulas.
//
//   formula := iff
//   iff     := imp ("<->" imp)*
//   imp     := or ("->" imp)?
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := ("forall"|"exists") VAR "." unary | "!" unary
//            | "[" VAR "]" unary | "<" VAR ">" unary | atom
//   atom    := "true" | "false" | IDENT | IDENT "(" VAR ("," VAR)* ")" | "(" formula ")"
//
// A quantifier scopes over a single unary operand, so "forall x. A & B" is
// (forall x. A) & B.  Write "forall x. (A & B)" for the wide reading.

#pragma once

#include <string>
#include <string_view>

#include "tml/formula.hpp"

namespace tml {

enum class ParseMode { TwoVar, Full };

Formula parse_formula(std::string_view text, ParseMode mode = ParseMode::TwoVar);

std::string render_formula(const Formula& f);

}  // namespace tml
