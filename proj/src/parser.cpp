#include "tml/parser.hpp"

#include <cctype>

#include "tml/error.hpp"

namespace tml {

namespace {

class Parser {
 public:
  Parser(std::string_view text, ParseMode mode) : s_(text), mode_(mode) {}

  Formula run() {
    Formula f = iff();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    if (mode_ == ParseMode::TwoVar) {
      for (const auto& v : variables(f))
        if (v != "x" && v != "y") throw VariableLimitExceeded("variable '" + v + "' outside {x, y}");
    }
    signature(f);
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) != tok) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string peek_ident() {
    skip();
    std::size_t p = pos_;
    if (p >= s_.size() || !ident_start(s_[p])) return {};
    while (p < s_.size() && ident_char(s_[p])) ++p;
    return std::string(s_.substr(pos_, p - pos_));
  }

  std::string ident() {
    std::string id = peek_ident();
    if (id.empty()) fail("expected identifier");
    pos_ += id.size();
    return id;
  }

  Formula iff() {
    Formula a = imp();
    while (eat("<->")) {
      Formula b = imp();
      a = Formula::conj(Formula::disj(Formula::neg(a), b), Formula::disj(Formula::neg(b), a));
    }
    return a;
  }

  Formula imp() {
    Formula a = disj();
    skip();
    if (s_.substr(pos_, 2) == "->") {
      pos_ += 2;
      return Formula::disj(Formula::neg(a), imp());
    }
    return a;
  }

  Formula disj() {
    Formula a = conj();
    while (eat("|")) a = Formula::disj(a, conj());
    return a;
  }

  Formula conj() {
    Formula a = unary();
    while (eat("&")) a = Formula::conj(a, unary());
    return a;
  }

  Formula unary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '!') {
      ++pos_;
      return Formula::neg(unary());
    }
    if (c == '[') {
      ++pos_;
      Var v = ident();
      expect("]");
      return Formula::box(v, unary());
    }
    if (c == '<' && s_.substr(pos_, 3) != "<->") {
      ++pos_;
      Var v = ident();
      expect(">");
      return Formula::dia(v, unary());
    }
    std::string id = peek_ident();
    if (id == "forall" || id == "exists") {
      pos_ += id.size();
      Var v = ident();
      expect(".");
      Formula body = unary();
      return id == "forall" ? Formula::forall(v, body) : Formula::exists(v, body);
    }
    return atom();
  }

  Formula atom() {
    skip();
    if (eat("(")) {
      Formula f = iff();
      expect(")");
      return f;
    }
    std::string id = ident();
    if (id == "true") return Formula::top();
    if (id == "false") return Formula::bot();
    std::vector<Var> args;
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      args.push_back(ident());
      while (eat(",")) args.push_back(ident());
      expect(")");
    }
    return Formula::atom(id, std::move(args));
  }

  std::string_view s_;
  ParseMode mode_;
  std::size_t pos_ = 0;
};

// Precedence levels used when printing: 0 = or, 1 = and, 2 = unary.
int level(const Formula& f) {
  if (f.is(Kind::Or)) return 0;
  if (f.is(Kind::And)) return 1;
  return 2;
}

void render(const Formula& f, std::string& out);

void render_at(const Formula& f, int min_level, std::string& out) {
  if (level(f) < min_level) {
    out += '(';
    render(f, out);
    out += ')';
  } else {
    render(f, out);
  }
}

void render(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Kind::Atom:
      out += f.name();
      if (f.arity() > 0) {
        out += '(';
        for (std::size_t i = 0; i < f.arity(); ++i) {
          if (i) out += ',';
          out += f.args()[i];
        }
        out += ')';
      }
      return;
    case Kind::Top: out += "true"; return;
    case Kind::Bot: out += "false"; return;
    case Kind::Not:
      out += '!';
      render_at(f.child(), 2, out);
      return;
    case Kind::And:
      render_at(f.lhs(), 1, out);
      out += " & ";
      render_at(f.rhs(), 2, out);
      return;
    case Kind::Or:
      render_at(f.lhs(), 0, out);
      out += " | ";
      render_at(f.rhs(), 1, out);
      return;
    case Kind::Forall:
    case Kind::Exists:
      out += f.is(Kind::Forall) ? "forall " : "exists ";
      out += f.name();
      out += ". ";
      render_at(f.child(), 2, out);
      return;
    case Kind::Box:
    case Kind::Dia:
      out += f.is(Kind::Box) ? "[" : "<";
      out += f.name();
      out += f.is(Kind::Box) ? "] " : "> ";
      render_at(f.child(), 2, out);
      return;
  }
}

}  // namespace

Formula parse_formula(std::string_view text, ParseMode mode) { return Parser(text, mode).run(); }

std::string render_formula(const Formula& f) {
  std::string out;
  render(f, out);
  return out;
}

}  // namespace tml
