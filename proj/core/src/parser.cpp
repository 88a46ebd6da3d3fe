#include "chcadt/parser.hpp"

#include <cctype>
#include <map>

namespace chcadt {

namespace {

enum class Tok : uint8_t { Ident, Var, Int, Punct, Eof };

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  long long value = 0;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(tok_.pos, msg);
  }

 private:
  void advance() {
    skip_space();
    tok_.pos = {line_, col_};
    if (at_ >= text_.size()) {
      tok_ = {Tok::Eof, "", 0, tok_.pos};
      return;
    }
    char c = text_[at_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = at_;
      while (at_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[at_])))
        bump();
      tok_.kind = Tok::Int;
      tok_.text = text_.substr(start, at_ - start);
      tok_.value = std::stoll(tok_.text);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = at_;
      while (at_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[at_])) ||
              text_[at_] == '_'))
        bump();
      tok_.text = text_.substr(start, at_ - start);
      tok_.kind = (std::isupper(static_cast<unsigned char>(c)) || c == '_')
                      ? Tok::Var
                      : Tok::Ident;
      return;
    }
    for (const char* p : {":-", "=\\=", "=<", ">="}) {
      size_t n = std::char_traits<char>::length(p);
      if (text_.compare(at_, n, p) == 0) {
        tok_ = {Tok::Punct, p, 0, tok_.pos};
        for (size_t i = 0; i < n; ++i) bump();
        return;
      }
    }
    static const std::string singles = ".,()[]|/=<>+-*";
    if (singles.find(c) != std::string::npos) {
      tok_ = {Tok::Punct, std::string(1, c), 0, tok_.pos};
      bump();
      return;
    }
    throw ParseError(tok_.pos, std::string("unexpected character '") + c + "'");
  }

  void skip_space() {
    for (;;) {
      while (at_ < text_.size() &&
             std::isspace(static_cast<unsigned char>(text_[at_])))
        bump();
      if (at_ < text_.size() && text_[at_] == '%') {
        while (at_ < text_.size() && text_[at_] != '\n') bump();
        continue;
      }
      break;
    }
  }

  void bump() {
    if (text_[at_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++at_;
  }

  const std::string& text_;
  size_t at_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  Program run() {
    while (lex_.peek().kind != Tok::Eof) {
      if (is_punct(":-"))
        directive();
      else
        clause();
    }
    return std::move(prog_);
  }

 private:
  bool is_punct(const std::string& p) const {
    return lex_.peek().kind == Tok::Punct && lex_.peek().text == p;
  }

  Token expect_punct(const std::string& p) {
    if (!is_punct(p)) lex_.fail("expected '" + p + "'");
    return lex_.take();
  }

  Token expect_ident(const std::string& what) {
    if (lex_.peek().kind != Tok::Ident) lex_.fail("expected " + what);
    return lex_.take();
  }

  Type parse_type() {
    Token t = expect_ident("a type name");
    if (t.text == "int") return Type::integer();
    if (t.text == "bool") return Type::boolean();
    if (auto adt = prog_.ctx.sig.find_adt(t.text)) return Type::adt_of(*adt);
    throw ParseError(t.pos, "unknown type '" + t.text + "'");
  }

  void directive() {
    lex_.take();  // ":-"
    Token kw = expect_ident("a directive keyword");
    if (kw.text == "adt") {
      Token name = expect_ident("an ADT name");
      int32_t adt = prog_.ctx.sig.add_adt(name.text);
      expect_punct("=");
      for (;;) {
        Token ctor = expect_ident("a constructor name");
        std::vector<Type> args;
        if (is_punct("(")) {
          lex_.take();
          for (;;) {
            args.push_back(parse_type());
            if (is_punct(")")) break;
            expect_punct(",");
          }
          lex_.take();
        }
        prog_.ctx.sig.add_constructor(adt, ctor.text, std::move(args));
        if (!is_punct("|")) break;
        lex_.take();
      }
      expect_punct(".");
    } else if (kw.text == "pred") {
      Token name = expect_ident("a predicate name");
      PredDecl decl;
      decl.name = name.text;
      if (is_punct("(")) {
        lex_.take();
        for (;;) {
          decl.arg_types.push_back(parse_type());
          if (is_punct(")")) break;
          expect_punct(",");
        }
        lex_.take();
      }
      decl.modes.assign(decl.arg_types.size(), Mode::In);
      try {
        prog_.ctx.sig.add_pred(std::move(decl));
      } catch (const Error& e) {
        throw ParseError(name.pos, e.what());
      }
      expect_punct(".");
    } else if (kw.text == "mode") {
      Token name = expect_ident("a predicate name");
      int32_t pred = lookup_pred(name);
      std::vector<Mode> modes;
      if (is_punct("(")) {
        lex_.take();
        for (;;) {
          Token m = expect_ident("'in' or 'out'");
          if (m.text == "in")
            modes.push_back(Mode::In);
          else if (m.text == "out")
            modes.push_back(Mode::Out);
          else
            throw ParseError(m.pos, "expected 'in' or 'out'");
          if (is_punct(")")) break;
          expect_punct(",");
        }
        lex_.take();
      }
      if (modes.size() != prog_.ctx.sig.pred(pred).arity())
        throw ParseError(name.pos,
                         "mode arity mismatch for '" + name.text + "'");
      prog_.ctx.sig.pred(pred).modes = std::move(modes);
      expect_punct(".");
    } else if (kw.text == "total" || kw.text == "functional" ||
               kw.text == "total_functional") {
      Token name = expect_ident("a predicate name");
      int32_t pred = lookup_pred(name);
      expect_punct("/");
      Token n = lex_.take();
      if (n.kind != Tok::Int ||
          static_cast<size_t>(n.value) != prog_.ctx.sig.pred(pred).arity())
        throw ParseError(n.pos, "arity mismatch for '" + name.text + "'");
      if (kw.text != "functional") prog_.ctx.sig.pred(pred).total = true;
      if (kw.text != "total") prog_.ctx.sig.pred(pred).functional = true;
      expect_punct(".");
    } else {
      throw ParseError(kw.pos, "unknown directive '" + kw.text + "'");
    }
  }

  int32_t lookup_pred(const Token& name) {
    auto p = prog_.ctx.sig.find_pred(name.text);
    if (!p) throw ParseError(name.pos, "undeclared predicate '" + name.text + "'");
    return *p;
  }

  int32_t clause_var(const Token& tok, Type type) {
    if (tok.text == "_") return prog_.ctx.vars.make("_", type);
    auto it = clause_vars_.find(tok.text);
    if (it != clause_vars_.end()) {
      if (prog_.ctx.vars.type(it->second) != type)
        throw ParseError(tok.pos,
                         "variable '" + tok.text + "' used at two types");
      return it->second;
    }
    int32_t v = prog_.ctx.vars.make(tok.text, type);
    clause_vars_[tok.text] = v;
    return v;
  }

  Term parse_term(Type expected) {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Var: {
        Token v = lex_.take();
        return Term::var(clause_var(v, expected), expected);
      }
      case Tok::Int: {
        Token v = lex_.take();
        if (expected != Type::integer())
          throw ParseError(v.pos, "integer in a non-int position");
        return Term::int_const(v.value);
      }
      case Tok::Punct:
        if (t.text == "-") {
          Token minus = lex_.take();
          if (lex_.peek().kind != Tok::Int)
            throw ParseError(minus.pos, "expected an integer after '-'");
          Token v = lex_.take();
          if (expected != Type::integer())
            throw ParseError(v.pos, "integer in a non-int position");
          return Term::int_const(-v.value);
        }
        if (t.text == "[") return parse_list(expected);
        lex_.fail("expected a term");
      case Tok::Ident: {
        Token name = lex_.take();
        if (name.text == "true" || name.text == "false") {
          if (expected != Type::boolean())
            throw ParseError(name.pos, "boolean in a non-bool position");
          return Term::bool_const(name.text == "true");
        }
        auto ctor = prog_.ctx.sig.find_constructor(name.text);
        if (!ctor)
          throw ParseError(name.pos, "unknown constructor '" + name.text + "'");
        auto [adt, ci] = *ctor;
        if (expected != Type::adt_of(adt))
          throw ParseError(name.pos, "constructor '" + name.text +
                                         "' used at the wrong type");
        const Constructor& decl = prog_.ctx.sig.constructor(adt, ci);
        std::vector<Term> args;
        if (!decl.args.empty()) {
          expect_punct("(");
          for (const Type& at : decl.args) {
            if (!args.empty()) expect_punct(",");
            args.push_back(parse_term(at));
          }
          expect_punct(")");
        }
        return Term::ctor(adt, ci, std::move(args));
      }
      default:
        lex_.fail("expected a term");
    }
  }

  // [], [X, Y], [X | Xs] over the ADT named "list".
  Term parse_list(Type expected) {
    Token open = expect_punct("[");
    auto adt = prog_.ctx.sig.find_adt("list");
    if (!adt || expected != Type::adt_of(*adt))
      throw ParseError(open.pos, "list syntax needs a 'list' position");
    const AdtDecl& decl = prog_.ctx.sig.adt(*adt);
    int32_t nil = -1, cons = -1;
    for (size_t i = 0; i < decl.ctors.size(); ++i) {
      if (decl.ctors[i].args.empty()) nil = static_cast<int32_t>(i);
      if (decl.ctors[i].args.size() == 2 &&
          decl.ctors[i].args[1] == expected)
        cons = static_cast<int32_t>(i);
    }
    if (nil < 0 || cons < 0)
      throw ParseError(open.pos,
                       "'list' lacks empty/cons constructors for [] syntax");
    Type elem = decl.ctors[cons].args[0];

    std::vector<Term> items;
    std::optional<Term> tail;
    if (!is_punct("]")) {
      for (;;) {
        items.push_back(parse_term(elem));
        if (is_punct(",")) {
          lex_.take();
          continue;
        }
        if (is_punct("|")) {
          lex_.take();
          tail = parse_term(expected);
        }
        break;
      }
    }
    expect_punct("]");
    Term acc = tail ? *tail : Term::ctor(*adt, nil, {});
    for (auto it = items.rbegin(); it != items.rend(); ++it)
      acc = Term::ctor(*adt, cons, {*it, acc});
    return acc;
  }

  Atom parse_atom(const Token& name) {
    int32_t pred = lookup_pred(name);
    const PredDecl& decl = prog_.ctx.sig.pred(pred);
    Atom a;
    a.pred = pred;
    if (is_punct("(")) {
      lex_.take();
      for (const Type& at : decl.arg_types) {
        if (!a.args.empty()) expect_punct(",");
        a.args.push_back(parse_term(at));
      }
      expect_punct(")");
    }
    if (a.args.size() != decl.arity())
      throw ParseError(name.pos, "arity mismatch for '" + name.text + "'");
    return a;
  }

  LinearExpr parse_expr() {
    LinearExpr e = parse_mul();
    while (is_punct("+") || is_punct("-")) {
      bool plus = lex_.take().text == "+";
      LinearExpr rhs = parse_mul();
      if (plus)
        e += rhs;
      else
        e -= rhs;
    }
    return e;
  }

  LinearExpr parse_mul() {
    Token at = lex_.peek();
    LinearExpr e = parse_factor();
    while (is_punct("*")) {
      lex_.take();
      LinearExpr rhs = parse_factor();
      if (rhs.coeffs.empty()) {
        e *= rhs.constant;
      } else if (e.coeffs.empty()) {
        rhs *= e.constant;
        e = std::move(rhs);
      } else {
        throw ParseError(at.pos, "nonlinear product");
      }
    }
    return e;
  }

  LinearExpr parse_factor() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Int) return LinearExpr::literal(lex_.take().value);
    if (t.kind == Tok::Var) {
      Token v = lex_.take();
      return LinearExpr::variable(clause_var(v, Type::integer()));
    }
    if (t.kind == Tok::Punct && t.text == "-") {
      lex_.take();
      LinearExpr e = parse_factor();
      e *= -1;
      return e;
    }
    if (t.kind == Tok::Punct && t.text == "(") {
      lex_.take();
      LinearExpr e = parse_expr();
      expect_punct(")");
      return e;
    }
    lex_.fail("expected an arithmetic term");
  }

  std::optional<CmpOp> peek_relop() {
    if (lex_.peek().kind != Tok::Punct) return std::nullopt;
    const std::string& p = lex_.peek().text;
    if (p == "=") return CmpOp::Eq;
    if (p == "=\\=") return CmpOp::Ne;
    if (p == "<") return CmpOp::Lt;
    if (p == "=<") return CmpOp::Le;
    if (p == ">") return CmpOp::Gt;
    if (p == ">=") return CmpOp::Ge;
    return std::nullopt;
  }

  void parse_conjunct(Clause& c) {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Ident && t.text == "not") {
      Token kw = lex_.take();
      expect_punct("(");
      if (lex_.peek().kind != Tok::Var)
        throw ParseError(kw.pos, "expected a boolean variable after not(");
      Token v = lex_.take();
      c.constraint.add(BoolLit{clause_var(v, Type::boolean()), false});
      expect_punct(")");
      return;
    }
    if (t.kind == Tok::Ident) {
      Token name = lex_.take();
      c.body.push_back(parse_atom(name));
      return;
    }
    if (t.kind == Tok::Var) {
      Token v = lex_.take();
      if (is_punct(",") || is_punct(".")) {
        c.constraint.add(BoolLit{clause_var(v, Type::boolean()), true});
        return;
      }
      LinearExpr lhs = LinearExpr::variable(clause_var(v, Type::integer()));
      while (is_punct("+") || is_punct("-") || is_punct("*")) {
        std::string op = lex_.take().text;
        if (op == "*") {
          LinearExpr rhs = parse_factor();
          if (!rhs.coeffs.empty()) throw ParseError(v.pos, "nonlinear product");
          lhs *= rhs.constant;
        } else {
          LinearExpr rhs = parse_mul();
          if (op == "+")
            lhs += rhs;
          else
            lhs -= rhs;
        }
      }
      finish_relation(c, std::move(lhs), v.pos);
      return;
    }
    LinearExpr lhs = parse_expr();
    finish_relation(c, std::move(lhs), t.pos);
  }

  void finish_relation(Clause& c, LinearExpr lhs, SourcePos pos) {
    auto op = peek_relop();
    if (!op) throw ParseError(pos, "expected a relational operator");
    lex_.take();
    LinearExpr rhs = parse_expr();
    c.constraint.add(make_atom(*op, lhs, rhs));
  }

  void clause() {
    clause_vars_.clear();
    Token first = lex_.peek();
    Clause c;
    if (first.kind == Tok::Ident && first.text == "false") {
      lex_.take();
    } else if (first.kind == Tok::Ident) {
      Token name = lex_.take();
      c.head = parse_atom(name);
    } else {
      lex_.fail("expected a clause head");
    }
    if (is_punct(":-")) {
      lex_.take();
      for (;;) {
        parse_conjunct(c);
        if (!is_punct(",")) break;
        lex_.take();
      }
    }
    expect_punct(".");
    try {
      normalize_atoms(c, prog_.ctx);
      simplify_constraint(c);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(first.pos, e.what());
    }
    int32_t id = prog_.store.add(std::move(c));
    if (prog_.store.get(id).is_goal())
      prog_.goals.push_back(id);
    else
      prog_.definite.push_back(id);
  }

  Lexer lex_;
  Program prog_;
  std::map<std::string, int32_t> clause_vars_;
};

}  // namespace

Program parse_program(const std::string& text) { return Parser(text).run(); }

}  // namespace chcadt
