// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include <cctype>

#include "qwi/error.hpp"
#include "qwi/schema.hpp"

namespace qwi {

TermAst TermAst::ident(std::string n, SrcPos p) {
  TermAst t;
  t.kind = Kind::Name;
  t.name = std::move(n);
  t.pos = p;
  return t;
}

TermAst TermAst::num(std::uint64_t v, SrcPos p) {
  TermAst t;
  t.kind = Kind::Num;
  t.value = v;
  t.pos = p;
  return t;
}

namespace {

bool termAtomic(const TermAst& t) {
  return t.kind == TermAst::Kind::Name || t.kind == TermAst::Kind::Num || t.kind == TermAst::Kind::Unit;
}

std::string argStr(const TermAst& t) { return termAtomic(t) ? t.str() : "(" + t.str() + ")"; }

}  // namespace

std::string TermAst::str() const {
  switch (kind) {
    case Kind::Name: return name;
    case Kind::Num: return std::to_string(value);
    case Kind::Unit: return "tt";
    case Kind::App: {
      std::string s = name;
      for (const auto& a : args) s += " " + argStr(a);
      return s;
    }
    case Kind::Plus: return argStr(args[0]) + " + " + std::to_string(value);
    case Kind::Compose: return argStr(args[0]) + " ∘ " + argStr(args[1]);
  }
  return "";
}

bool TermAst::mentions(const std::string& v) const {
  if ((kind == Kind::Name || kind == Kind::App) && name == v) return true;
  for (const auto& a : args)
    if (a.mentions(v)) return true;
  return false;
}

TermAst TermAst::subst(const std::string& v, const TermAst& by) const {
  if (kind == Kind::Name && name == v) return by;
  TermAst t = *this;
  for (auto& a : t.args) a = a.subst(v, by);
  if (kind == Kind::Plus) {
    // (e + j) + k folds to e + (j + k); n + k folds to a numeral.
    if (t.args[0].kind == Kind::Plus) {
      t.value += t.args[0].value;
      TermAst inner = t.args[0].args[0];
      t.args[0] = std::move(inner);
    }
    if (t.args[0].kind == Kind::Num) return num(t.args[0].value + t.value, pos);
  }
  if (kind == Kind::App && name == v) {
    // Head replaced: only names and applications can stand in head position.
    if (by.kind == Kind::Name) {
      t.name = by.name;
    } else if (by.kind == Kind::App) {
      std::vector<TermAst> all = by.args;
      all.insert(all.end(), t.args.begin(), t.args.end());
      t.name = by.name;
      t.args = std::move(all);
    }
  }
  return t;
}

TypeAst TypeAst::qref(std::string q, std::vector<TermAst> ix, SrcPos p) {
  TypeAst t;
  t.kind = Kind::QRef;
  t.name = std::move(q);
  t.args = std::move(ix);
  t.pos = p;
  return t;
}

TypeAst TypeAst::cnst(std::string n, std::vector<TermAst> args, SrcPos p) {
  TypeAst t;
  t.kind = Kind::Const;
  t.name = std::move(n);
  t.args = std::move(args);
  t.pos = p;
  return t;
}

TypeAst TypeAst::pi(std::string b, TypeAst dom, TypeAst cod, SrcPos p) {
  TypeAst t;
  t.kind = Kind::Pi;
  t.binder = std::move(b);
  t.left = std::make_shared<const TypeAst>(std::move(dom));
  t.right = std::make_shared<const TypeAst>(std::move(cod));
  t.pos = p;
  return t;
}

TypeAst TypeAst::sigma(std::string b, TypeAst l, TypeAst r, SrcPos p) {
  TypeAst t = pi(std::move(b), std::move(l), std::move(r), p);
  t.kind = Kind::Sigma;
  return t;
}

TypeAst TypeAst::eq(TermAst l, TermAst r, SrcPos p) {
  TypeAst t;
  t.kind = Kind::Eq;
  t.lhs = std::move(l);
  t.rhs = std::move(r);
  t.pos = p;
  return t;
}

TypeAst TypeAst::unit() { return TypeAst{}; }

bool TypeAst::atomic() const {
  return kind == Kind::Unit || ((kind == Kind::QRef || kind == Kind::Const) && args.empty());
}

bool TypeAst::mentionsQ() const {
  if (kind == Kind::QRef) return true;
  return (left && left->mentionsQ()) || (right && right->mentionsQ());
}

bool TypeAst::mentionsVar(const std::string& v) const {
  for (const auto& a : args)
    if (a.mentions(v)) return true;
  if (kind == Kind::Eq) return lhs.mentions(v) || rhs.mentions(v);
  if (kind == Kind::Pi || kind == Kind::Sigma) {
    if (left->mentionsVar(v)) return true;
    return binder != v && right->mentionsVar(v);
  }
  return false;
}

TypeAst TypeAst::substTerm(const std::string& v, const TermAst& by) const {
  TypeAst t = *this;
  for (auto& a : t.args) a = a.subst(v, by);
  if (kind == Kind::Eq) {
    t.lhs = lhs.subst(v, by);
    t.rhs = rhs.subst(v, by);
  }
  if (kind == Kind::Pi || kind == Kind::Sigma) {
    t.left = std::make_shared<const TypeAst>(left->substTerm(v, by));
    if (binder != v) t.right = std::make_shared<const TypeAst>(right->substTerm(v, by));
  }
  return t;
}

TypeAst TypeAst::replaceQ(const TypeAst& by) const {
  if (kind == Kind::QRef) return by;
  if (kind != Kind::Pi && kind != Kind::Sigma) return *this;
  TypeAst t = *this;
  t.left = std::make_shared<const TypeAst>(left->replaceQ(by));
  t.right = std::make_shared<const TypeAst>(right->replaceQ(by));
  return t;
}

namespace {

std::string constName(const std::string& n) {
  if (n == "Nat") return "ℕ";
  return n;
}

std::string headStr(const TypeAst& t) {
  std::string s = t.kind == TypeAst::Kind::Const ? constName(t.name) : t.name;
  for (const auto& a : t.args) s += " " + argStr(a);
  return s;
}

bool dependent(const TypeAst& t) { return !t.binder.empty() && t.right->mentionsVar(t.binder); }

}  // namespace

std::string typeStr(const TypeAst& t) {
  using K = TypeAst::Kind;
  switch (t.kind) {
    case K::Unit: return "𝟙";
    case K::QRef:
    case K::Const: return headStr(t);
    case K::Eq: return t.lhs.str() + " = " + t.rhs.str();
    case K::Pi: {
      if (!dependent(t)) {
        const TypeAst& d = *t.left;
        bool paren = d.kind == K::Pi || d.kind == K::Eq || d.kind == K::Sigma;
        return (paren ? "(" + typeStr(d) + ")" : typeStr(d)) + " → " + typeStr(*t.right);
      }
      // Group ∏_{x y : X} over adjacent dependent binders of equal domain.
      std::string names = t.binder;
      const TypeAst* cur = t.right.get();
      std::string dom = typeStr(*t.left);
      while (cur->kind == K::Pi && dependent(*cur) && typeStr(*cur->left) == dom) {
        names += " " + cur->binder;
        cur = cur->right.get();
      }
      return "∏_{" + names + " : " + dom + "} " + typeStr(*cur);
    }
    case K::Sigma: {
      if (dependent(t)) return "∑_{" + t.binder + " : " + typeStr(*t.left) + "} " + typeStr(*t.right);
      const TypeAst& l = *t.left;
      bool paren = l.kind == K::Pi || l.kind == K::Sigma || l.kind == K::Eq;
      return (paren ? "(" + typeStr(l) + ")" : typeStr(l)) + " × " + typeStr(*t.right);
    }
  }
  return "";
}

std::string TypeAst::str() const { return typeStr(*this); }

std::string ParamDecl::typeText() const {
  switch (kind) {
    case Kind::Set: return "𝓤";
    case Kind::Nat: return "ℕ";
    case Kind::Finite: {
      std::string s = "{";
      for (std::size_t i = 0; i < elements.size(); ++i) s += (i ? "," : "") + elements[i];
      return s + "}";
    }
    case Kind::Other: return type.str();
  }
  return "";
}

const TypeAst& codomain(const TypeAst& t) {
  const TypeAst* cur = &t;
  while (cur->kind == TypeAst::Kind::Pi) cur = cur->right.get();
  return *cur;
}

namespace {

struct Token {
  enum class Kind { Ident, Num, Sym, End };
  Kind kind = Kind::End;
  std::string text;
  SrcPos pos;
  bool lineStart = false;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  bool lineStart = true;
  auto adv = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      // Columns count code points, not bytes.
      if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) ++col;
      ++i;
    }
  };
  static const std::vector<std::pair<std::string, std::string>> syms = {
      {"->", "->"}, {"→", "->"}, {"×", "*"}, {"∘", "."}, {"ℕ", "Nat"}, {"(", "("}, {")", ")"},
      {"{", "{"},   {"}", "}"},  {",", ","}, {":", ":"}, {"=", "="},   {"*", "*"},   {"+", "+"}};
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      lineStart = true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '-') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    Token t;
    t.pos = {line, col};
    t.lineStart = lineStart;
    lineStart = false;
    bool matched = false;
    for (const auto& [lit, norm] : syms) {
      if (s.compare(i, lit.size(), lit) == 0) {
        t.kind = norm == "Nat" ? Token::Kind::Ident : Token::Kind::Sym;
        t.text = norm;
        adv(lit.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Token::Kind::Num;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
          t.text += s[i];
          adv(1);
        }
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
                 static_cast<unsigned char>(c) >= 0x80) {
        t.kind = Token::Kind::Ident;
        auto identChar = [&](std::size_t k) {
          unsigned char b = static_cast<unsigned char>(s[k]);
          if (std::isalnum(b) || b == '_' || b == '\'') return true;
          if (b < 0x80) return false;
          for (const auto& [lit, norm] : syms)
            if (lit.size() > 1 && s.compare(k, lit.size(), lit) == 0) return false;
          return true;
        };
        while (i < s.size() && identChar(i)) {
          t.text += s[i];
          adv(1);
        }
      } else {
        throw Error(ErrorCode::SyntaxError, t.pos.str() + ": unexpected character '" + std::string(1, c) + "'");
      }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.pos = {line, col};
  end.lineStart = true;
  out.push_back(end);
  return out;
}

// Surface expressions before they are sorted into types and terms.
struct Expr {
  enum class Kind { Name, Num, App, Plus, Compose, Eq, Arrow, Sigma, Paren };
  Kind kind = Kind::Name;
  std::string text;
  std::uint64_t value = 0;
  std::vector<std::string> binders;  // Arrow/Sigma binder group
  std::vector<Expr> kids;
  SrcPos pos;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  QitDecl decl() {
    QitDecl d;
    d.pos = peek().pos;
    expectIdent("qit");
    d.name = ident();
    while (isSym("(")) {
      SrcPos p = peek().pos;
      next();
      std::vector<std::string> names;
      while (peek().kind == Token::Kind::Ident) names.push_back(ident());
      if (names.empty()) fail("expected parameter name");
      expectSym(":");
      ParamDecl pd;
      pd.pos = p;
      if (isSym("{")) {
        next();
        pd.kind = ParamDecl::Kind::Finite;
        while (true) {
          pd.elements.push_back(ident());
          if (isSym(",")) {
            next();
            continue;
          }
          break;
        }
        expectSym("}");
      } else if (isIdent("Set")) {
        next();
        pd.kind = ParamDecl::Kind::Set;
      } else if (isIdent("Nat")) {
        next();
        pd.kind = ParamDecl::Kind::Nat;
      } else {
        pd.kind = ParamDecl::Kind::Other;
        pd.type = toType(expr(), d.name);
      }
      expectSym(")");
      for (auto& n : names) {
        ParamDecl q = pd;
        q.name = n;
        d.params.push_back(q);
      }
    }
    if (isSym(":")) {
      next();
      expectIdent("Nat");
      d.indexed = true;
    }
    expectIdent("where");
    std::size_t ctorCol = 0;
    while (peek().kind != Token::Kind::End) {
      const Token& h = peek();
      if (!h.lineStart) fail("a constructor must start on a new line");
      if (ctorCol == 0) ctorCol = h.pos.col;
      if (h.pos.col != ctorCol) fail("constructors must be aligned");
      CtorDecl c;
      c.pos = h.pos;
      c.name = ident();
      expectSym(":");
      stopCol_ = ctorCol;
      c.type = toType(expr(), d.name);
      stopCol_ = 0;
      if (codomain(c.type).kind == TypeAst::Kind::Eq)
        d.equalityCtors.push_back(std::move(c));
      else
        d.elementCtors.push_back(std::move(c));
    }
    return d;
  }

 private:
  const Token& peek() const {
    const Token& t = t_[i_];
    // A token starting a line at the constructor column ends the current type.
    if (stopCol_ && t.lineStart && t.pos.col <= stopCol_ && t.kind != Token::Kind::End) return end_;
    return t;
  }
  void next() { ++i_; }
  bool isSym(const char* s) const { return peek().kind == Token::Kind::Sym && peek().text == s; }
  bool isIdent(const char* s) const { return peek().kind == Token::Kind::Ident && peek().text == s; }
  [[noreturn]] void fail(const std::string& m) const {
    const Token& t = peek();
    throw Error(ErrorCode::SyntaxError,
                t.pos.str() + ": " + m + (t.kind == Token::Kind::End ? " at end of input" : " near '" + t.text + "'"));
  }
  std::string ident() {
    if (peek().kind != Token::Kind::Ident) fail("expected identifier");
    std::string s = peek().text;
    next();
    return s;
  }
  void expectIdent(const char* s) {
    if (!isIdent(s)) fail(std::string("expected '") + s + "'");
    next();
  }
  void expectSym(const char* s) {
    if (!isSym(s)) fail(std::string("expected '") + s + "'");
    next();
  }

  // '(' ident+ ':' — a binder group rather than a parenthesised expression.
  bool binderAhead() const {
    if (!isSym("(")) return false;
    std::size_t k = i_ + 1;
    while (t_[k].kind == Token::Kind::Ident) ++k;
    return k > i_ + 1 && t_[k].kind == Token::Kind::Sym && t_[k].text == ":";
  }

  Expr expr() {
    if (binderAhead()) {
      SrcPos p = peek().pos;
      next();
      Expr e;
      e.pos = p;
      while (peek().kind == Token::Kind::Ident) e.binders.push_back(ident());
      expectSym(":");
      e.kids.push_back(expr());
      expectSym(")");
      if (isSym("*")) {
        if (e.binders.size() != 1) fail("a ∑ binds a single name");
        next();
        e.kind = Expr::Kind::Sigma;
        e.kids.push_back(sigmaRest());
        return e;
      }
      if (isSym("->")) next();
      e.kind = Expr::Kind::Arrow;
      e.kids.push_back(expr());
      return e;
    }
    Expr l = sigmaRest();
    if (isSym("->")) {
      SrcPos p = peek().pos;
      next();
      Expr e;
      e.kind = Expr::Kind::Arrow;
      e.pos = p;
      e.kids = {std::move(l), expr()};
      return e;
    }
    return l;
  }

  Expr sigmaRest() {
    if (binderAhead()) {
      // Dependent ∑ nested on the right of ×.
      std::size_t save = i_;
      Expr e = expr();
      if (e.kind == Expr::Kind::Sigma) return e;
      i_ = save;
      fail("expected a ∑ binder");
    }
    Expr l = eqExpr();
    if (isSym("*")) {
      SrcPos p = peek().pos;
      next();
      Expr e;
      e.kind = Expr::Kind::Sigma;
      e.pos = p;
      e.binders = {""};
      e.kids = {std::move(l), sigmaRest()};
      return e;
    }
    return l;
  }

  Expr eqExpr() {
    Expr l = composeExpr();
    if (isSym("=")) {
      SrcPos p = peek().pos;
      next();
      Expr e;
      e.kind = Expr::Kind::Eq;
      e.pos = p;
      e.kids = {std::move(l), composeExpr()};
      return e;
    }
    return l;
  }

  Expr composeExpr() {
    Expr l = plusExpr();
    if (isSym(".")) {
      SrcPos p = peek().pos;
      next();
      Expr e;
      e.kind = Expr::Kind::Compose;
      e.pos = p;
      e.kids = {std::move(l), composeExpr()};
      return e;
    }
    return l;
  }

  Expr plusExpr() {
    Expr l = app();
    while (isSym("+")) {
      SrcPos p = peek().pos;
      next();
      if (peek().kind != Token::Kind::Num) fail("expected a numeral after '+'");
      Expr e;
      e.kind = Expr::Kind::Plus;
      e.pos = p;
      e.value = std::stoull(peek().text);
      next();
      e.kids = {std::move(l)};
      l = std::move(e);
    }
    return l;
  }

  bool atomStart() const {
    const Token& t = peek();
    if (t.kind == Token::Kind::Ident) return t.text != "where";
    if (t.kind == Token::Kind::Num) return true;
    return t.kind == Token::Kind::Sym && t.text == "(" && !binderAhead();
  }

  Expr app() {
    if (!atomStart()) fail("expected a type or term");
    Expr head = atom();
    if (!atomStart()) return head;
    Expr e;
    e.kind = Expr::Kind::App;
    e.pos = head.pos;
    e.kids.push_back(std::move(head));
    while (atomStart()) e.kids.push_back(atom());
    return e;
  }

  Expr atom() {
    Expr e;
    e.pos = peek().pos;
    if (peek().kind == Token::Kind::Num) {
      e.kind = Expr::Kind::Num;
      e.value = std::stoull(peek().text);
      next();
      return e;
    }
    if (peek().kind == Token::Kind::Ident) {
      e.kind = Expr::Kind::Name;
      e.text = ident();
      return e;
    }
    expectSym("(");
    e.kind = Expr::Kind::Paren;
    e.kids.push_back(expr());
    expectSym(")");
    return e;
  }

  [[noreturn]] static void bad(const Expr& e, const std::string& m) {
    throw Error(ErrorCode::SyntaxError, e.pos.str() + ": " + m);
  }

  static TermAst toTerm(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Name: return TermAst::ident(e.text, e.pos);
      case Expr::Kind::Num: return TermAst::num(e.value, e.pos);
      case Expr::Kind::Paren: return toTerm(e.kids[0]);
      case Expr::Kind::Plus: {
        TermAst t;
        t.kind = TermAst::Kind::Plus;
        t.value = e.value;
        t.pos = e.pos;
        t.args = {toTerm(e.kids[0])};
        return t;
      }
      case Expr::Kind::Compose: {
        TermAst t;
        t.kind = TermAst::Kind::Compose;
        t.pos = e.pos;
        t.args = {toTerm(e.kids[0]), toTerm(e.kids[1])};
        return t;
      }
      case Expr::Kind::App: {
        const Expr* h = &e.kids[0];
        while (h->kind == Expr::Kind::Paren) h = &h->kids[0];
        if (h->kind != Expr::Kind::Name) bad(e, "application head must be a name");
        TermAst t;
        t.kind = TermAst::Kind::App;
        t.name = h->text;
        t.pos = e.pos;
        for (std::size_t k = 1; k < e.kids.size(); ++k) t.args.push_back(toTerm(e.kids[k]));
        return t;
      }
      default: bad(e, "expected a term");
    }
  }

  static TypeAst toType(const Expr& e, const std::string& q) {
    switch (e.kind) {
      case Expr::Kind::Paren: return toType(e.kids[0], q);
      case Expr::Kind::Num:
        if (e.value == 1) return TypeAst::unit();
        bad(e, "numerals other than 1 are not types");
      case Expr::Kind::Name:
        if (e.text == q) return TypeAst::qref(q, {}, e.pos);
        return TypeAst::cnst(e.text, {}, e.pos);
      case Expr::Kind::App: {
        TermAst t = toTerm(e);
        if (t.name == q) return TypeAst::qref(q, t.args, e.pos);
        return TypeAst::cnst(t.name, t.args, e.pos);
      }
      case Expr::Kind::Eq: return TypeAst::eq(toTerm(e.kids[0]), toTerm(e.kids[1]), e.pos);
      case Expr::Kind::Arrow: {
        TypeAst cod = toType(e.kids[1], q);
        if (e.binders.empty()) return TypeAst::pi("", toType(e.kids[0], q), std::move(cod), e.pos);
        TypeAst dom = toType(e.kids[0], q);
        for (std::size_t k = e.binders.size(); k-- > 0;) cod = TypeAst::pi(e.binders[k], dom, std::move(cod), e.pos);
        return cod;
      }
      case Expr::Kind::Sigma:
        return TypeAst::sigma(e.binders[0], toType(e.kids[0], q), toType(e.kids[1], q), e.pos);
      default: bad(e, "expected a type");
    }
  }

  std::vector<Token> t_;
  std::size_t i_ = 0;
  std::size_t stopCol_ = 0;
  Token end_;
};

}  // namespace

QitDecl parseDecl(const std::string& source) {
  Parser p(lex(source));
  return p.decl();
}

}  // namespace qwi
