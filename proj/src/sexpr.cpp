// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include "qwi/sexpr.hpp"

#include <algorithm>
#include <cctype>

#include "qwi/error.hpp"

namespace qwi {

std::string SExpr::str() const {
  if (isAtom) return atom;
  std::string s = "(";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += " ";
    s += items[i].str();
  }
  return s + ")";
}

namespace {

class Reader {
 public:
  explicit Reader(const std::string& t) : text_(t) {}

  bool atEnd() {
    skip();
    return pos_ >= text_.size();
  }

  SExpr read() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    SExpr s;
    s.line = line_;
    s.col = col_;
    char c = text_[pos_];
    if (c == ')') fail("unexpected ')'");
    if (c == '(') {
      advance();
      s.isAtom = false;
      while (true) {
        skip();
        if (pos_ >= text_.size()) fail("unclosed '('");
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        s.items.push_back(read());
      }
      return s;
    }
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';') {
      s.atom += text_[pos_];
      advance();
    }
    return s;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw Error(ErrorCode::SyntaxError,
                std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg);
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

[[noreturn]] void bad(const SExpr& s, const std::string& msg) {
  throw Error(ErrorCode::SyntaxError,
              std::to_string(s.line) + ":" + std::to_string(s.col) + ": " + msg + " in " + s.str());
}

bool isNumber(const std::string& a) {
  if (a.empty()) return false;
  for (char c : a)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

const std::string& head(const SExpr& s) {
  if (s.isAtom || s.items.empty() || !s.items[0].isAtom) bad(s, "expected a tagged list");
  return s.items[0].atom;
}

ArityMap mapFromSExpr(const SExpr& s) {
  const std::string& h = head(s);
  if (h == "fun") {
    if (s.items.size() != 3 || !s.items[1].isAtom) bad(s, "expected (fun i body)");
    return ArityMap::comprehension(s.items[1].atom, termFromSExpr(s.items[2]));
  }
  if (h == "union") {
    if (s.items.size() != 3) bad(s, "expected (union m m)");
    return ArityMap::unite(mapFromSExpr(s.items[1]), mapFromSExpr(s.items[2]));
  }
  bad(s, "expected fun or union");
}

}  // namespace

SExpr parseSExpr(const std::string& text) {
  Reader r(text);
  SExpr s = r.read();
  if (!r.atEnd()) r.fail("trailing input");
  return s;
}

std::vector<SExpr> parseSExprs(const std::string& text) {
  Reader r(text);
  std::vector<SExpr> out;
  while (!r.atEnd()) out.push_back(r.read());
  return out;
}

IndexExpr indexFromSExpr(const SExpr& s) {
  if (s.isAtom) {
    if (isNumber(s.atom)) return IndexExpr::cnst(std::stoull(s.atom));
    return IndexExpr::var(s.atom);
  }
  if (s.items.empty() || !s.items[0].isAtom) bad(s, "bad index expression");
  std::vector<IndexExpr> args;
  for (std::size_t i = 1; i < s.items.size(); ++i) args.push_back(indexFromSExpr(s.items[i]));
  return IndexExpr::app(s.items[0].atom, std::move(args));
}

Term termFromSExpr(const SExpr& s) {
  const std::string& h = head(s);
  if (h == "var") {
    if (s.items.size() == 2 && s.items[1].isAtom) return Term::var(s.items[1].atom);
    auto ixOf = [&](const SExpr& e) {
      if (e.isAtom || head(e) != "ix" || e.items.size() != 2) bad(s, "expected (ix e)");
      return indexFromSExpr(e.items[1]);
    };
    if (s.items.size() == 2) return Term::ixVar("", ixOf(s.items[1]));
    if (s.items.size() == 3 && s.items[1].isAtom) return Term::ixVar(s.items[1].atom, ixOf(s.items[2]));
    bad(s, "bad variable");
  }
  if (h == "fam") {
    if (s.items.size() < 2 || !s.items[1].isAtom) bad(s, "expected (fam k e...)");
    std::vector<IndexExpr> args;
    for (std::size_t i = 2; i < s.items.size(); ++i) args.push_back(indexFromSExpr(s.items[i]));
    return Term::familyApp(s.items[1].atom, std::move(args));
  }
  if (h == "op") {
    if (s.items.size() < 2 || !s.items[1].isAtom) bad(s, "expected (op name ...)");
    std::vector<std::string> params;
    std::size_t i = 2;
    for (; i < s.items.size() && s.items[i].isAtom; ++i) params.push_back(s.items[i].atom);
    std::vector<Term> kids;
    for (; i < s.items.size(); ++i) {
      const SExpr& c = s.items[i];
      if (c.isAtom) bad(s, "operator parameters must precede children");
      const std::string& ch = head(c);
      if (ch == "fun" || ch == "union") {
        if (i + 1 != s.items.size() || !kids.empty()) bad(s, "a comprehension must be the only child");
        return Term::node(s.items[1].atom, params, mapFromSExpr(c));
      }
      kids.push_back(termFromSExpr(c));
    }
    return Term::node(s.items[1].atom, params, std::move(kids));
  }
  bad(s, "unknown term form '" + h + "'");
}

Term parseTerm(const std::string& text) { return termFromSExpr(parseSExpr(text)); }

void declareMap(IndexEnv& env, const SExpr& decl) {
  if (head(decl) == "builtin") {
    if (decl.items.size() != 2 || !decl.items[1].isAtom) bad(decl, "expected (builtin name)");
    const std::string& n = decl.items[1].atom;
    const IndexEnv& b = IndexEnv::builtin();
    if (!b.maps.count(n) && !b.families.count(n)) bad(decl, "unknown builtin " + n);
    env.mapSource[n] = decl.str();
    return;
  }
  if (head(decl) != "bij" || decl.items.size() < 2 || !decl.items[1].isAtom) bad(decl, "expected (bij name ...)");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> table;
  std::size_t i = 2;
  for (; i < decl.items.size() && !decl.items[i].isAtom; ++i) {
    const SExpr& p = decl.items[i];
    if (p.items.size() != 2 || !p.items[0].isAtom || !p.items[1].isAtom || !isNumber(p.items[0].atom) ||
        !isNumber(p.items[1].atom))
      bad(decl, "expected (x y) pairs");
    table.emplace_back(std::stoull(p.items[0].atom), std::stoull(p.items[1].atom));
  }
  if (i + 2 != decl.items.size() || !decl.items[i].isAtom || decl.items[i].atom != "default" ||
      !decl.items[i + 1].isAtom)
    bad(decl, "expected 'default i'");
  // A finite permutation of its support, identity elsewhere.
  std::vector<std::uint64_t> from, to;
  for (auto [x, y] : table) {
    from.push_back(x);
    to.push_back(y);
  }
  std::sort(from.begin(), from.end());
  std::sort(to.begin(), to.end());
  if (from != to || std::adjacent_find(from.begin(), from.end()) != from.end())
    bad(decl, "table is not a bijection of its support");
  env.declareBijection(decl.items[1].atom, table);
}

}  // namespace qwi
