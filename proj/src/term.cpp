// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include "qwi/term.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "qwi/error.hpp"

namespace qwi {

std::string IndexExpr::str() const {
  switch (kind) {
    case Kind::Var: return name;
    case Kind::Const: return std::to_string(value);
    case Kind::App: {
      std::string s = "(" + name;
      for (const auto& a : args) s += " " + a.str();
      return s + ")";
    }
  }
  return "";
}

bool IndexExpr::mentions(const std::string& v) const {
  if (kind == Kind::Var) return name == v;
  return std::any_of(args.begin(), args.end(), [&](const IndexExpr& a) { return a.mentions(v); });
}

IndexExpr IndexExpr::subst(const std::string& v, const IndexExpr& e) const {
  if (kind == Kind::Var) return name == v ? e : *this;
  if (kind == Kind::Const) return *this;
  IndexExpr r = *this;
  for (auto& a : r.args) a = a.subst(v, e);
  return r;
}

namespace {

bool closedIndex(const IndexExpr& e) {
  if (e.kind == IndexExpr::Kind::Var) return false;
  return std::all_of(e.args.begin(), e.args.end(), closedIndex);
}

// Cantor pairing and its inverse.
std::uint64_t cantorPair(std::uint64_t x, std::uint64_t y) { return (x + y) * (x + y + 1) / 2 + y; }

std::pair<std::uint64_t, std::uint64_t> cantorUnpair(std::uint64_t z) {
  std::uint64_t w = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(z) + 1) - 1) / 2);
  while ((w + 1) * (w + 2) / 2 <= z) ++w;
  while (w * (w + 1) / 2 > z) --w;
  std::uint64_t t = w * (w + 1) / 2;
  std::uint64_t y = z - t;
  return {w - y, y};
}

std::string arityMapStr(const ArityMap& m) {
  switch (m.kind) {
    case ArityMap::Kind::Tabular: {
      std::string s;
      for (const auto& t : m.entries) s += " " + t.str();
      return s;
    }
    case ArityMap::Kind::Comprehension: return " (fun " + m.indexVar + " " + m.body->str() + ")";
    case ArityMap::Kind::Union:
      return " (union" + arityMapStr(m.parts[0]) + arityMapStr(m.parts[1]) + ")";
  }
  return "";
}

std::size_t arityMapDepth(const ArityMap& m) {
  switch (m.kind) {
    case ArityMap::Kind::Tabular: {
      std::size_t d = 0;
      for (const auto& t : m.entries) d = std::max(d, t.depth());
      return d;
    }
    case ArityMap::Kind::Comprehension: return m.body->depth();
    case ArityMap::Kind::Union: return std::max(arityMapDepth(m.parts[0]), arityMapDepth(m.parts[1]));
  }
  return 0;
}

}  // namespace

std::string opInstanceName(const std::string& family, const std::vector<std::string>& params) {
  std::string s = family;
  for (const auto& p : params) s += "_" + p;
  return s;
}

std::string indexedVarKey(const std::string& family, std::uint64_t n) {
  return family.empty() ? std::to_string(n) : family + "." + std::to_string(n);
}

const IndexEnv& IndexEnv::builtin() {
  static const IndexEnv env = [] {
    IndexEnv e;
    e.maps["succ"] = [](const std::vector<std::uint64_t>& a) { return a.at(0) + 1; };
    e.maps["pair"] = [](const std::vector<std::uint64_t>& a) { return cantorPair(a.at(0), a.at(1)); };
    e.maps["unpair1"] = [](const std::vector<std::uint64_t>& a) { return cantorUnpair(a.at(0)).first; };
    e.maps["unpair2"] = [](const std::vector<std::uint64_t>& a) { return cantorUnpair(a.at(0)).second; };
    // [even, odd] : ℕ + ℕ → ℕ
    e.maps["even"] = [](const std::vector<std::uint64_t>& a) { return 2 * a.at(0); };
    e.maps["odd"] = [](const std::vector<std::uint64_t>& a) { return 2 * a.at(0) + 1; };
    e.maps["id"] = [](const std::vector<std::uint64_t>& a) { return a.at(0); };
    e.maps["snd"] = [](const std::vector<std::uint64_t>& a) { return a.at(1); };
    // k L 0 y = η y;  k L (x+1) y = sup (λm. k L x (L y m)), with L = snd.
    e.families["k_snd"] = [](const std::vector<std::uint64_t>& a) {
      if (a.at(0) == 0) return Term::ixVar("", IndexExpr::cnst(a.at(1)));
      return Term::node("sup", {},
                        ArityMap::comprehension(
                            "m", Term::familyApp("k_snd", {IndexExpr::cnst(a.at(0) - 1),
                                                           IndexExpr::app("snd", {IndexExpr::cnst(a.at(1)),
                                                                                  IndexExpr::var("m")})})));
    };
    return e;
  }();
  return env;
}

std::uint64_t IndexEnv::eval(const IndexExpr& e) const {
  switch (e.kind) {
    case IndexExpr::Kind::Const: return e.value;
    case IndexExpr::Kind::Var: throw Error(ErrorCode::UnboundVariable, "free index variable " + e.name);
    case IndexExpr::Kind::App: {
      std::vector<std::uint64_t> args;
      for (const auto& a : e.args) args.push_back(eval(a));
      auto it = maps.find(e.name);
      if (it != maps.end()) return it->second(args);
      const auto& b = builtin().maps;
      auto jt = b.find(e.name);
      if (jt == b.end()) throw Error(ErrorCode::UnknownOp, "undeclared index map " + e.name);
      return jt->second(args);
    }
  }
  return 0;
}

const IndexEnv::Family& IndexEnv::family(const std::string& name) const {
  auto it = families.find(name);
  if (it != families.end()) return it->second;
  const auto& b = builtin().families;
  auto jt = b.find(name);
  if (jt == b.end()) throw Error(ErrorCode::UnknownOp, "undeclared term family " + name);
  return jt->second;
}

void IndexEnv::declareBijection(const std::string& name,
                                const std::vector<std::pair<std::uint64_t, std::uint64_t>>& table) {
  std::map<std::uint64_t, std::uint64_t> t(table.begin(), table.end());
  maps[name] = [t](const std::vector<std::uint64_t>& a) {
    auto it = t.find(a.at(0));
    return it == t.end() ? a.at(0) : it->second;
  };
  std::string src = "(bij " + name;
  for (const auto& [x, y] : table) src += " (" + std::to_string(x) + " " + std::to_string(y) + ")";
  mapSource[name] = src + " default i)";
}

IndexEnv IndexEnv::merged(const IndexEnv& other) const {
  IndexEnv r = *this;
  for (const auto& [k, v] : other.maps) r.maps[k] = v;
  for (const auto& [k, v] : other.families) r.families[k] = v;
  for (const auto& [k, v] : other.mapSource) r.mapSource[k] = v;
  return r;
}

ArityMap ArityMap::tabular(std::vector<Term> ts) {
  ArityMap m;
  m.kind = Kind::Tabular;
  m.entries = std::move(ts);
  return m;
}

ArityMap ArityMap::comprehension(std::string var, Term body) {
  ArityMap m;
  m.kind = Kind::Comprehension;
  m.indexVar = std::move(var);
  m.body = std::make_shared<const Term>(std::move(body));
  return m;
}

ArityMap ArityMap::unite(ArityMap evens, ArityMap odds) {
  ArityMap m;
  m.kind = Kind::Union;
  m.parts = {std::move(evens), std::move(odds)};
  return m;
}

namespace {

Term finish(TermRep r, std::function<Term(std::shared_ptr<const TermRep>)> wrap) {
  switch (r.kind) {
    case Term::Kind::Var:
      r.depth = 1;
      if (r.ix) {
        r.str = r.name.empty() ? "(var (ix " + r.ix->str() + "))"
                               : "(var " + r.name + " (ix " + r.ix->str() + "))";
      } else {
        r.str = "(var " + r.name + ")";
      }
      break;
    case Term::Kind::Family: {
      r.depth = 1;
      r.str = "(fam " + r.name;
      for (const auto& a : r.famArgs) r.str += " " + a.str();
      r.str += ")";
      break;
    }
    case Term::Kind::Node: {
      r.depth = 1 + arityMapDepth(r.children);
      r.str = "(op " + r.name;
      for (const auto& p : r.params) r.str += " " + p;
      r.str += arityMapStr(r.children) + ")";
      break;
    }
  }
  r.hash = std::hash<std::string>{}(r.str);
  return wrap(std::make_shared<const TermRep>(std::move(r)));
}

}  // namespace

struct TermFactory {
  static Term make(TermRep r) {
    return finish(std::move(r), [](std::shared_ptr<const TermRep> p) { return Term::fromRep(std::move(p)); });
  }
};

Term::Term() : Term(var("_")) {}

Term Term::var(std::string name) {
  TermRep r;
  r.kind = Kind::Var;
  r.name = std::move(name);
  return TermFactory::make(std::move(r));
}

Term Term::ixVar(std::string family, IndexExpr ix) {
  TermRep r;
  r.kind = Kind::Var;
  r.name = std::move(family);
  r.ix = std::move(ix);
  return TermFactory::make(std::move(r));
}

Term Term::node(std::string family, std::vector<std::string> params, ArityMap children) {
  TermRep r;
  r.kind = Kind::Node;
  r.name = std::move(family);
  r.params = std::move(params);
  r.children = std::move(children);
  return TermFactory::make(std::move(r));
}

Term Term::node(std::string family, std::vector<std::string> params, std::vector<Term> children) {
  return node(std::move(family), std::move(params), ArityMap::tabular(std::move(children)));
}

Term Term::leaf(std::string family, std::vector<std::string> params) {
  return node(std::move(family), std::move(params), ArityMap::tabular({}));
}

Term Term::familyApp(std::string name, std::vector<IndexExpr> args) {
  TermRep r;
  r.kind = Kind::Family;
  r.name = std::move(name);
  r.famArgs = std::move(args);
  return TermFactory::make(std::move(r));
}

Term::Kind Term::kind() const { return rep_->kind; }
const std::string& Term::name() const { return rep_->name; }
const std::optional<IndexExpr>& Term::ix() const { return rep_->ix; }
const std::vector<std::string>& Term::params() const { return rep_->params; }
const ArityMap& Term::children() const { return rep_->children; }
const std::vector<IndexExpr>& Term::familyArgs() const { return rep_->famArgs; }
std::string Term::opName() const { return opInstanceName(rep_->name, rep_->params); }
std::size_t Term::depth() const { return rep_->depth; }
std::size_t Term::hash() const { return rep_->hash; }
const std::string& Term::str() const { return rep_->str; }

bool operator==(const Term& a, const Term& b) {
  if (a.rep_ == b.rep_) return true;
  return a.rep_->hash == b.rep_->hash && a.rep_->str == b.rep_->str;
}

namespace {

ArityMap substIndexMap(const ArityMap& m, const std::string& v, const IndexExpr& e);

Term substIndexTerm(const Term& t, const std::string& v, const IndexExpr& e) {
  switch (t.kind()) {
    case Term::Kind::Var:
      if (!t.ix()) return t;
      return Term::ixVar(t.name(), t.ix()->subst(v, e));
    case Term::Kind::Family: {
      std::vector<IndexExpr> args;
      for (const auto& a : t.familyArgs()) args.push_back(a.subst(v, e));
      return Term::familyApp(t.name(), std::move(args));
    }
    case Term::Kind::Node:
      return Term::node(t.name(), t.params(), substIndexMap(t.children(), v, e));
  }
  return t;
}

ArityMap substIndexMap(const ArityMap& m, const std::string& v, const IndexExpr& e) {
  switch (m.kind) {
    case ArityMap::Kind::Tabular: {
      std::vector<Term> ts;
      for (const auto& c : m.entries) ts.push_back(substIndexTerm(c, v, e));
      return ArityMap::tabular(std::move(ts));
    }
    case ArityMap::Kind::Comprehension: {
      if (m.indexVar == v) return m;
      std::string w = m.indexVar;
      Term body = *m.body;
      if (e.mentions(w)) {
        std::string fresh = w + "'";
        while (e.mentions(fresh)) fresh += "'";
        body = substIndexTerm(body, w, IndexExpr::var(fresh));
        w = fresh;
      }
      return ArityMap::comprehension(w, substIndexTerm(body, v, e));
    }
    case ArityMap::Kind::Union:
      return ArityMap::unite(substIndexMap(m.parts[0], v, e), substIndexMap(m.parts[1], v, e));
  }
  return m;
}

// Folds closed index expressions to constants and expands closed family
// applications.
Term foldClosed(const Term& t, const IndexEnv& env) {
  switch (t.kind()) {
    case Term::Kind::Var:
      if (t.ix() && closedIndex(*t.ix()) && t.ix()->kind != IndexExpr::Kind::Const)
        return Term::ixVar(t.name(), IndexExpr::cnst(env.eval(*t.ix())));
      return t;
    case Term::Kind::Family: {
      if (!std::all_of(t.familyArgs().begin(), t.familyArgs().end(), closedIndex)) return t;
      std::vector<std::uint64_t> args;
      for (const auto& a : t.familyArgs()) args.push_back(env.eval(a));
      return foldClosed(env.family(t.name())(args), env);
    }
    case Term::Kind::Node: {
      if (!t.children().isTabular()) return t;
      std::vector<Term> ts;
      for (const auto& c : t.children().entries) ts.push_back(foldClosed(c, env));
      return Term::node(t.name(), t.params(), std::move(ts));
    }
  }
  return t;
}

}  // namespace

Term Term::substIndex(const std::string& v, const IndexExpr& e) const { return substIndexTerm(*this, v, e); }

Term evalArityMap(const ArityMap& m, std::uint64_t x, const IndexEnv& env) {
  switch (m.kind) {
    case ArityMap::Kind::Tabular:
      if (x >= m.entries.size()) throw Error(ErrorCode::ArityMismatch, "child index out of range");
      return m.entries[x];
    case ArityMap::Kind::Comprehension:
      return foldClosed(m.body->substIndex(m.indexVar, IndexExpr::cnst(x)), env);
    case ArityMap::Kind::Union:
      return x % 2 == 0 ? evalArityMap(m.parts[0], x / 2, env) : evalArityMap(m.parts[1], x / 2, env);
  }
  throw Error(ErrorCode::ArityMismatch, "bad arity map");
}

Term Term::child(std::uint64_t x, const IndexEnv& env) const { return evalArityMap(children(), x, env); }

bool termsEqual(const Term& a0, const Term& b0, const IndexEnv& env, std::uint64_t k) {
  if (a0 == b0) return true;
  Term a = foldClosed(a0, env), b = foldClosed(b0, env);
  if (a == b) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: return false;
    case Term::Kind::Family: return false;
    case Term::Kind::Node: {
      if (a.name() != b.name() || a.params() != b.params()) return false;
      const ArityMap& ma = a.children();
      const ArityMap& mb = b.children();
      if (ma.isTabular() != mb.isTabular()) return false;
      if (ma.isTabular()) {
        if (ma.entries.size() != mb.entries.size()) return false;
        for (std::size_t i = 0; i < ma.entries.size(); ++i)
          if (!termsEqual(ma.entries[i], mb.entries[i], env, k)) return false;
        return true;
      }
      for (std::uint64_t x = 0; x <= k; ++x)
        if (!termsEqual(evalArityMap(ma, x, env), evalArityMap(mb, x, env), env, k)) return false;
      return true;
    }
  }
  return false;
}

}  // namespace qwi
