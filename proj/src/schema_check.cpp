// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <variant>

#include "qwi/error.hpp"
#include "qwi/schema.hpp"

namespace qwi {

std::string Derivation::str(std::size_t indent) const {
  std::string s(indent, ' ');
  s += (rule.empty() ? std::string("-") : rule) + ": " + judgement + "\n";
  for (const auto& p : premises) s += p.str(indent + 2);
  return s;
}

std::vector<std::string> Derivation::ruleSequence() const {
  std::vector<std::string> out;
  for (const auto& p : premises) {
    auto sub = p.ruleSequence();
    out.insert(out.end(), sub.begin(), sub.end());
  }
  if (!rule.empty()) out.push_back(rule);
  return out;
}

Json Derivation::toJson() const {
  Json j;
  j["rule"] = rule;
  j["judgement"] = judgement;
  Json ps = Json::array();
  for (const auto& p : premises) ps.push_back(p.toJson());
  j["premises"] = ps;
  return j;
}

std::string Rejection::str() const {
  return "REJECT " + rule + " at " + pos.str() + ": " + message + (subterm.empty() ? "" : " [" + subterm + "]");
}

Json Rejection::toJson() const {
  Json j;
  j["verdict"] = "REJECT";
  j["rule"] = rule;
  j["line"] = pos.line;
  j["col"] = pos.col;
  j["message"] = message;
  j["subterm"] = subterm;
  return j;
}

Judgement Judgement::accept(Derivation d) {
  Judgement j;
  j.accepted = true;
  j.derivation = std::move(d);
  return j;
}

Judgement Judgement::reject(std::string rule, SrcPos pos, std::string message, std::string subterm) {
  Judgement j;
  j.rejection = {std::move(rule), pos, std::move(message), std::move(subterm)};
  return j;
}

std::string Judgement::str() const { return accepted ? "ACCEPT\n" + derivation.str(2) : rejection.str() + "\n"; }

Json Judgement::toJson() const {
  if (!accepted) return rejection.toJson();
  Json j;
  j["verdict"] = "ACCEPT";
  j["derivation"] = derivation.toJson();
  return j;
}

std::string DeclCheck::str() const {
  std::string s;
  if (context) s += "context: " + context->str() + "\n";
  for (const auto& [n, j] : ctors) s += n + ": " + j.str();
  s += accepted ? "ACCEPT\n" : "REJECT\n";
  return s;
}

Json DeclCheck::toJson() const {
  Json j;
  j["verdict"] = accepted ? "ACCEPT" : "REJECT";
  if (context) j["context"] = context->toJson();
  Json cs = Json::array();
  for (const auto& [n, jd] : ctors) {
    Json c = jd.toJson();
    c["constructor"] = n;
    cs.push_back(c);
  }
  j["constructors"] = cs;
  return j;
}

TypeAst eraseUnits(const TypeAst& k) {
  using K = TypeAst::Kind;
  if (k.kind != K::Pi && k.kind != K::Sigma) return k;
  TypeAst dom = eraseUnits(*k.left);
  TypeAst body = eraseUnits(*k.right);
  bool unitDom = codomain(dom).kind == K::Unit;
  std::string b = k.binder;
  if (unitDom && !b.empty()) {
    TermAst tt;
    tt.kind = TermAst::Kind::Unit;
    body = body.substTerm(b, tt);
    b.clear();
  }
  return k.kind == K::Pi ? TypeAst::pi(b, dom, body, k.pos) : TypeAst::sigma(b, dom, body, k.pos);
}

namespace {

using K = TypeAst::Kind;

struct Binding {
  std::string name;
  TypeAst type;
};

struct Ctx {
  const QitDecl* decl = nullptr;
  std::string base;  // Γ, Δ, Θ, Ξ
  std::vector<Binding> ext;
  bool hasQ = false;
  bool hasCtors = false;

  std::string str() const {
    std::string s = base;
    for (std::size_t i = 0; i < ext.size();) {
      std::string ty = typeStr(ext[i].type);
      std::string names = ext[i].name;
      std::size_t j = i + 1;
      while (j < ext.size() && typeStr(ext[j].type) == ty) names += " " + ext[j++].name;
      s += ", " + names + " : " + ty;
      i = j;
    }
    return s;
  }

  Ctx extend(std::string n, TypeAst t) const {
    Ctx c = *this;
    c.ext.push_back({std::move(n), std::move(t)});
    return c;
  }

  // Δ[𝟙/Q]: Q leaves the context and Q-typed entries become 𝟙.
  Ctx unitQ() const {
    Ctx c = *this;
    c.base = base == "Δ" ? "Γ" : base == "Θ" ? "Ξ" : base;
    c.hasQ = false;
    for (auto& b : c.ext) b.type = b.type.replaceQ(TypeAst::unit());
    return c;
  }

  bool bound(const std::string& n) const {
    for (const auto& b : ext)
      if (b.name == n) return true;
    for (const auto& p : decl->params)
      if (p.name == n) return true;
    if (hasCtors)
      for (const auto& c : decl->elementCtors)
        if (c.name == n) return true;
    return false;
  }

  std::string fresh() const {
    static const char* pool[] = {"a", "b", "c", "d", "e", "f", "g", "h", "j", "k", "m", "n", "p", "q", "r", "s"};
    for (const char* p : pool)
      if (!bound(p)) return p;
    for (std::size_t i = 0;; ++i)
      if (!bound("a" + std::to_string(i))) return "a" + std::to_string(i);
  }
};

std::string wrapJ(const TypeAst& t) {
  std::string s = typeStr(t);
  if (t.atomic() || t.kind == K::Eq || s.rfind("∏", 0) == 0 || s.rfind("∑", 0) == 0) return s;
  return "(" + s + ")";
}

std::string judge(const Ctx& c, const TypeAst& t, const char* form) { return c.str() + " ⊢ " + wrapJ(t) + " " + form; }

struct Fail {
  std::string rule;
  SrcPos pos;
  std::string message;
  std::string subterm;
};

using Result = std::variant<Derivation, Fail>;

bool failed(const Result& r) { return std::holds_alternative<Fail>(r); }

Judgement toJudgement(Result r) {
  if (auto* f = std::get_if<Fail>(&r)) return Judgement::reject(f->rule, f->pos, f->message, f->subterm);
  return Judgement::accept(std::get<Derivation>(std::move(r)));
}

// ---- term typing ----

using TypeOrError = std::variant<TypeAst, std::string>;

bool sameType(const TypeAst& a, const TypeAst& b) { return typeStr(a) == typeStr(b); }

TypeAst natType() { return TypeAst::cnst("Nat"); }

TypeOrError typeOfTerm(const Ctx& c, const TermAst& t);

TypeOrError typeOfName(const Ctx& c, const std::string& n) {
  for (auto it = c.ext.rbegin(); it != c.ext.rend(); ++it)
    if (it->name == n) return it->type;
  if (c.hasCtors)
    for (const auto& k : c.decl->elementCtors)
      if (k.name == n) return k.type;
  for (const auto& p : c.decl->params) {
    if (p.name == n) {
      if (p.kind == ParamDecl::Kind::Nat) return natType();
      return std::string(n + " is a type, not a term");
    }
    if (p.kind == ParamDecl::Kind::Finite &&
        std::find(p.elements.begin(), p.elements.end(), n) != p.elements.end())
      return TypeAst::cnst(p.name);
  }
  return std::string("unbound name " + n);
}

TypeOrError typeOfTerm(const Ctx& c, const TermAst& t) {
  switch (t.kind) {
    case TermAst::Kind::Num: return natType();
    case TermAst::Kind::Unit: return TypeAst::unit();
    case TermAst::Kind::Plus: {
      auto b = typeOfTerm(c, t.args[0]);
      if (auto* e = std::get_if<std::string>(&b)) return *e;
      if (!sameType(std::get<TypeAst>(b), natType())) return std::string(t.args[0].str() + " is not a natural number");
      return natType();
    }
    case TermAst::Kind::Name: return typeOfName(c, t.name);
    case TermAst::Kind::App: {
      auto h = typeOfName(c, t.name);
      if (auto* e = std::get_if<std::string>(&h)) return *e;
      TypeAst cur = std::get<TypeAst>(h);
      for (const auto& a : t.args) {
        if (cur.kind != K::Pi) return std::string(t.name + " is applied to too many arguments");
        auto at = typeOfTerm(c, a);
        if (auto* e = std::get_if<std::string>(&at)) return *e;
        if (!sameType(std::get<TypeAst>(at), *cur.left))
          return std::string(a.str() + " has type " + typeStr(std::get<TypeAst>(at)) + ", expected " +
                             typeStr(*cur.left));
        TypeAst next = *cur.right;
        if (!cur.binder.empty()) next = next.substTerm(cur.binder, a);
        cur = std::move(next);
      }
      return cur;
    }
    case TermAst::Kind::Compose: {
      auto f = typeOfTerm(c, t.args[0]);
      auto g = typeOfTerm(c, t.args[1]);
      if (auto* e = std::get_if<std::string>(&f)) return *e;
      if (auto* e = std::get_if<std::string>(&g)) return *e;
      const TypeAst& ft = std::get<TypeAst>(f);
      const TypeAst& gt = std::get<TypeAst>(g);
      if (ft.kind != K::Pi || gt.kind != K::Pi || !sameType(*ft.left, *gt.right))
        return std::string("cannot compose " + t.args[0].str() + " with " + t.args[1].str());
      return TypeAst::pi("", *gt.left, *ft.right);
    }
  }
  return std::string("ill-formed term");
}

std::optional<Fail> checkIndexArgs(const Ctx& c, const TypeAst& q) {
  if (q.args.size() != (c.decl->indexed ? 1u : 0u))
    return Fail{"Target", q.pos,
                c.decl->indexed ? "an indexed family takes exactly one index" : "Q takes no index arguments",
                typeStr(q)};
  for (const auto& a : q.args) {
    auto t = typeOfTerm(c, a);
    if (auto* e = std::get_if<std::string>(&t)) return Fail{"Target", a.pos, *e, a.str()};
    if (!sameType(std::get<TypeAst>(t), natType()))
      return Fail{"Target", a.pos, "index is not a natural number", a.str()};
  }
  return std::nullopt;
}

// Γ ⊢ B : 𝓤 for a Q-free type.
std::variant<Derivation, Fail> formation(const Ctx& c, const TypeAst& b) {
  if (b.kind == K::Const) {
    bool known = b.name == "Nat" && b.args.empty();
    for (const auto& p : c.decl->params)
      if (p.name == b.name && b.args.empty() && p.kind != ParamDecl::Kind::Nat) known = true;
    if (b.name == "isIso" && b.args.size() == 1) {
      auto t = typeOfTerm(c, b.args[0]);
      known = std::holds_alternative<TypeAst>(t) &&
              sameType(std::get<TypeAst>(t), TypeAst::pi("", natType(), natType()));
    }
    if (!known) return Fail{"ConstantParameter", b.pos, "not a type in scope", typeStr(b)};
  }
  if (b.kind == K::Pi || b.kind == K::Sigma) {
    auto l = formation(c, *b.left);
    if (failed(l)) return l;
    auto r = formation(b.binder.empty() ? c : c.extend(b.binder, *b.left), *b.right);
    if (failed(r)) return r;
  }
  if (b.kind == K::Eq) return Fail{"ConditionalEquation", b.pos, "an equation is used as a type", typeStr(b)};
  if (b.kind == K::QRef) return Fail{"StrictlyPositiveFunction", b.pos, "Q is not a type in this context", typeStr(b)};
  return Derivation{"", c.str() + " ⊢ " + typeStr(b) + " : 𝓤", {}};
}

Result strPstv(const Ctx& c, const TypeAst& k) {
  switch (k.kind) {
    case K::QRef: {
      Ctx withQ = c;
      withQ.hasQ = true;
      if (auto f = checkIndexArgs(withQ, k)) {
        f->rule = "InductiveArgument";
        return *f;
      }
      return Derivation{"InductiveArgument", judge(c, k, "StrPstv"), {}};
    }
    case K::Unit:
    case K::Const: {
      auto f = formation(c, k);
      if (failed(f)) return f;
      return Derivation{"ConstantParameter", judge(c, k, "StrPstv"), {std::get<Derivation>(f)}};
    }
    case K::Pi: {
      if (k.left->kind == K::Eq)
        return Fail{"ConditionalEquation", k.left->pos, "an argument is an equation", typeStr(*k.left)};
      if (k.left->mentionsQ())
        return Fail{"StrictlyPositiveFunction", k.left->pos, "Q occurs on the LHS of a ∏-type", typeStr(*k.left)};
      auto f = formation(c, *k.left);
      if (failed(f)) return f;
      std::string b = k.binder.empty() ? c.fresh() : k.binder;
      auto body = strPstv(c.extend(b, *k.left), k.binder.empty() ? *k.right : *k.right);
      if (failed(body)) return body;
      return Derivation{"StrictlyPositiveFunction", judge(c, k, "StrPstv"),
                        {std::get<Derivation>(f), std::get<Derivation>(body)}};
    }
    case K::Sigma: {
      if (k.left->kind == K::Eq || k.right->kind == K::Eq) {
        const TypeAst& e = k.left->kind == K::Eq ? *k.left : *k.right;
        return Fail{"ConditionalEquation", e.pos, "an argument is an equation", typeStr(e)};
      }
      if (k.left->mentionsQ() && !k.binder.empty() && k.right->mentionsVar(k.binder))
        return Fail{"StrictlyPositiveProduct", k.pos, "the RHS of a ∑-type depends on Q", typeStr(k)};
      auto l = strPstv(c, *k.left);
      if (failed(l)) return l;
      std::string a = k.binder.empty() ? c.fresh() : k.binder;
      auto r = strPstv(c.extend(a, k.left->replaceQ(TypeAst::unit())), *k.right);
      if (failed(r)) return r;
      TypeAst concl = TypeAst::sigma(k.binder, *k.left, eraseUnits(*k.right), k.pos);
      return Derivation{"StrictlyPositiveProduct", judge(c, concl, "StrPstv"),
                        {std::get<Derivation>(l), std::get<Derivation>(r)}};
    }
    case K::Eq: return Fail{"ConditionalEquation", k.pos, "an argument is an equation", typeStr(k)};
  }
  return Fail{"StrPstv", k.pos, "unrecognised type", typeStr(k)};
}

Result elType(const Ctx& c, const TypeAst& h) {
  if (h.kind == K::QRef) {
    if (auto f = checkIndexArgs(c, h)) return *f;
    return Derivation{"Target", judge(c, h, "ElType"), {}};
  }
  if (h.kind != K::Pi)
    return Fail{"Target", h.pos, "the codomain of an element constructor must be Q", typeStr(h)};
  const TypeAst& k = *h.left;
  if (k.kind == K::Eq) return Fail{"ConditionalEquation", k.pos, "an argument is an equation", typeStr(k)};
  auto arg = strPstv(c.unitQ(), k);
  if (failed(arg)) return arg;
  std::string a = h.binder.empty() ? c.fresh() : h.binder;
  auto rest = elType(c.extend(a, eraseUnits(k)), *h.right);
  if (failed(rest)) return rest;
  return Derivation{"ElArgument", judge(c, h, "ElType"), {std::get<Derivation>(arg), std::get<Derivation>(rest)}};
}

Result eqType(const Ctx& c, const TypeAst& k) {
  if (k.kind == K::Eq) {
    Derivation d{"EqTarget", judge(c, k, "EqType"), {}};
    for (const TermAst* side : {&k.lhs, &k.rhs}) {
      auto t = typeOfTerm(c, *side);
      if (auto* e = std::get_if<std::string>(&t)) return Fail{"EqTarget", side->pos, *e, side->str()};
      const TypeAst& ty = std::get<TypeAst>(t);
      if (ty.kind != K::QRef)
        return Fail{"EqTarget", side->pos, "endpoint has type " + typeStr(ty) + ", not Q", side->str()};
      d.premises.push_back({"", c.str() + " ⊢ " + side->str() + " : " + typeStr(ty), {}});
    }
    auto lt = std::get<TypeAst>(typeOfTerm(c, k.lhs));
    auto rt = std::get<TypeAst>(typeOfTerm(c, k.rhs));
    if (!sameType(lt, rt))
      return Fail{"EqTarget", k.pos, "endpoints live in different indices", typeStr(lt) + " vs " + typeStr(rt)};
    return d;
  }
  if (k.kind != K::Pi)
    return Fail{"EqCon", k.pos, "the codomain of an equality constructor must be an equation", typeStr(k)};
  const TypeAst& a = *k.left;
  if (a.kind == K::Eq || codomain(a).kind == K::Eq)
    return Fail{"ConditionalEquation", a.pos, "an argument is an equation; conditional equations are not supported",
                typeStr(a)};
  auto arg = strPstv(c.unitQ(), a);
  if (failed(arg)) return arg;
  std::string b = k.binder.empty() ? c.fresh() : k.binder;
  auto rest = eqType(c.extend(b, eraseUnits(a)), *k.right);
  if (failed(rest)) return rest;
  return Derivation{"EqArg", judge(c, k, "EqType"), {std::get<Derivation>(arg), std::get<Derivation>(rest)}};
}

Ctx gamma(const QitDecl& d) {
  Ctx c;
  c.decl = &d;
  c.base = "Γ";
  return c;
}

Ctx delta(const QitDecl& d) {
  Ctx c = gamma(d);
  c.base = "Δ";
  c.hasQ = true;
  return c;
}

Ctx theta(const QitDecl& d) {
  Ctx c = delta(d);
  c.base = "Θ";
  c.hasCtors = true;
  return c;
}

}  // namespace

Judgement checkStrictlyPositive(const QitDecl& d, const TypeAst& k) { return toJudgement(strPstv(gamma(d), k)); }

Judgement checkElementCtor(const QitDecl& d, const TypeAst& h) {
  auto r = elType(delta(d), h);
  if (failed(r)) return toJudgement(std::move(r));
  return Judgement::accept({"ElCon", judge(gamma(d), h, "ElCnstr"), {std::get<Derivation>(r)}});
}

Judgement checkEqualityCtor(const QitDecl& d, const TypeAst& k) {
  auto r = eqType(theta(d), k);
  if (failed(r)) return toJudgement(std::move(r));
  return Judgement::accept({"EqCon", judge(gamma(d), k, "EqCnstr"), {std::get<Derivation>(r)}});
}

DeclCheck checkDecl(const QitDecl& d) {
  DeclCheck out;
  for (const auto& p : d.params) {
    if (p.name == d.name || (p.kind == ParamDecl::Kind::Other && p.type.mentionsQ())) {
      out.context = Rejection{"Formation", p.pos, "Q ∉ Γ: the declared type occurs in its own parameters", p.name};
      break;
    }
    if (p.kind == ParamDecl::Kind::Other) {
      out.context = Rejection{"UnsupportedParameterType", p.pos, "parameters must be Set, Nat or a finite set",
                              p.name + " : " + p.typeText()};
      break;
    }
  }
  std::set<std::string> names;
  for (const auto* list : {&d.elementCtors, &d.equalityCtors})
    for (const auto& c : *list)
      if (!names.insert(c.name).second && !out.context)
        out.context = Rejection{"NameClash", c.pos, "constructor names must be distinct", c.name};
  if (out.context) out.accepted = false;
  for (const auto& c : d.elementCtors) {
    out.ctors.emplace_back(c.name, checkElementCtor(d, eraseUnits(c.type)));
    out.accepted = out.accepted && out.ctors.back().second.accepted;
  }
  for (const auto& c : d.equalityCtors) {
    out.ctors.emplace_back(c.name, checkEqualityCtor(d, eraseUnits(c.type)));
    out.accepted = out.accepted && out.ctors.back().second.accepted;
  }
  return out;
}

namespace {

// Premise judgement forms each rule expects, in order.
const std::map<std::string, std::pair<std::string, std::vector<std::string>>>& ruleShapes() {
  static const std::map<std::string, std::pair<std::string, std::vector<std::string>>> m = {
      {"ConstantParameter", {"StrPstv", {": 𝓤"}}},
      {"StrictlyPositiveFunction", {"StrPstv", {": 𝓤", "StrPstv"}}},
      {"InductiveArgument", {"StrPstv", {}}},
      {"StrictlyPositiveProduct", {"StrPstv", {"StrPstv", "StrPstv"}}},
      {"ElCon", {"ElCnstr", {"ElType"}}},
      {"Target", {"ElType", {}}},
      {"ElArgument", {"ElType", {"StrPstv", "ElType"}}},
      {"EqCon", {"EqCnstr", {"EqType"}}},
      {"EqTarget", {"EqType", {":", ":"}}},
      {"EqArg", {"EqType", {"StrPstv", "EqType"}}},
  };
  return m;
}

bool endsWith(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

bool replayNode(const Derivation& n) {
  if (n.rule.empty()) return n.premises.empty() && n.judgement.find(" ⊢ ") != std::string::npos;
  auto it = ruleShapes().find(n.rule);
  if (it == ruleShapes().end()) return false;
  const auto& [concl, prem] = it->second;
  if (!endsWith(n.judgement, " " + concl) || n.premises.size() != prem.size()) return false;
  for (std::size_t i = 0; i < prem.size(); ++i) {
    const std::string& want = prem[i];
    const std::string& got = n.premises[i].judgement;
    bool ok = want[0] == ':' ? got.find(" " + want) != std::string::npos || (want == ":" && got.find(" : ") != std::string::npos)
                             : endsWith(got, " " + want);
    if (!ok || !replayNode(n.premises[i])) return false;
  }
  return true;
}

bool sameTree(const Derivation& a, const Derivation& b) {
  if (a.rule != b.rule || a.judgement != b.judgement || a.premises.size() != b.premises.size()) return false;
  for (std::size_t i = 0; i < a.premises.size(); ++i)
    if (!sameTree(a.premises[i], b.premises[i])) return false;
  return true;
}

}  // namespace

bool replayDerivation(const QitDecl& d, const std::string& ctor, const Derivation& der) {
  if (!replayNode(der)) return false;
  for (const auto& c : d.elementCtors)
    if (c.name == ctor) {
      Judgement j = checkElementCtor(d, eraseUnits(c.type));
      return j.accepted && sameTree(j.derivation, der);
    }
  for (const auto& c : d.equalityCtors)
    if (c.name == ctor) {
      Judgement j = checkEqualityCtor(d, eraseUnits(c.type));
      return j.accepted && sameTree(j.derivation, der);
    }
  return false;
}

}  // namespace qwi
