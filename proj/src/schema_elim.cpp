// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include <set>

#include "qwi/schema.hpp"

namespace qwi {

namespace {

using K = TypeAst::Kind;

struct Piece {
  std::string s;
  bool atomic;
};

std::string paren(const Piece& p) { return p.atomic ? p.s : "(" + p.s + ")"; }

bool isQArg(const TypeAst& t) { return t.kind == K::QRef; }
bool isQFun(const TypeAst& t) { return t.kind == K::Pi && !isQArg(*t.left) && t.right->mentionsQ(); }
bool isQPair(const TypeAst& t) { return t.kind == K::Sigma && t.mentionsQ(); }

struct Arg {
  std::string name;
  TypePtr type;
};

// Splits ∏-arguments, naming anonymous ones x, y, z… (constants),
// xs, ys, zs… (inductive) or f, g, h… (functions into Q).
std::vector<Arg> argsOf(const TypeAst& t, const TypeAst** target) {
  std::vector<Arg> out;
  std::set<std::string> used;
  const TypeAst* cur = &t;
  for (const TypeAst* c = &t; c->kind == K::Pi; c = c->right.get())
    if (!c->binder.empty()) used.insert(c->binder);
  static const char* consts[] = {"x", "y", "z", "w", "u", "v"};
  static const char* funs[] = {"f", "g", "h", "k"};
  auto pick = [&](const TypeAst& a) {
    for (int round = 0;; ++round) {
      std::string suffix = round ? std::to_string(round) : "";
      if (isQArg(a) || isQPair(a)) {
        for (const char* c : consts)
          if (!used.count(std::string(c) + "s" + suffix)) return std::string(c) + "s" + suffix;
      } else if (isQFun(a)) {
        for (const char* c : funs)
          if (!used.count(c + suffix)) return c + suffix;
      } else {
        for (const char* c : consts)
          if (!used.count(c + suffix)) return c + suffix;
      }
    }
  };
  while (cur->kind == K::Pi) {
    std::string n = cur->binder.empty() ? pick(*cur->left) : cur->binder;
    used.insert(n);
    out.push_back({n, cur->left});
    cur = cur->right.get();
  }
  if (target) *target = cur;
  return out;
}

std::string indexArgs(const TypeAst& q) {
  std::string s;
  for (const auto& a : q.args) s += " " + (a.kind == TermAst::Kind::Name || a.kind == TermAst::Kind::Num ? a.str() : "(" + a.str() + ")");
  return s;
}

// A′: every occurrence of Q replaced by P′ ≝ ∑_{q : Q} P q.
std::string primeType(const TypeAst& t, const std::string& inner) {
  switch (t.kind) {
    case K::QRef: return "∑_{" + inner + " : " + typeStr(t) + "} P" + indexArgs(t) + " " + inner;
    case K::Pi: {
      std::string dom = typeStr(*t.left);
      if (t.left->kind == K::Pi || t.left->kind == K::Sigma) dom = "(" + dom + ")";
      std::string cod = primeType(*t.right, inner);
      if (!t.binder.empty() && t.right->mentionsVar(t.binder)) return "∏_{" + t.binder + " : " + dom + "} " + cod;
      return dom + " → " + cod;
    }
    case K::Sigma: {
      std::string l = primeType(*t.left, inner + "₁");
      std::string r = primeType(*t.right, inner + "₂");
      return "(" + l + ") × (" + r + ")";
    }
    default: return typeStr(t);
  }
}

// π₁ ⊳ a for an argument a : A′.
Piece leafProj(const std::string& a, const TypeAst& t) {
  switch (t.kind) {
    case K::QRef: return {"π₁ " + a, false};
    case K::Pi: return {"π₁ ∘ " + a, false};
    case K::Sigma:
      return {"(" + leafProj("π₁ " + a, *t.left).s + ", " + leafProj("π₂ " + a, *t.right).s + ")", true};
    default: return {a, true};
  }
}

// f ⊳ a for the eliminator f applied at the leaves of a : A.
Piece leafApp(const std::string& f, const std::string& a, const TypeAst& t) {
  switch (t.kind) {
    case K::QRef: return {f + indexArgs(t) + " " + a, false};
    case K::Pi: return {f + " ∘ " + a, false};
    case K::Sigma:
      return {"(" + leafApp(f, "π₁ " + a, *t.left).s + ", " + leafApp(f, "π₂ " + a, *t.right).s + ")", true};
    default: return {a, true};
  }
}

bool groupable(const Arg& a, const Arg& b) {
  return !a.type->mentionsQ() && !b.type->mentionsQ() && typeStr(*a.type) == typeStr(*b.type);
}

// ∏-prefix over arguments, constants kept and inductive ones primed.
std::string telescope(const std::vector<Arg>& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size();) {
    const Arg& a = args[i];
    if (a.type->mentionsQ()) {
      std::string inner = a.type->kind == K::QRef ? a.name : "q";
      s += "∏_{" + a.name + "' : " + primeType(*a.type, inner) + "} ";
      ++i;
      continue;
    }
    std::string names = a.name;
    std::size_t j = i + 1;
    while (j < args.size() && groupable(a, args[j])) names += " " + args[j++].name;
    s += "∏_{" + names + " : " + typeStr(*a.type) + "} ";
    i = j;
  }
  return s;
}

class Hatter {
 public:
  Hatter(const QitDecl& d, const std::vector<Arg>& vars) : d_(d) {
    for (const auto& c : d.elementCtors) ctorArgs_[c.name] = argsOf(c.type, nullptr);
    for (const auto& v : vars) vars_[v.name] = v.type;
  }

  // ⌊t⌋: the underlying Q-term, each inductive variable read through π₁.
  Piece floor(const TermAst& t) const {
    if (t.kind == TermAst::Kind::Name) {
      auto it = vars_.find(t.name);
      if (it != vars_.end() && it->second->mentionsQ()) return leafProj(t.name + "'", *it->second);
      return {t.name, true};
    }
    if (t.kind == TermAst::Kind::Compose) return {paren(floor(t.args[0])) + " ∘ " + paren(plain(t.args[1])), false};
    if (t.kind == TermAst::Kind::App) {
      std::string s = t.name;
      for (const auto& a : t.args) s += " " + paren(floor(a));
      return {s, false};
    }
    return plain(t);
  }

  // t̂ for an endpoint of type Q.
  Piece hat(const TermAst& t) const {
    if (t.kind == TermAst::Kind::Name) {
      auto it = vars_.find(t.name);
      if (it != vars_.end()) return {"π₂ " + t.name + "'", false};
      return {t.name, true};  // ĉ = h_c for a nullary constructor
    }
    if (t.kind == TermAst::Kind::App && ctorArgs_.count(t.name)) {
      const auto& as = ctorArgs_.at(t.name);
      std::string s = t.name;
      for (std::size_t i = 0; i < t.args.size() && i < as.size(); ++i) s += " " + paren(hatArg(t.args[i], *as[i].type));
      return {s, false};
    }
    return plain(t);
  }

 private:
  Piece plain(const TermAst& t) const {
    bool atomic = t.kind == TermAst::Kind::Name || t.kind == TermAst::Kind::Num || t.kind == TermAst::Kind::Unit;
    return {t.str(), atomic};
  }

  Piece hatArg(const TermAst& t, const TypeAst& type) const {
    if (!type.mentionsQ()) return plain(t);
    if (t.kind == TermAst::Kind::Name && vars_.count(t.name)) return {t.name + "'", true};
    if (type.kind == K::Pi && t.kind == TermAst::Kind::Compose)
      return {paren(hatArg(t.args[0], type)) + " ∘ " + paren(plain(t.args[1])), false};
    if (type.kind == K::QRef) return {floor(t).s + ", " + hat(t).s, false};
    return plain(t);
  }

  const QitDecl& d_;
  std::map<std::string, std::vector<Arg>> ctorArgs_;
  std::map<std::string, TypePtr> vars_;
};

std::string motiveApp(const TypeAst& q, const std::string& x) { return "P" + indexArgs(q) + " " + x; }

}  // namespace

std::string EliminatorSignature::str() const {
  std::string s = "motive    " + motive + "\n";
  for (const auto& [n, t] : steps) s += "step      " + n + " : " + t + "\n";
  for (const auto& [n, t] : coherences) s += "coherence " + n + " : " + t + "\n";
  s += "rule      " + rule + "\n";
  for (const auto& c : computations) s += "comp      " + c + "\n";
  return s;
}

EliminatorSignature deriveEliminatorSignature(const QitDecl& d) {
  EliminatorSignature e;
  std::string q = d.name;
  if (d.indexed) {
    e.motive = "P : ∏_{i : ℕ} " + q + " i → 𝓤";
  } else {
    e.motive = "P : " + q + " → 𝓤";
  }

  for (const auto& c : d.elementCtors) {
    const TypeAst* target = nullptr;
    auto args = argsOf(c.type, &target);
    std::string app = c.name;
    for (const auto& a : args) app += " " + paren(leafProj(a.name + (a.type->mentionsQ() ? "'" : ""), *a.type));
    std::string tgt = args.empty() ? c.name : "(" + app + ")";
    e.steps.push_back({c.name, telescope(args) + motiveApp(*target, tgt)});
  }

  for (const auto& c : d.equalityCtors) {
    const TypeAst* eq = nullptr;
    auto args = argsOf(c.type, &eq);
    Hatter h(d, args);
    std::string name = d.equalityCtors.size() == 1 ? "resp" : "resp_" + c.name;
    e.coherences.push_back({name, telescope(args) + h.hat(eq->lhs).s + " == " + h.hat(eq->rhs).s});
  }

  std::string elim = q + "elim";
  for (const auto& c : d.elementCtors) elim += " " + c.name;
  for (const auto& c : e.coherences) elim += " " + c.first;
  e.rule = elim + " : " + (d.indexed ? "∏_{i : ℕ} ∏_{x : " + q + " i} P i x" : "∏_{x : " + q + "} P x");

  for (const auto& c : d.elementCtors) {
    const TypeAst* target = nullptr;
    auto args = argsOf(c.type, &target);
    std::string app = c.name, rhs = c.name;
    for (const auto& a : args) {
      app += " " + a.name;
      if (a.type->mentionsQ())
        rhs += " (" + a.name + ", " + leafApp(elim, a.name, *a.type).s + ")";
      else
        rhs += " " + a.name;
    }
    std::string arg = args.empty() ? app : "(" + app + ")";
    std::string lhsIx;
    if (d.indexed) lhsIx = indexArgs(*target);
    e.computations.push_back(elim + lhsIx + " " + arg + " =_{" + motiveApp(*target, arg) + "} " + rhs);
  }
  return e;
}

}  // namespace qwi
