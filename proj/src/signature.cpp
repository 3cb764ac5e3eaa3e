// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include "qwi/signature.hpp"

#include <algorithm>
#include <set>

#include "qwi/error.hpp"

namespace qwi {

const char* errorName(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnknownOp: return "UnknownOp";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::PartialAlgebra: return "PartialAlgebra";
    case ErrorCode::InfeasibleExhaustive: return "InfeasibleExhaustive";
    case ErrorCode::InfinitaryArity: return "InfinitaryArity";
    case ErrorCode::NameClash: return "NameClash";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnsupportedParameterType: return "UnsupportedParameterType";
    case ErrorCode::NotSatisfying: return "NotSatisfying";
    case ErrorCode::CoherenceFailure: return "CoherenceFailure";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::FunctorialityViolation: return "FunctorialityViolation";
    case ErrorCode::StageOverflow: return "StageOverflow";
    case ErrorCode::NotStabilized: return "NotStabilized";
    case ErrorCode::Usage: return "Usage";
  }
  return "Error";
}

const std::string& OpDecl::childSort(std::size_t x) const {
  static const std::string none;
  if (childSorts.empty()) return none;
  if (arity.isNat()) return childSorts.front();
  return childSorts.at(x);
}

Signature::Signature(std::vector<OpDecl> ops, std::vector<std::string> sorts)
    : ops_(std::move(ops)), sorts_(std::move(sorts)) {
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    auto [it, fresh] = byName_.emplace(ops_[i].name(), i);
    if (!fresh) throw Error(ErrorCode::NameClash, "duplicate operator " + ops_[i].name());
  }
}

std::optional<std::size_t> Signature::find(const std::string& instanceName) const {
  auto it = byName_.find(instanceName);
  if (it == byName_.end()) return std::nullopt;
  return it->second;
}

const OpDecl& Signature::op(const std::string& instanceName) const { return ops_[index(instanceName)]; }

std::size_t Signature::index(const std::string& instanceName) const {
  auto i = find(instanceName);
  if (!i) throw Error(ErrorCode::UnknownOp, instanceName);
  return *i;
}

bool Signature::finitary() const {
  for (const auto& o : ops_)
    if (o.arity.isNat()) return false;
  return true;
}

Signature IndexedSignature::toSignature() const {
  std::vector<OpDecl> out;
  for (const auto& o : ops) {
    OpDecl d;
    d.family = o.family;
    d.params = o.params;
    d.target = o.target;
    std::size_t n = 0;
    bool nat = false;
    for (const auto& ix : indices) {
      auto it = o.aritiesPerIndex.find(ix);
      if (it == o.aritiesPerIndex.end()) continue;
      if (it->second.isNat()) {
        if (nat || n) throw Error(ErrorCode::ArityMismatch, "mixed NAT arity in " + d.name());
        nat = true;
        d.childSorts.push_back(ix);
        continue;
      }
      if (nat) throw Error(ErrorCode::ArityMismatch, "mixed NAT arity in " + d.name());
      for (std::size_t k = 0; k < it->second.n; ++k) d.childSorts.push_back(ix);
      n += it->second.n;
    }
    for (const auto& [ix, a] : o.aritiesPerIndex) {
      (void)a;
      if (std::find(indices.begin(), indices.end(), ix) == indices.end())
        throw Error(ErrorCode::UnknownOp, "undeclared index " + ix);
    }
    d.arity = nat ? Arity::nat() : Arity::fin(n);
    out.push_back(std::move(d));
  }
  return Signature(std::move(out), indices);
}

VarFamily VarFamily::named(std::vector<std::string> ns, std::vector<std::string> ss) {
  VarFamily v;
  if (ss.empty()) ss.assign(ns.size(), "");
  v.names = std::move(ns);
  v.sorts = std::move(ss);
  return v;
}

VarFamily VarFamily::fin(std::size_t n) {
  std::vector<std::string> ns;
  for (std::size_t i = 0; i < n; ++i) ns.push_back(std::to_string(i));
  return named(std::move(ns));
}

VarFamily VarFamily::nat(std::string family, std::string sort) {
  VarFamily v;
  v.countable = true;
  v.familyName = std::move(family);
  v.sorts = {std::move(sort)};
  return v;
}

std::string VarFamily::display() const {
  if (!label.empty()) return label;
  if (countable) return "ℕ";
  if (names.empty()) return "𝟘";
  if (names.size() == 1) return "𝟙";
  std::string s = "{";
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
  return s + "}";
}

std::string VarFamily::sortOf(const std::string& name) const {
  if (countable) return sorts.empty() ? "" : sorts.front();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return sorts.empty() ? "" : sorts[i];
  throw Error(ErrorCode::UnboundVariable, name);
}

Term mkNode(const Signature& sig, const std::string& family, const std::vector<std::string>& params,
            ArityMap children) {
  const OpDecl& d = sig.op(opInstanceName(family, params));
  if (d.arity.isNat()) {
    if (children.isTabular())
      throw Error(ErrorCode::ArityMismatch, d.name() + " has NAT arity; tabular children given");
  } else {
    if (!children.isTabular())
      throw Error(ErrorCode::ArityMismatch, d.name() + " has finite arity; comprehension given");
    if (children.entries.size() != d.arity.n)
      throw Error(ErrorCode::ArityMismatch, d.name() + " expects " + std::to_string(d.arity.n) +
                                                " children, got " + std::to_string(children.entries.size()));
  }
  return Term::node(family, params, std::move(children));
}

Term mkNode(const Signature& sig, const std::string& instanceName, ArityMap children) {
  const OpDecl& d = sig.op(instanceName);
  return mkNode(sig, d.family, d.params, std::move(children));
}

namespace {

void checkMap(const Signature& sig, const ArityMap& m, const VarFamily* vars, const OpDecl& d);

void checkTermRec(const Signature& sig, const Term& t, const VarFamily* vars) {
  switch (t.kind()) {
    case Term::Kind::Var:
      if (vars) {
        if (t.ix()) {
          if (!vars->countable || vars->familyName != t.name())
            throw Error(ErrorCode::UnboundVariable, t.str());
        } else if (vars->countable || std::find(vars->names.begin(), vars->names.end(), t.name()) ==
                                          vars->names.end()) {
          throw Error(ErrorCode::UnboundVariable, t.name());
        }
      }
      return;
    case Term::Kind::Family: return;
    case Term::Kind::Node: {
      const OpDecl& d = sig.op(t.opName());
      if (d.arity.isNat() == t.children().isTabular())
        throw Error(ErrorCode::ArityMismatch, "children kind of " + d.name());
      if (!d.arity.isNat() && t.children().entries.size() != d.arity.n)
        throw Error(ErrorCode::ArityMismatch, "child count of " + d.name());
      checkMap(sig, t.children(), vars, d);
      return;
    }
  }
}

void checkMap(const Signature& sig, const ArityMap& m, const VarFamily* vars, const OpDecl& d) {
  switch (m.kind) {
    case ArityMap::Kind::Tabular:
      for (const auto& c : m.entries) checkTermRec(sig, c, vars);
      return;
    case ArityMap::Kind::Comprehension: checkTermRec(sig, *m.body, vars); return;
    case ArityMap::Kind::Union:
      checkMap(sig, m.parts[0], vars, d);
      checkMap(sig, m.parts[1], vars, d);
      return;
  }
}

}  // namespace

void checkTerm(const Signature& sig, const Term& t, const VarFamily* vars) { checkTermRec(sig, t, vars); }

void checkSystem(const Signature& sig, const SystemOfEquations& sys) {
  std::set<std::string> seen;
  for (const auto& e : sys.equations) {
    if (!seen.insert(e.name).second) throw Error(ErrorCode::NameClash, "duplicate equation " + e.name);
    checkTerm(sig, e.lhs, &e.vars);
    checkTerm(sig, e.rhs, &e.vars);
  }
}

std::string sortOf(const Signature& sig, const Term& t, const VarFamily* vars) {
  if (t.isNode()) return sig.op(t.opName()).target;
  if (t.isVar() && vars) return vars->sortOf(t.name());
  return "";
}

std::pair<Signature, SystemOfEquations> freeAlgebraSignature(const Signature& sig,
                                                             const SystemOfEquations& sys,
                                                             const std::vector<std::string>& gens) {
  std::vector<OpDecl> ops;
  std::set<std::string> names;
  for (const auto& o : sig.ops()) names.insert(o.name());
  for (const auto& g : gens) {
    if (names.count(g)) throw Error(ErrorCode::NameClash, "generator " + g + " clashes with an operator");
    OpDecl d;
    d.family = g;
    d.arity = Arity::fin(0);
    if (sig.sorted()) d.target = sig.sorts().front();
    ops.push_back(d);
  }
  for (const auto& o : sig.ops()) ops.push_back(o);
  // l_X e = l e ⋙ η: variables stay variables and nodes keep their operator.
  return {Signature(std::move(ops), sig.sorts()), sys};
}

}  // namespace qwi
