// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include "qwi/quotient.hpp"

#include <numeric>
#include <sstream>

#include "qwi/error.hpp"

namespace qwi {

std::optional<std::size_t> TermUniverse::find(const Term& t) const {
  auto it = index.find(t.str());
  if (it == index.end()) return std::nullopt;
  return it->second;
}

namespace {

// Deepest position (root = 1) at which variable v occurs, 0 if absent.
std::size_t varPosition(const Term& t, const std::string& v) {
  if (t.isVar()) return !t.ix() && t.name() == v ? 1 : 0;
  if (!t.isNode() || !t.children().isTabular()) return 0;
  std::size_t best = 0;
  for (const auto& c : t.children().entries) {
    std::size_t p = varPosition(c, v);
    if (p) best = std::max(best, p + 1);
  }
  return best;
}

}  // namespace

TermUniverse buildUniverse(const Signature& sig, const SystemOfEquations& sys, std::size_t depth) {
  if (!sig.finitary()) throw Error(ErrorCode::InfinitaryArity, "universe needs finite arities");
  TermUniverse u;
  u.sig = sig;
  u.sys = sys;
  u.depth = depth;
  u.terms = enumerateTerms(sig, {}, depth);
  for (std::size_t i = 0; i < u.terms.size(); ++i) {
    const Term& t = u.terms[i];
    u.index.emplace(t.str(), i);
    u.sorts.push_back(sig.op(t.opName()).target);
    std::vector<std::size_t> ks;
    for (const auto& c : t.children().entries) ks.push_back(u.index.at(c.str()));
    u.kids.push_back(std::move(ks));
  }
  std::map<std::string, std::vector<std::size_t>> bySort;
  for (std::size_t i = 0; i < u.terms.size(); ++i) bySort[u.sorts[i]].push_back(i);

  for (const auto& e : sys.equations) {
    if (e.vars.countable) throw Error(ErrorCode::InfinitaryArity, e.name + " has a countable variable family");
    const std::size_t nv = e.vars.size();
    std::vector<std::vector<std::size_t>> pools(nv);
    double total = 1;
    for (std::size_t k = 0; k < nv; ++k) {
      const auto& all = bySort[e.vars.sortOf(e.vars.names[k])];
      total *= static_cast<double>(all.size());
      std::size_t pos = std::max(varPosition(e.lhs, e.vars.names[k]), varPosition(e.rhs, e.vars.names[k]));
      for (auto id : all)
        if (pos == 0 || u.terms[id].depth() + pos - 1 <= depth) pools[k].push_back(id);
    }
    std::size_t kept = 0;
    bool empty = std::any_of(pools.begin(), pools.end(), [](const auto& p) { return p.empty(); });
    if (!empty) {
      std::vector<std::size_t> idx(nv, 0);
      while (true) {
        TermEnv env;
        for (std::size_t k = 0; k < nv; ++k) env.named[e.vars.names[k]] = u.terms[pools[k][idx[k]]];
        Term l = substitute(e.lhs, env), r = substitute(e.rhs, env);
        auto il = u.find(l), ir = u.find(r);
        if (l.depth() <= depth && r.depth() <= depth && il && ir) {
          u.instancePairs.emplace_back(*il, *ir);
          u.instanceEquation.push_back(e.name);
          ++kept;
        }
        std::size_t k = nv;
        while (k-- > 0) {
          if (++idx[k] < pools[k].size()) break;
          idx[k] = 0;
        }
        if (k == static_cast<std::size_t>(-1)) break;
      }
    }
    u.skippedInstances += static_cast<std::size_t>(total) - kept;
  }
  return u;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  std::size_t find(std::size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    p[b] = a;
    return true;
  }
};

}  // namespace

CongruenceQuotient::CongruenceQuotient(TermUniverse u) : u_(std::move(u)) {
  const std::size_t n = u_.terms.size();
  UnionFind uf(n);
  for (auto [a, b] : u_.instancePairs) uf.unite(a, b);
  // Upward closure: same operator over related children gives related nodes.
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<std::string, std::vector<std::size_t>>, std::size_t> table;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> key;
      for (auto c : u_.kids[i]) key.push_back(uf.find(c));
      auto [it, fresh] = table.emplace(std::make_pair(u_.terms[i].opName(), std::move(key)), i);
      if (!fresh && uf.unite(it->second, i)) changed = true;
    }
  }
  cls_.assign(n, 0);
  std::map<std::size_t, std::size_t> rootToClass;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, fresh] = rootToClass.emplace(uf.find(i), members_.size());
    if (fresh) members_.emplace_back();
    cls_[i] = it->second;
    members_[it->second].push_back(i);
  }
}

CongruenceQuotient closeCongruence(TermUniverse u) { return CongruenceQuotient(std::move(u)); }

std::optional<std::size_t> CongruenceQuotient::classOfTerm(const Term& t) const {
  auto i = u_.find(t);
  if (!i) return std::nullopt;
  return cls_[*i];
}

std::map<std::string, std::size_t> CongruenceQuotient::classCountBySort() const {
  std::map<std::string, std::size_t> m;
  for (std::size_t c = 0; c < classCount(); ++c) ++m[sortOfClass(c)];
  return m;
}

std::optional<std::size_t> CongruenceQuotient::qwintro(const OpDecl& op,
                                                       const std::vector<std::size_t>& childClasses) const {
  std::vector<Term> kids;
  for (auto c : childClasses) kids.push_back(canon(c));
  return classOfTerm(Term::node(op.family, op.params, std::move(kids)));
}

std::string CongruenceQuotient::dump() const {
  std::ostringstream os;
  for (std::size_t c = 0; c < classCount(); ++c)
    os << "canon " << canon(c).str() << " | members " << members_[c].size() << "\n";
  return os.str();
}

const char* verdictName(EqVerdict v) {
  switch (v) {
    case EqVerdict::Equal: return "EQUAL";
    case EqVerdict::Distinct: return "DISTINCT";
    case EqVerdict::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

EqVerdict decideEq(const CongruenceQuotient& q, const Term& a, const Term& b) {
  auto ca = q.classOfTerm(a), cb = q.classOfTerm(b);
  if (!ca || !cb) return EqVerdict::Unknown;
  return *ca == *cb ? EqVerdict::Equal : EqVerdict::Distinct;
}

HomReport checkHom(const CongruenceQuotient& q, const AlgebraSpec& alg, const std::vector<Value>& h) {
  HomReport rep;
  const TermUniverse& u = q.universe();
  for (std::size_t i = 0; i < u.terms.size(); ++i) {
    const Term& t = u.terms[i];
    std::vector<Value> xs;
    for (auto c : u.kids[i]) xs.push_back(h[q.classOf(c)]);
    ++rep.checked;
    std::optional<Value> v;
    if (alg.fin) v = alg.fin(OpRef{t.name(), t.params()}, xs);
    if (!v || *v != h[q.classOf(i)]) {
      rep.ok = false;
      rep.failure = "isHom fails at " + t.str() + ": h = " + h[q.classOf(i)].str() +
                    ", algebra gives " + (v ? v->str() : std::string("nothing"));
      return rep;
    }
  }
  return rep;
}

RecResult qwrec(const CongruenceQuotient& q, const AlgebraSpec& alg) {
  SatReport sat = satisfies(alg, q.universe().sys, EnvSource::all());
  if (sat.status == SatReport::Status::Violated)
    throw Error(ErrorCode::NotSatisfying, alg.name + " does not satisfy the system: " + sat.str());
  RecResult r;
  const TermUniverse& u = q.universe();
  std::vector<Value> perTerm(u.terms.size());
  for (std::size_t i = 0; i < u.terms.size(); ++i) {
    std::vector<Value> xs;
    for (auto c : u.kids[i]) xs.push_back(perTerm[c]);
    perTerm[i] = alg.apply(OpRef{u.terms[i].name(), u.terms[i].params()}, xs);
  }
  for (std::size_t c = 0; c < q.classCount(); ++c) {
    r.values.push_back(perTerm[q.members(c).front()]);
    for (auto m : q.members(c))
      if (perTerm[m] != r.values.back()) r.wellDefined = false;
  }
  r.hom = checkHom(q, alg, r.values);
  return r;
}

namespace {

struct Lifted {
  std::size_t cls;
  Value value;
};

std::optional<Lifted> lift(const CongruenceQuotient& q, const EliminatorInput& inp, const Term& t,
                           const std::map<std::string, Lifted>& rho) {
  if (t.isVar()) return rho.at(t.name());
  const OpDecl& op = q.universe().sig.op(t.opName());
  std::vector<std::size_t> cs;
  std::vector<Value> vs;
  for (const auto& c : t.children().entries) {
    auto l = lift(q, inp, c, rho);
    if (!l) return std::nullopt;
    cs.push_back(l->cls);
    vs.push_back(l->value);
  }
  auto k = q.qwintro(op, cs);
  if (!k) return std::nullopt;
  return Lifted{*k, inp.step(OpRef{op.family, op.params}, cs, vs)};
}

}  // namespace

CoherenceReport checkCoherence(const CongruenceQuotient& q, const EliminatorInput& inp) {
  CoherenceReport rep;
  const TermUniverse& u = q.universe();
  std::map<std::string, std::vector<std::size_t>> classesBySort;
  for (std::size_t c = 0; c < q.classCount(); ++c) classesBySort[q.sortOfClass(c)].push_back(c);

  for (const auto& e : u.sys.equations) {
    const std::size_t nv = e.vars.size();
    // Telescope environments: a class and a motive value for each variable.
    std::vector<std::vector<Lifted>> pools(nv);
    for (std::size_t k = 0; k < nv; ++k)
      for (auto c : classesBySort[e.vars.sortOf(e.vars.names[k])])
        for (auto& v : inp.motive(c)) pools[k].push_back({c, v});
    if (std::any_of(pools.begin(), pools.end(), [](const auto& p) { return p.empty(); })) continue;
    std::vector<std::size_t> idx(nv, 0);
    while (true) {
      std::map<std::string, Lifted> rho;
      for (std::size_t k = 0; k < nv; ++k) rho.emplace(e.vars.names[k], pools[k][idx[k]]);
      auto l = lift(q, inp, e.lhs, rho), r = lift(q, inp, e.rhs, rho);
      if (!l || !r) {
        ++rep.skipped;
      } else {
        ++rep.checked;
        if (l->value != r->value && rep.ok) {
          rep.ok = false;
          std::ostringstream os;
          os << e.name << " {";
          for (std::size_t k = 0; k < nv; ++k)
            os << (k ? ", " : "") << e.vars.names[k] << " -> (" << q.canon(pools[k][idx[k]].cls).str() << ", "
               << pools[k][idx[k]].value.str() << ")";
          os << "}: lift lhs = " << l->value.str() << ", lift rhs = " << r->value.str();
          rep.witness = os.str();
          return rep;
        }
      }
      std::size_t k = nv;
      while (k-- > 0) {
        if (++idx[k] < pools[k].size()) break;
        idx[k] = 0;
      }
      if (k == static_cast<std::size_t>(-1)) break;
    }
  }
  return rep;
}

ElimResult qwelim(const CongruenceQuotient& q, const EliminatorInput& inp) {
  ElimResult r;
  r.coherence = checkCoherence(q, inp);
  if (!r.coherence.ok) throw Error(ErrorCode::CoherenceFailure, r.coherence.witness);
  const TermUniverse& u = q.universe();
  // Telescope algebra β(a, b) = (qwintro(a, π₁∘b), p a (π₁∘b) (π₂∘b)), folded
  // over every universe term.
  std::vector<Value> perTerm(u.terms.size());
  for (std::size_t i = 0; i < u.terms.size(); ++i) {
    std::vector<std::size_t> cs;
    std::vector<Value> vs;
    for (auto c : u.kids[i]) {
      cs.push_back(q.classOf(c));
      vs.push_back(perTerm[c]);
    }
    perTerm[i] = inp.step(OpRef{u.terms[i].name(), u.terms[i].params()}, cs, vs);
  }
  for (std::size_t c = 0; c < q.classCount(); ++c) {
    r.values.push_back(perTerm[q.members(c).front()]);
    for (auto m : q.members(c))
      if (perTerm[m] != r.values.back())
        throw Error(ErrorCode::CoherenceFailure, "eliminator differs on " + q.canon(c).str() + " and " +
                                                     u.terms[m].str());
  }
  // qwcomp: qwelim(qwintro(a, b)) = p a b (qwelim ∘ b) at every node.
  for (std::size_t i = 0; i < u.terms.size(); ++i) {
    std::vector<std::size_t> cs;
    std::vector<Value> vs;
    for (auto c : u.kids[i]) {
      cs.push_back(q.classOf(c));
      vs.push_back(r.values[q.classOf(c)]);
    }
    const OpDecl& op = u.sig.op(u.terms[i].opName());
    auto k = q.qwintro(op, cs);
    ++r.compChecked;
    if (!k || r.values[*k] != inp.step(OpRef{op.family, op.params}, cs, vs)) {
      r.compHolds = false;
      if (r.compFailure.empty()) r.compFailure = "qwcomp fails at " + u.terms[i].str();
    }
  }
  return r;
}

UniqReport qwuniqCheck(const CongruenceQuotient& q, const AlgebraSpec& alg, const std::vector<Value>& h) {
  UniqReport rep;
  rep.hom = checkHom(q, alg, h);
  if (!rep.hom.ok) {
    rep.discrepancy = rep.hom.failure;
    return rep;
  }
  RecResult rec = qwrec(q, alg);
  rep.equalsRec = true;
  for (std::size_t c = 0; c < q.classCount(); ++c)
    if (h[c] != rec.values[c]) {
      rep.equalsRec = false;
      rep.discrepancy = "hom differs from qwrec at " + q.canon(c).str();
      break;
    }
  return rep;
}

}  // namespace qwi
