// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include "qwi/algebra.hpp"

#include <random>
#include <sstream>

#include "qwi/error.hpp"

namespace qwi {

AlgebraSpec AlgebraSpec::table(std::string name, std::vector<Value> carrier,
                               std::map<std::pair<std::string, std::vector<Value>>, Value> entries) {
  AlgebraSpec a;
  a.name = std::move(name);
  a.carrier = std::move(carrier);
  auto tbl = std::make_shared<const std::map<std::pair<std::string, std::vector<Value>>, Value>>(std::move(entries));
  a.fin = [tbl](const OpRef& op, const std::vector<Value>& xs) -> std::optional<Value> {
    auto it = tbl->find({op.name(), xs});
    if (it == tbl->end()) return std::nullopt;
    return it->second;
  };
  return a;
}

Value AlgebraSpec::apply(const OpRef& op, const std::vector<Value>& children) const {
  if (!fin) throw Error(ErrorCode::PartialAlgebra, "no interpretation for " + op.name());
  auto v = fin(op, children);
  if (!v) {
    std::string args;
    for (const auto& c : children) args += " " + c.str();
    throw Error(ErrorCode::PartialAlgebra, "no interpretation for (" + op.name() + args + ")");
  }
  return *v;
}

Value Env::lookup(const std::string& name) const {
  auto it = named.find(name);
  if (it == named.end()) throw Error(ErrorCode::UnboundVariable, name);
  return it->second;
}

Value Env::lookup(const std::string& family, std::uint64_t n) const {
  auto it = named.find(indexedVarKey(family, n));
  if (it != named.end()) return it->second;
  if (indexed) {
    if (auto v = indexed(family, n)) return *v;
  }
  throw Error(ErrorCode::UnboundVariable, indexedVarKey(family, n));
}

Value bind(const Term& t, const Env& env, const AlgebraSpec& alg, const IndexEnv& ix) {
  switch (t.kind()) {
    case Term::Kind::Var:
      if (t.ix()) return env.lookup(t.name(), ix.eval(*t.ix()));
      return env.lookup(t.name());
    case Term::Kind::Family: {
      std::vector<std::uint64_t> args;
      for (const auto& a : t.familyArgs()) args.push_back(ix.eval(a));
      return bind(ix.family(t.name())(args), env, alg, ix);
    }
    case Term::Kind::Node: {
      OpRef op{t.name(), t.params()};
      if (t.children().isTabular()) {
        std::vector<Value> vs;
        vs.reserve(t.children().entries.size());
        for (const auto& c : t.children().entries) vs.push_back(bind(c, env, alg, ix));
        return alg.apply(op, vs);
      }
      if (!alg.nat) throw Error(ErrorCode::PartialAlgebra, "no NAT rule for " + op.name());
      auto child = [&](std::uint64_t n) { return bind(t.child(n, ix), env, alg, ix); };
      auto v = alg.nat(op, child);
      if (!v) throw Error(ErrorCode::PartialAlgebra, "no NAT rule for " + op.name());
      return *v;
    }
  }
  throw Error(ErrorCode::PartialAlgebra, "bad term");
}

namespace {

ArityMap substituteMap(const ArityMap& m, const TermEnv& env);

bool closedIx(const IndexExpr& e) {
  if (e.kind == IndexExpr::Kind::Var) return false;
  for (const auto& a : e.args)
    if (!closedIx(a)) return false;
  return true;
}

}  // namespace

Term substitute(const Term& t, const TermEnv& env) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      if (!t.ix()) {
        auto it = env.named.find(t.name());
        if (it == env.named.end()) throw Error(ErrorCode::UnboundVariable, t.name());
        return it->second;
      }
      auto ft = env.families.find(t.name());
      if (ft != env.families.end()) return ft->second.second.substIndex(ft->second.first, *t.ix());
      if (closedIx(*t.ix())) {
        auto it = env.named.find(indexedVarKey(t.name(), IndexEnv::builtin().eval(*t.ix())));
        if (it != env.named.end()) return it->second;
      }
      throw Error(ErrorCode::UnboundVariable, t.str());
    }
    case Term::Kind::Family: return t;
    case Term::Kind::Node: return Term::node(t.name(), t.params(), substituteMap(t.children(), env));
  }
  return t;
}

namespace {

ArityMap substituteMap(const ArityMap& m, const TermEnv& env) {
  switch (m.kind) {
    case ArityMap::Kind::Tabular: {
      std::vector<Term> ts;
      ts.reserve(m.entries.size());
      for (const auto& c : m.entries) ts.push_back(substitute(c, env));
      return ArityMap::tabular(std::move(ts));
    }
    case ArityMap::Kind::Comprehension: return ArityMap::comprehension(m.indexVar, substitute(*m.body, env));
    case ArityMap::Kind::Union:
      return ArityMap::unite(substituteMap(m.parts[0], env), substituteMap(m.parts[1], env));
  }
  return m;
}

ArityMap mapMap(const ArityMap& m, const std::function<std::string(const std::string&)>& f);

}  // namespace

Term mapTerm(const Term& t, const std::function<std::string(const std::string&)>& f) {
  switch (t.kind()) {
    case Term::Kind::Var: return t.ix() ? Term::ixVar(f(t.name()), *t.ix()) : Term::var(f(t.name()));
    case Term::Kind::Family: return t;
    case Term::Kind::Node: return Term::node(t.name(), t.params(), mapMap(t.children(), f));
  }
  return t;
}

namespace {

ArityMap mapMap(const ArityMap& m, const std::function<std::string(const std::string&)>& f) {
  switch (m.kind) {
    case ArityMap::Kind::Tabular: {
      std::vector<Term> ts;
      for (const auto& c : m.entries) ts.push_back(mapTerm(c, f));
      return ArityMap::tabular(std::move(ts));
    }
    case ArityMap::Kind::Comprehension: return ArityMap::comprehension(m.indexVar, mapTerm(*m.body, f));
    case ArityMap::Kind::Union: return ArityMap::unite(mapMap(m.parts[0], f), mapMap(m.parts[1], f));
  }
  return m;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string SatReport::str() const {
  std::ostringstream os;
  switch (status) {
    case Status::Satisfied: os << "SATISFIED (" << checked << " environments)"; break;
    case Status::Sampled: os << "SAMPLED(" << checked << ")"; break;
    case Status::Violated: {
      os << "VIOLATED " << equation << " {";
      bool first = true;
      for (const auto& [k, v] : env) {
        os << (first ? "" : ", ") << k << " -> " << v.str();
        first = false;
      }
      os << "}";
      break;
    }
  }
  return os.str();
}

SatReport satisfies(const AlgebraSpec& alg, const SystemOfEquations& sys, const EnvSource& src,
                    const Signature* sig) {
  (void)sig;
  SatReport rep;
  bool sampled = false;
  IndexEnv ix = IndexEnv::builtin().merged(sys.index);
  constexpr std::size_t kExhaustiveLimit = 10'000'000;

  for (const auto& e : sys.equations) {
    auto check = [&](const Env& env) -> bool {
      ++rep.checked;
      Value l = bind(e.lhs, env, alg, ix);
      Value r = bind(e.rhs, env, alg, ix);
      if (l == r) return true;
      rep.status = SatReport::Status::Violated;
      rep.equation = e.name;
      rep.env = env.named;
      if (env.indexed) {
        for (std::uint64_t n = 0; n < 4; ++n)
          if (auto v = env.indexed(e.vars.familyName, n)) rep.env[indexedVarKey(e.vars.familyName, n)] = *v;
      }
      return false;
    };
    const bool needSampling = e.vars.countable || !alg.carrier;
    if (needSampling && src.exhaustive)
      throw Error(ErrorCode::InfeasibleExhaustive,
                  "equation " + e.name + (e.vars.countable ? " has a countable variable family"
                                                           : ": carrier is not finite"));
    if (!alg.carrier) throw Error(ErrorCode::InfeasibleExhaustive, "no finite carrier to draw environments from");
    const auto& C = *alg.carrier;
    if (C.empty()) {
      if (e.vars.countable || e.vars.size() > 0) continue;  // no environments at all
    }

    if (src.exhaustive) {
      std::size_t total = 1;
      for (std::size_t i = 0; i < e.vars.size(); ++i) {
        if (total > kExhaustiveLimit / std::max<std::size_t>(C.size(), 1))
          throw Error(ErrorCode::InfeasibleExhaustive, "too many environments for " + e.name);
        total *= C.size();
      }
      std::vector<std::size_t> idx(e.vars.size(), 0);
      for (std::size_t k = 0; k < total; ++k) {
        Env env;
        for (std::size_t i = 0; i < idx.size(); ++i) env.named[e.vars.names[i]] = C[idx[i]];
        if (!check(env)) return rep;
        for (std::size_t i = idx.size(); i-- > 0;) {
          if (++idx[i] < C.size()) break;
          idx[i] = 0;
        }
      }
      continue;
    }

    sampled = true;
    std::mt19937_64 rng(src.seed);
    for (std::size_t s = 0; s < src.samples; ++s) {
      Env env;
      for (const auto& v : e.vars.names) env.named[v] = C[rng() % C.size()];
      if (e.vars.countable) {
        std::uint64_t salt = rng();
        env.indexed = [&C, salt](const std::string&, std::uint64_t n) -> std::optional<Value> {
          return C[splitmix(salt ^ splitmix(n)) % C.size()];
        };
      }
      if (!check(env)) return rep;
    }
  }
  rep.status = sampled ? SatReport::Status::Sampled : SatReport::Status::Satisfied;
  return rep;
}

int compareTerms(const Signature& sig, const Term& a, const Term& b) {
  if (a == b) return 0;
  if (a.depth() != b.depth()) return a.depth() < b.depth() ? -1 : 1;
  auto rank = [](Term::Kind k) { return k == Term::Kind::Var ? 0 : k == Term::Kind::Family ? 1 : 2; };
  if (a.kind() != b.kind()) return rank(a.kind()) < rank(b.kind()) ? -1 : 1;
  if (a.kind() == Term::Kind::Node) {
    auto ia = sig.find(a.opName()), ib = sig.find(b.opName());
    std::size_t ra = ia ? *ia : sig.ops().size(), rb = ib ? *ib : sig.ops().size();
    if (ra != rb) return ra < rb ? -1 : 1;
    if (!ia && a.opName() != b.opName()) return a.opName() < b.opName() ? -1 : 1;
    const ArityMap& ma = a.children();
    const ArityMap& mb = b.children();
    if (ma.isTabular() && mb.isTabular() && ma.entries.size() == mb.entries.size()) {
      for (std::size_t i = 0; i < ma.entries.size(); ++i)
        if (int c = compareTerms(sig, ma.entries[i], mb.entries[i])) return c;
      return 0;
    }
  }
  return a.str() < b.str() ? -1 : 1;
}

std::vector<Term> enumerateTerms(const Signature& sig, const std::vector<VarDecl>& vars, std::size_t depth) {
  for (const auto& o : sig.ops())
    if (o.arity.isNat()) throw Error(ErrorCode::InfinitaryArity, o.name() + " has NAT arity");
  std::vector<Term> all;
  if (depth == 0) return all;
  // upTo[s]: terms of sort s with depth ≤ current level - 1, paired with depth.
  std::map<std::string, std::vector<Term>> bySort;
  std::vector<Term> level;
  for (const auto& v : vars) level.push_back(Term::var(v.name));
  for (const auto& o : sig.ops())
    if (o.arity.n == 0) level.push_back(Term::leaf(o.family, o.params));
  auto sortOfTerm = [&](const Term& t) -> std::string {
    if (t.isNode()) return sig.op(t.opName()).target;
    for (const auto& v : vars)
      if (v.name == t.name()) return v.sort;
    return "";
  };
  for (std::size_t d = 1;; ++d) {
    for (const auto& t : level) {
      bySort[sortOfTerm(t)].push_back(t);
      all.push_back(t);
    }
    if (d == depth) break;
    // Nodes of depth exactly d+1: every child has depth ≤ d and one has depth d.
    std::vector<Term> next;
    for (const auto& o : sig.ops()) {
      std::size_t n = o.arity.n;
      if (n == 0) continue;
      std::vector<const std::vector<Term>*> pools;
      bool empty = false;
      for (std::size_t x = 0; x < n; ++x) {
        auto it = bySort.find(o.childSort(x));
        if (it == bySort.end() || it->second.empty()) {
          empty = true;
          break;
        }
        pools.push_back(&it->second);
      }
      if (empty) continue;
      std::vector<std::size_t> idx(n, 0);
      while (true) {
        std::size_t maxd = 0;
        std::vector<Term> kids;
        kids.reserve(n);
        for (std::size_t x = 0; x < n; ++x) {
          kids.push_back((*pools[x])[idx[x]]);
          maxd = std::max(maxd, kids.back().depth());
        }
        if (maxd == d) next.push_back(Term::node(o.family, o.params, std::move(kids)));
        std::size_t x = n;
        while (x-- > 0) {
          if (++idx[x] < pools[x]->size()) break;
          idx[x] = 0;
        }
        if (x == static_cast<std::size_t>(-1)) break;
      }
    }
    if (next.empty()) break;
    level = std::move(next);
  }
  std::stable_sort(all.begin(), all.end(),
                   [&](const Term& a, const Term& b) { return compareTerms(sig, a, b) < 0; });
  return all;
}

}  // namespace qwi
