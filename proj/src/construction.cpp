// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include "qwi/construction.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace qwi {

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

std::string leafName(std::size_t x) { return std::to_string(x); }
std::size_t leafId(const Term& t) { return std::stoul(t.name()); }
std::string pairKey(std::size_t j, const Term& t) { return std::to_string(j) + "|" + t.str(); }

struct Candidate {
  Term term;
  std::size_t depth;
  std::string sort;
};

// T_Σ over the elements of a stage, flattened depth ≤ d.
std::vector<Candidate> enumerateOver(const Signature& sig, const Stage& below, std::size_t d) {
  std::vector<Candidate> prev;
  for (std::size_t k = 1; k <= d; ++k) {
    std::vector<Candidate> cur;
    for (std::size_t x = 0; x < below.size(); ++x)
      if (below.depth[x] <= k) cur.push_back({Term::var(leafName(x)), below.depth[x], below.sort[x]});
    for (const auto& op : sig.ops()) {
      std::size_t n = op.arity.n;
      std::vector<std::vector<const Candidate*>> pools(n);
      bool empty = false;
      for (std::size_t c = 0; c < n; ++c) {
        for (const auto& p : prev)
          if (p.sort == op.childSort(c)) pools[c].push_back(&p);
        if (pools[c].empty()) empty = true;
      }
      if (empty) continue;
      std::vector<std::size_t> idx(n, 0);
      while (true) {
        std::vector<Term> kids;
        std::size_t dep = 0;
        for (std::size_t c = 0; c < n; ++c) {
          kids.push_back(pools[c][idx[c]]->term);
          dep = std::max(dep, pools[c][idx[c]]->depth);
        }
        cur.push_back({Term::node(op.family, op.params, std::move(kids)), dep + 1, op.target});
        std::size_t c = n;
        while (c-- > 0) {
          if (++idx[c] < pools[c].size()) break;
          idx[c] = 0;
        }
        if (c == static_cast<std::size_t>(-1)) break;
      }
    }
    prev = std::move(cur);
  }
  return prev;
}

Term flatten(const Term& t, const Stage& below) {
  if (t.isVar()) return below.flat[leafId(t)];
  std::vector<Term> kids;
  for (const auto& c : t.children().entries) kids.push_back(flatten(c, below));
  return Term::node(t.name(), t.params(), std::move(kids));
}

Term relabel(const Term& t, const std::function<std::size_t(std::size_t)>& f) {
  if (t.isVar()) return Term::var(leafName(f(leafId(t))));
  std::vector<Term> kids;
  for (const auto& c : t.children().entries) kids.push_back(relabel(c, f));
  return Term::node(t.name(), t.params(), std::move(kids));
}

void requireFinitary(const Signature& sig, const SystemOfEquations& sys) {
  for (const auto& o : sig.ops())
    if (o.arity.isNat()) throw Error(ErrorCode::InfinitaryArity, o.name() + " has NAT arity");
  for (const auto& e : sys.equations)
    if (e.vars.countable) throw Error(ErrorCode::InfinitaryArity, e.name + " has a countable variable family");
}

}  // namespace

std::optional<std::size_t> Stage::find(std::size_t j, const Term& t) const {
  auto it = poolIndex.find(pairKey(j, t));
  if (it == poolIndex.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Stage::classOf(std::size_t j, const Term& t) const {
  auto p = find(j, t);
  if (!p) return std::nullopt;
  return classOfPair[*p];
}

bool Stage::sameAs(const Stage& o) const {
  if (pool.size() != o.pool.size() || classOfPair != o.classOfPair) return false;
  for (std::size_t p = 0; p < pool.size(); ++p)
    if (pool[p].stage != o.pool[p].stage || pool[p].term != o.pool[p].term) return false;
  return true;
}

Stage diamond(const Signature& sig, const SystemOfEquations& sys, const SizeUniverse& u, std::size_t i,
              const StageLookup& below, std::size_t depth) {
  requireFinitary(sig, sys);
  Stage s;
  std::vector<std::string> poolSort;
  const auto& js = u.below(i);
  for (std::size_t j : js) {
    for (auto& c : enumerateOver(sig, below(j), depth)) {
      s.poolIndex.emplace(pairKey(j, c.term), s.pool.size());
      s.pool.push_back({j, std::move(c.term), c.depth});
      poolSort.push_back(std::move(c.sort));
    }
  }
  UnionFind uf(s.pool.size());

  // Clause 1: (j, T ρ (l e)) ~ (j, T ρ (r e)) for ρ : V e → D_j.
  for (std::size_t j : js) {
    const Stage& dj = below(j);
    for (const auto& e : sys.equations) {
      const auto& names = e.vars.names;
      std::vector<std::vector<std::size_t>> cands(names.size());
      bool empty = false;
      for (std::size_t v = 0; v < names.size(); ++v) {
        std::string so = e.vars.sortOf(names[v]);
        for (std::size_t x = 0; x < dj.size(); ++x)
          if (dj.sort[x] == so) cands[v].push_back(x);
        if (cands[v].empty()) empty = true;
      }
      if (empty) continue;
      std::vector<std::size_t> idx(names.size(), 0);
      while (true) {
        TermEnv env;
        for (std::size_t v = 0; v < names.size(); ++v) env.named[names[v]] = Term::var(leafName(cands[v][idx[v]]));
        auto l = s.find(j, substitute(e.lhs, env));
        auto r = s.find(j, substitute(e.rhs, env));
        if (l && r) {
          uf.unite(*l, *r);
          s.instances.push_back({*l, *r});
          s.instanceEquation.push_back(e.name);
        }
        std::size_t v = names.size();
        while (v-- > 0) {
          if (++idx[v] < cands[v].size()) break;
          idx[v] = 0;
        }
        if (v == static_cast<std::size_t>(-1)) break;
      }
    }
  }

  std::vector<std::vector<std::size_t>> childIds(s.pool.size());
  for (std::size_t p = 0; p < s.pool.size(); ++p) {
    const auto& [j, t, dep] = s.pool[p];
    if (t.isVar()) {
      // Clause 2: (j, η(τ_{k,j} t′)) ~ (k, t′).
      const Stage& dj = below(j);
      for (std::size_t m : dj.members[leafId(t)]) {
        auto q = s.find(dj.pool[m].stage, dj.pool[m].term);
        if (q) uf.unite(p, *q);
      }
      continue;
    }
    for (const auto& c : t.children().entries) childIds[p].push_back(*s.find(j, c));
    // Clause 3: (k, σ(a,b)) ~ (j, σ(a, η∘τ_{k,j}∘b)) for k < j.
    for (std::size_t j2 : js) {
      if (!u.lt(j, j2)) continue;
      const Stage& dj2 = below(j2);
      std::vector<Term> kids;
      for (const auto& c : t.children().entries) kids.push_back(Term::var(leafName(*dj2.classOf(j, c))));
      auto q = s.find(j2, Term::node(t.name(), t.params(), std::move(kids)));
      if (q) uf.unite(p, *q);
    }
  }

  // Congruence within each T_Σ D_j.
  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::pair<std::string, std::vector<std::size_t>>, std::size_t> table;
    for (std::size_t p = 0; p < s.pool.size(); ++p) {
      const auto& t = s.pool[p].term;
      if (t.isVar()) continue;
      std::vector<std::size_t> key{s.pool[p].stage};
      for (auto c : childIds[p]) key.push_back(uf.find(c));
      auto [it, fresh] = table.emplace(std::make_pair(t.opName(), key), p);
      if (!fresh && uf.unite(it->second, p)) changed = true;
    }
  }

  std::map<std::size_t, std::size_t> number;
  s.classOfPair.resize(s.pool.size());
  for (std::size_t p = 0; p < s.pool.size(); ++p) {
    auto [it, fresh] = number.emplace(uf.find(p), number.size());
    std::size_t c = it->second;
    s.classOfPair[p] = c;
    if (fresh) {
      s.members.emplace_back();
      s.depth.push_back(s.pool[p].depth);
      s.sort.push_back(poolSort[p]);
      s.flat.push_back(flatten(s.pool[p].term, below(s.pool[p].stage)));
    }
    s.members[c].push_back(p);
    Term f = flatten(s.pool[p].term, below(s.pool[p].stage));
    if (s.pool[p].depth < s.depth[c] || compareTerms(sig, f, s.flat[c]) < 0) s.flat[c] = f;
    s.depth[c] = std::min(s.depth[c], s.pool[p].depth);
  }
  return s;
}

std::optional<std::size_t> Approximation::tau(std::size_t j, std::size_t i, const Term& t) const {
  if (!universe->lt(j, i)) return std::nullopt;
  return stages[i].classOf(j, t);
}

std::size_t Approximation::delta(std::size_t i, std::size_t j, std::size_t x) const {
  auto c = stages[j].classOf(i, Term::var(leafName(x)));
  if (!c)
    throw Error(ErrorCode::FunctorialityViolation,
                "δ undefined at " + universe->member(i).str() + " → " + universe->member(j).str());
  return *c;
}

Diagram Approximation::diagram() const {
  Diagram d;
  d.universe = universe;
  for (const auto& s : stages) d.sizes.push_back(s.size());
  for (std::size_t i = 0; i < universe->size(); ++i)
    for (std::size_t j = 0; j < universe->size(); ++j)
      if (universe->lt(i, j)) {
        std::vector<std::size_t> m;
        for (std::size_t x = 0; x < stages[i].size(); ++x) m.push_back(delta(i, j, x));
        d.maps[{i, j}] = std::move(m);
      }
  return d;
}

std::string Approximation::dump() const {
  std::string s;
  for (std::size_t i = 0; i < stages.size(); ++i)
    s += "stage " + universe->member(i).str() + ": " + std::to_string(stages[i].size()) + "\n";
  return s;
}

Json Approximation::toJson() const {
  Json j;
  j["depth"] = depth;
  j["height"] = universe->height();
  Json st = Json::array();
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const Stage& s = stages[i];
    Json cls = Json::array();
    for (std::size_t c = 0; c < s.size(); ++c) {
      Json e;
      e["canon"] = s.flat[c].str();
      if (!s.sort[c].empty()) e["sort"] = s.sort[c];
      e["pairs"] = s.members[c].size();
      cls.push_back(e);
    }
    Json e;
    e["size"] = universe->member(i).str();
    e["classes"] = s.size();
    e["pool"] = s.pool.size();
    e["elements"] = cls;
    st.push_back(e);
  }
  j["stages"] = st;
  return j;
}

Approximation buildFixedPoint(const Signature& sig, const SystemOfEquations& sys,
                              std::shared_ptr<const SizeUniverse> u, std::size_t depth) {
  requireFinitary(sig, sys);
  Approximation a;
  a.sig = sig;
  a.sys = sys;
  a.depth = depth;
  a.universe = u;
  WfStep<Stage> step = [&](std::size_t i, const std::function<const Stage&(std::size_t)>& get) {
    return diamond(sig, sys, *u, i, get, depth);
  };
  a.stages = wfRec<Stage>(*u, step);
  return a;
}

FixedPointReport checkFixedPoint(const Approximation& a) {
  FixedPointReport r;
  const SizeUniverse& u = *a.universe;
  auto fail = [&](bool& flag, const std::string& m) {
    flag = false;
    if (r.failure.empty()) r.failure = m;
  };
  auto global = [&](std::size_t j) -> const Stage& { return a.stages[j]; };

  for (std::size_t i = 0; i < u.size(); ++i)
    if (!diamond(a.sig, a.sys, u, i, global, a.depth).sameAs(a.stages[i]))
      fail(r.uptoLaw, "D_i ≠ ◇_i(D(↓i)) at " + u.member(i).str());

  // Upto-i fixed points rebuilt on demand from i downwards.
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::map<std::size_t, Stage> memo;
    std::function<const Stage&(std::size_t)> upto = [&](std::size_t j) -> const Stage& {
      auto it = memo.find(j);
      if (it != memo.end()) return it->second;
      Stage s = diamond(a.sig, a.sys, u, j, upto, a.depth);
      return memo.emplace(j, std::move(s)).first->second;
    };
    const auto& bs = u.below(i);
    for (auto it = bs.rbegin(); it != bs.rend(); ++it)
      if (!upto(*it).sameAs(a.stages[*it]))
        fail(r.restriction, "upto-" + u.member(i).str() + " fixed point differs at " + u.member(*it).str());
  }

  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (!u.lt(i, j)) continue;
      for (std::size_t x = 0; x < a.stages[i].size(); ++x) {
        std::size_t dx = a.delta(i, j, x);
        for (std::size_t m : a.stages[i].members[x]) {
          const auto& pr = a.stages[i].pool[m];
          auto c = a.stages[j].classOf(pr.stage, pr.term);
          if (!c || *c != dx)
            fail(r.fixedDiag, "δ[k,t] ≠ [k,t] for " + pr.term.str() + " from " + u.member(i).str() + " to " +
                                  u.member(j).str());
        }
      }
    }

  Diagram d = a.diagram();
  try {
    d.validate();
  } catch (const Error& e) {
    fail(r.functorial, e.what());
  }

  // For t over D_i and i < j: some k > j has τ_{j,k}(T δ_{i,j} t) = τ_{i,k} t.
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::set<std::string> seen;
    std::vector<Term> terms;
    for (std::size_t s = 0; s < u.size(); ++s) {
      if (!u.lt(i, s)) continue;
      for (const auto& p : a.stages[s].pool)
        if (p.stage == i && seen.insert(p.term.str()).second) terms.push_back(p.term);
    }
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (!u.lt(i, j)) continue;
      bool anyAbove = false;
      for (std::size_t k = 0; k < u.size(); ++k) anyAbove = anyAbove || u.lt(j, k);
      for (const auto& t : terms) {
        if (!anyAbove) {
          ++r.qwintro2Skipped;
          continue;
        }
        Term moved = relabel(t, [&](std::size_t x) { return a.delta(i, j, x); });
        bool found = false;
        for (std::size_t k = 0; k < u.size() && !found; ++k) {
          if (!u.lt(j, k)) continue;
          auto lhs = a.tau(j, k, moved);
          auto rhs = a.tau(i, k, t);
          found = lhs && rhs && *lhs == *rhs;
        }
        ++r.qwintro2Checked;
        if (!found) fail(r.qwintro2, "no k witnesses τ_{j,k}(T δ t) = τ_{i,k} t for " + t.str());
      }
    }
  }
  return r;
}

ColimitQW::ColimitQW(std::shared_ptr<const Approximation> a) : a_(std::move(a)) {
  diagram_ = a_->diagram();
  colim_ = colim(diagram_);
  rep_.resize(colim_.classCount);
  sort_.resize(colim_.classCount);
  std::vector<bool> set(colim_.classCount, false);
  for (const auto& [key, c] : colim_.inject) {
    const Stage& s = a_->stages[key.first];
    const Term& f = s.flat[key.second];
    if (!set[c] || compareTerms(a_->sig, f, rep_[c]) < 0) rep_[c] = f;
    sort_[c] = s.sort[key.second];
    set[c] = true;
  }
}

std::optional<std::size_t> ColimitQW::nu(std::size_t i, std::size_t x) const {
  return colim_.classOf(diagram_, i, x);
}

std::optional<std::size_t> ColimitQW::qwintro(const OpDecl& op, const std::vector<std::size_t>& kids) const {
  const SizeUniverse& u = *a_->universe;
  if (kids.size() != op.arity.n) throw Error(ErrorCode::ArityMismatch, op.name());
  for (std::size_t c = 0; c < kids.size(); ++c)
    if (sort_.at(kids[c]) != op.childSort(c)) return std::nullopt;
  bool beyondDepth = false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto s = u.sucId(i);
    if (!s) continue;
    std::vector<Term> leaves;
    for (std::size_t c : kids) {
      std::optional<std::size_t> x;
      for (const auto& [key, cls] : colim_.inject) {
        if (cls != c) continue;
        if (key.first == i) x = key.second;
        else if (u.lt(key.first, i)) x = a_->delta(key.first, i, key.second);
        if (x) break;
      }
      if (!x) break;
      leaves.push_back(Term::var(leafName(*x)));
    }
    if (leaves.size() != kids.size()) continue;
    auto t = a_->tau(i, *s, Term::node(op.family, op.params, std::move(leaves)));
    if (!t) {
      beyondDepth = true;
      continue;
    }
    if (auto c = nu(*s, *t)) return c;
  }
  if (beyondDepth) return std::nullopt;
  throw Error(ErrorCode::StageOverflow, "no stage with a successor holds the arguments of " + op.name() +
                                            "; enlarge the size height");
}

namespace {

std::optional<std::size_t> evalInColimit(const ColimitQW& qw, std::size_t j, const Term& t) {
  if (t.isVar()) return qw.nu(j, leafId(t));
  std::vector<std::size_t> kids;
  for (const auto& c : t.children().entries) {
    auto k = evalInColimit(qw, j, c);
    if (!k) return std::nullopt;
    kids.push_back(*k);
  }
  return qw.qwintro(qw.approximation().sig.op(t.opName()), kids);
}

template <class F>
void forEachTuple(std::size_t n, std::size_t arity, F&& f) {
  std::vector<std::size_t> idx(arity, 0);
  if (arity > 0 && n == 0) return;
  while (true) {
    f(idx);
    std::size_t c = arity;
    while (c-- > 0) {
      if (++idx[c] < n) break;
      idx[c] = 0;
    }
    if (c == static_cast<std::size_t>(-1)) return;
  }
}

}  // namespace

ColimitQW::EquateReport ColimitQW::checkQwequate() const {
  EquateReport r;
  for (const auto& s : a_->stages)
    for (std::size_t k = 0; k < s.instances.size(); ++k) {
      const auto& l = s.pool[s.instances[k].first];
      const auto& rr = s.pool[s.instances[k].second];
      std::optional<std::size_t> a, b;
      try {
        a = evalInColimit(*this, l.stage, l.term);
        b = evalInColimit(*this, rr.stage, rr.term);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::StageOverflow) throw;
      }
      if (!a || !b) {
        ++r.skipped;
        continue;
      }
      ++r.checked;
      if (*a != *b && r.ok) {
        r.ok = false;
        r.failure = s.instanceEquation[k] + ": " + l.term.str() + " and " + rr.term.str() + " land in different classes";
      }
    }
  return r;
}

ColimitQW::RecReport ColimitQW::qwrec(const AlgebraSpec& alg) const {
  RecReport rep;
  const SizeUniverse& u = *a_->universe;
  auto fail = [&](bool& flag, const std::string& m) {
    flag = false;
    if (rep.failure.empty()) rep.failure = m;
  };
  auto envOf = [](const std::vector<Value>& vals) {
    Env e;
    for (std::size_t x = 0; x < vals.size(); ++x) e.named[leafName(x)] = vals[x];
    return e;
  };
  // r_i([j,t]) = t ⋙ r_j
  WfStep<std::vector<Value>> step = [&](std::size_t i,
                                         const std::function<const std::vector<Value>&(std::size_t)>& get) {
    const Stage& s = a_->stages[i];
    std::map<std::size_t, Env> envs;
    std::vector<Value> out(s.size());
    for (std::size_t c = 0; c < s.size(); ++c) {
      bool first = true;
      for (std::size_t m : s.members[c]) {
        const auto& p = s.pool[m];
        auto it = envs.find(p.stage);
        if (it == envs.end()) it = envs.emplace(p.stage, envOf(get(p.stage))).first;
        Value v = bind(p.term, it->second, alg);
        if (first) out[c] = v;
        else if (v != out[c])
          fail(rep.wellDefined, "r_" + u.member(i).str() + " is not well defined on " + s.flat[c].str());
        first = false;
      }
    }
    return out;
  };
  auto r = wfRec<std::vector<Value>>(u, step);

  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j : u.below(i)) {
      std::vector<Value> pulled;
      for (std::size_t x = 0; x < a_->stages[j].size(); ++x) {
        pulled.push_back(r[i][a_->delta(j, i, x)]);
        if (pulled.back() != r[j][x])
          fail(rep.stageCoherent, "r_j ≠ r_i ∘ δ_{j,i} at " + a_->stages[j].flat[x].str());
      }
      Env e = envOf(pulled);
      const Stage& s = a_->stages[i];
      for (std::size_t p = 0; p < s.pool.size(); ++p) {
        if (s.pool[p].stage != j) continue;
        if (bind(s.pool[p].term, e, alg) != r[i][s.classOfPair[p]])
          fail(rep.fHolds, "F_" + u.member(i).str() + " fails at " + s.pool[p].term.str());
      }
    }

  rep.values.resize(colim_.classCount);
  std::vector<bool> set(colim_.classCount, false);
  for (const auto& [key, c] : colim_.inject) {
    const Value& v = r[key.first][key.second];
    if (!set[c]) rep.values[c] = v;
    else if (rep.values[c] != v) fail(rep.wellDefined, "qwrec is not constant on colimit class of " + rep_[c].str());
    set[c] = true;
  }
  return rep;
}

HomReport ColimitQW::checkHom(const AlgebraSpec& alg, const std::vector<Value>& h) const {
  HomReport r;
  for (const auto& op : a_->sig.ops()) {
    forEachTuple(classCount(), op.arity.n, [&](const std::vector<std::size_t>& kids) {
      if (!r.ok) return;
      std::optional<std::size_t> c;
      try {
        c = qwintro(op, kids);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::StageOverflow) throw;
      }
      if (!c) return;
      std::vector<Value> hv;
      for (auto k : kids) hv.push_back(h[k]);
      ++r.checked;
      Value lhs = alg.apply({op.family, op.params}, hv);
      if (lhs != h[*c]) {
        r.ok = false;
        std::string node = op.name();
        for (auto k : kids) node += " " + rep_[k].str();
        r.failure = "isHom fails at " + node + ": α gives " + lhs.str() + ", h gives " + h[*c].str();
      }
    });
  }
  return r;
}

OracleComparison compareWithOracle(const ColimitQW& qw, const CongruenceQuotient& q) {
  const Approximation& a = qw.approximation();
  const SizeUniverse& u = *a.universe;
  const Colimit& c = qw.colimit();
  if (c.interior.empty()) throw Error(ErrorCode::NotStabilized, "the size universe has no interior members");
  for (std::size_t m = 0; m < u.size(); ++m) {
    if (c.isInterior(m)) continue;
    for (std::size_t x = 0; x < a.stages[m].size(); ++x)
      if (!qw.nu(m, x))
        throw Error(ErrorCode::NotStabilized, "element " + a.stages[m].flat[x].str() + " of stage " +
                                                  u.member(m).str() + " is new; enlarge the size height");
  }

  OracleComparison r;
  r.colimitClasses = qw.classCount();
  r.oracleClasses = q.classCount();
  r.toOracle.assign(qw.classCount(), 0);
  auto fail = [&](const std::string& m) {
    if (r.failure.empty()) r.failure = m;
  };
  bool welldef = true;
  std::vector<bool> set(qw.classCount(), false);
  for (const auto& [key, cls] : c.inject) {
    const Term& t = a.stages[key.first].flat[key.second];
    auto o = q.classOfTerm(t);
    if (!o) {
      welldef = false;
      fail(t.str() + " is outside the oracle universe");
      continue;
    }
    if (set[cls] && r.toOracle[cls] != *o) {
      welldef = false;
      fail("colimit class of " + qw.representative(cls).str() + " splits in the oracle");
    }
    r.toOracle[cls] = *o;
    set[cls] = true;
  }
  std::vector<std::size_t> hits(q.classCount(), 0);
  for (std::size_t k = 0; k < r.toOracle.size(); ++k) ++hits[r.toOracle[k]];
  bool inj = true, surj = true;
  for (std::size_t o = 0; o < hits.size(); ++o) {
    if (hits[o] > 1) {
      inj = false;
      fail("oracle class of " + q.canon(o).str() + " is hit " + std::to_string(hits[o]) + " times");
    }
    if (hits[o] == 0) {
      surj = false;
      fail("oracle class of " + q.canon(o).str() + " is not reached");
    }
  }
  r.bijection = welldef && inj && surj;
  for (std::size_t k = 0; k < qw.classCount(); ++k) ++r.perSort[qw.sortOfClass(k)].first;
  for (std::size_t o = 0; o < q.classCount(); ++o) ++r.perSort[q.sortOfClass(o)].second;

  r.respectsQwintro = true;
  for (const auto& op : a.sig.ops()) {
    forEachTuple(qw.classCount(), op.arity.n, [&](const std::vector<std::size_t>& kids) {
      for (std::size_t x = 0; x < kids.size(); ++x)
        if (qw.sortOfClass(kids[x]) != op.childSort(x)) return;
      std::optional<std::size_t> mine;
      try {
        mine = qw.qwintro(op, kids);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::StageOverflow) throw;
        r.respectsQwintro = false;
        fail(e.what());
        return;
      }
      std::vector<std::size_t> mapped;
      for (auto k : kids) mapped.push_back(r.toOracle[k]);
      auto theirs = q.qwintro(op, mapped);
      ++r.qwintroChecked;
      bool agree = mine ? (theirs && r.toOracle[*mine] == *theirs) : !theirs;
      if (!agree) {
        r.respectsQwintro = false;
        std::string node = op.name();
        for (auto k : kids) node += " " + qw.representative(k).str();
        fail("qwintro disagrees at " + node);
      }
    });
  }
  return r;
}

}  // namespace qwi
