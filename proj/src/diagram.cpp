// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include "qwi/diagram.hpp"

#include <algorithm>
#include <numeric>

namespace qwi {

namespace {

struct UnionFind {
  std::vector<std::size_t> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  std::size_t find(std::size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    p[b] = a;
  }
};

std::string tupleStr(const std::vector<std::size_t>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

std::vector<std::size_t> digits(std::size_t code, std::size_t base, std::size_t m) {
  std::vector<std::size_t> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    out[k] = code % base;
    code /= base;
  }
  return out;
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

const std::vector<std::size_t>& Diagram::delta(std::size_t i, std::size_t j) const {
  auto it = maps.find({i, j});
  if (it == maps.end())
    throw Error(ErrorCode::FunctorialityViolation,
                "no map from " + universe->member(i).str() + " to " + universe->member(j).str());
  return it->second;
}

void Diagram::validate() const {
  const SizeUniverse& u = *universe;
  if (sizes.size() != u.size()) throw Error(ErrorCode::FunctorialityViolation, "family does not cover the universe");
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (!u.lt(i, j)) continue;
      const auto& d = delta(i, j);
      if (d.size() != sizes[i]) throw Error(ErrorCode::FunctorialityViolation, "δ has the wrong domain");
      for (auto y : d)
        if (y >= sizes[j]) throw Error(ErrorCode::FunctorialityViolation, "δ leaves its codomain");
    }
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (!u.lt(i, j)) continue;
      for (std::size_t k = 0; k < u.size(); ++k) {
        if (!u.lt(j, k)) continue;
        const auto& ij = delta(i, j);
        const auto& jk = delta(j, k);
        const auto& ik = delta(i, k);
        for (std::size_t x = 0; x < sizes[i]; ++x)
          if (ik[x] != jk[ij[x]])
            throw Error(ErrorCode::FunctorialityViolation,
                        "δ_{i,k} ≠ δ_{j,k} ∘ δ_{i,j} at i=" + u.member(i).str() + " j=" + u.member(j).str() +
                            " k=" + u.member(k).str() + " x=" + std::to_string(x));
      }
    }
}

Diagram Diagram::constant(std::shared_ptr<const SizeUniverse> u, std::size_t n) {
  Diagram d;
  d.sizes.assign(u->size(), n);
  std::vector<std::size_t> id(n);
  std::iota(id.begin(), id.end(), 0);
  for (std::size_t i = 0; i < u->size(); ++i)
    for (std::size_t j = 0; j < u->size(); ++j)
      if (u->lt(i, j)) d.maps[{i, j}] = id;
  d.universe = std::move(u);
  return d;
}

Diagram Diagram::growingChain(std::shared_ptr<const SizeUniverse> u) {
  Diagram d;
  for (std::size_t i = 0; i < u->size(); ++i) d.sizes.push_back(u->member(i).height() + 1);
  for (std::size_t i = 0; i < u->size(); ++i)
    for (std::size_t j = 0; j < u->size(); ++j)
      if (u->lt(i, j)) {
        std::vector<std::size_t> inc(d.sizes[i]);
        std::iota(inc.begin(), inc.end(), 0);
        d.maps[{i, j}] = inc;
      }
  d.universe = std::move(u);
  return d;
}

bool Colimit::isInterior(std::size_t i) const { return std::binary_search(interior.begin(), interior.end(), i); }

std::optional<std::size_t> Colimit::classOf(const Diagram& d, std::size_t i, std::size_t x) const {
  auto it = inject.find({i, x});
  if (it != inject.end()) return it->second;
  for (std::size_t j : interior) {
    if (!d.universe->lt(j, i)) continue;
    const auto& m = d.delta(j, i);
    for (std::size_t y = 0; y < m.size(); ++y)
      if (m[y] == x) return inject.at({j, y});
  }
  return std::nullopt;
}

Colimit colim(const Diagram& d) {
  d.validate();
  const SizeUniverse& u = *d.universe;
  Colimit c;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t k = 0; k < u.size(); ++k)
      if (u.lt(i, k)) {
        c.interior.push_back(i);
        break;
      }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> id;
  for (std::size_t i : c.interior)
    for (std::size_t x = 0; x < d.sizes[i]; ++x) {
      id[{i, x}] = pairs.size();
      pairs.push_back({i, x});
    }
  UnionFind uf(pairs.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    std::map<std::size_t, std::size_t> bucket;  // element of D_k ↦ first pair reaching it
    for (std::size_t i : c.interior) {
      if (!u.lt(i, k)) continue;
      const auto& m = d.delta(i, k);
      for (std::size_t x = 0; x < d.sizes[i]; ++x) {
        auto [it, fresh] = bucket.emplace(m[x], id[{i, x}]);
        if (!fresh) uf.unite(it->second, id[{i, x}]);
      }
    }
  }
  std::map<std::size_t, std::size_t> number;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [it, fresh] = number.emplace(uf.find(p), number.size());
    c.inject[pairs[p]] = it->second;
  }
  c.classCount = number.size();
  for (std::size_t i : c.interior)
    for (std::size_t j : c.interior) {
      if (!u.lt(i, j)) continue;
      const auto& m = d.delta(i, j);
      for (std::size_t x = 0; x < d.sizes[i]; ++x)
        if (c.inject.at({i, x}) != c.inject.at({j, m[x]})) c.coconeHolds = false;
    }
  return c;
}

CocontinuityReport checkPowerCocontinuity(const Diagram& d, std::size_t xSize) {
  d.validate();
  const SizeUniverse& u = *d.universe;
  Colimit base = colim(d);

  Diagram p;
  p.universe = d.universe;
  for (std::size_t i = 0; i < u.size(); ++i) p.sizes.push_back(ipow(d.sizes[i], xSize));
  for (const auto& [key, m] : d.maps) {
    auto [i, j] = key;
    std::vector<std::size_t> pm(p.sizes[i]);
    for (std::size_t f = 0; f < p.sizes[i]; ++f) {
      auto xs = digits(f, d.sizes[i], xSize);
      std::size_t code = 0;
      for (std::size_t k = xSize; k-- > 0;) code = code * d.sizes[j] + m[xs[k]];
      pm[f] = code;
    }
    p.maps[key] = pm;
  }
  Colimit power = colim(p);

  CocontinuityReport r;
  r.colimitClasses = base.classCount;
  r.powerClasses = power.classCount;
  // κ [i,f] = ν_i ∘ f
  std::map<std::size_t, std::vector<std::size_t>> kappa;
  std::map<std::vector<std::size_t>, std::pair<std::size_t, std::size_t>> hit;
  for (std::size_t i : power.interior)
    for (std::size_t f = 0; f < p.sizes[i]; ++f) {
      ++r.functionsChecked;
      auto xs = digits(f, d.sizes[i], xSize);
      std::vector<std::size_t> g;
      for (auto x : xs) g.push_back(base.inject.at({i, x}));
      std::size_t cls = power.inject.at({i, f});
      auto [it, fresh] = kappa.emplace(cls, g);
      if (!fresh && it->second != g && r.counterexample.empty()) {
        r.injective = false;
        r.counterexample = "κ is not well defined on class " + std::to_string(cls);
      }
      auto [ht, first] = hit.emplace(g, std::make_pair(i, f));
      if (!first && power.inject.at({ht->second.first, ht->second.second}) != cls) {
        r.injective = false;
        if (r.counterexample.empty())
          r.counterexample = "ν∘f = ν∘f′ = " + tupleStr(g) + " but [" + u.member(ht->second.first).str() + ", " +
                             tupleStr(digits(ht->second.second, d.sizes[ht->second.first], xSize)) + "] ≠ [" +
                             u.member(i).str() + ", " + tupleStr(xs) + "]";
      }
    }
  std::size_t total = ipow(base.classCount, xSize);
  for (std::size_t code = 0; code < total; ++code) {
    auto g = digits(code, base.classCount, xSize);
    auto it = hit.find(g);
    if (it == hit.end()) {
      r.surjective = false;
      if (r.counterexample.empty()) r.counterexample = "no stage factors " + tupleStr(g);
      continue;
    }
    r.witnesses.push_back(tupleStr(g) + " ↦ (" + u.member(it->second.first).str() + ", " +
                          tupleStr(digits(it->second.second, d.sizes[it->second.first], xSize)) + ")");
  }
  return r;
}

}  // namespace qwi
