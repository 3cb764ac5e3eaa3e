// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include "qwi/serialize.hpp"

#include "qwi/error.hpp"
#include "qwi/sexpr.hpp"

namespace qwi {

Json toJson(const Arity& a) {
  if (a.isNat()) return "NAT";
  return a.n;
}

Json toJson(const Signature& sig) {
  Json ops = Json::array();
  for (const auto& o : sig.ops()) {
    Json j;
    j["name"] = o.name();
    j["arity"] = toJson(o.arity);
    if (!o.params.empty()) {
      j["family"] = o.family;
      j["params"] = o.params;
    }
    if (sig.sorted()) {
      j["target"] = o.target;
      j["children"] = o.childSorts;
    }
    ops.push_back(std::move(j));
  }
  return ops;
}

Json toJson(const SystemOfEquations& sys) {
  Json eqs = Json::array();
  for (const auto& e : sys.equations) {
    Json j;
    j["name"] = e.name;
    if (e.vars.countable) {
      Json v;
      v["nat"] = e.vars.familyName;
      j["vars"] = v;
    } else {
      j["vars"] = e.vars.names;
    }
    if (!e.vars.label.empty()) j["varType"] = e.vars.label;
    j["lhs"] = e.lhs.str();
    j["rhs"] = e.rhs.str();
    if (!e.sort.empty()) j["sort"] = e.sort;
    bool sortedVars = false;
    for (const auto& s : e.vars.sorts) sortedVars = sortedVars || !s.empty();
    if (sortedVars) j["varSorts"] = e.vars.sorts;
    eqs.push_back(std::move(j));
  }
  return eqs;
}

Json toJson(const Signature& sig, const SystemOfEquations& sys) {
  Json j;
  if (sig.sorted()) j["sorts"] = sig.sorts();
  j["ops"] = toJson(sig);
  j["equations"] = toJson(sys);
  if (!sys.index.mapSource.empty()) {
    Json maps = Json::array();
    for (const auto& [k, v] : sys.index.mapSource) maps.push_back(v);
    j["maps"] = maps;
  }
  return j;
}

Signature signatureFromJson(const Json& j) {
  std::vector<std::string> sorts;
  if (j.contains("sorts")) sorts = j.at("sorts").get<std::vector<std::string>>();
  std::vector<OpDecl> ops;
  for (const auto& o : j.at("ops")) {
    OpDecl d;
    if (o.contains("family")) {
      d.family = o.at("family").get<std::string>();
      d.params = o.at("params").get<std::vector<std::string>>();
    } else {
      d.family = o.at("name").get<std::string>();
    }
    const Json& a = o.at("arity");
    d.arity = a.is_string() ? Arity::nat() : Arity::fin(a.get<std::size_t>());
    if (o.contains("target")) d.target = o.at("target").get<std::string>();
    if (o.contains("children")) d.childSorts = o.at("children").get<std::vector<std::string>>();
    ops.push_back(std::move(d));
  }
  return Signature(std::move(ops), std::move(sorts));
}

SystemOfEquations systemFromJson(const Json& j) {
  SystemOfEquations sys;
  if (j.contains("maps"))
    for (const auto& m : j.at("maps")) declareMap(sys.index, parseSExpr(m.get<std::string>()));
  for (const auto& e : j.at("equations")) {
    Equation q;
    q.name = e.at("name").get<std::string>();
    const Json& v = e.at("vars");
    if (v.is_object()) {
      q.vars = VarFamily::nat(v.at("nat").get<std::string>());
    } else {
      std::vector<std::string> ss;
      if (e.contains("varSorts")) ss = e.at("varSorts").get<std::vector<std::string>>();
      q.vars = VarFamily::named(v.get<std::vector<std::string>>(), ss);
    }
    if (e.contains("varType")) q.vars.label = e.at("varType").get<std::string>();
    q.lhs = parseTerm(e.at("lhs").get<std::string>());
    q.rhs = parseTerm(e.at("rhs").get<std::string>());
    if (e.contains("sort")) q.sort = e.at("sort").get<std::string>();
    sys.equations.push_back(std::move(q));
  }
  return sys;
}

std::string dumpStable(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace qwi
