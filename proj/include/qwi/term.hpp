// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qwi {

struct Arity {
  enum class Kind { Fin, Nat };
  Kind kind = Kind::Fin;
  std::size_t n = 0;

  static Arity fin(std::size_t n) { return {Kind::Fin, n}; }
  static Arity nat() { return {Kind::Nat, 0}; }
  bool isNat() const { return kind == Kind::Nat; }
  std::string str() const { return isNat() ? "NAT" : "FIN(" + std::to_string(n) + ")"; }
  friend bool operator==(const Arity&, const Arity&) = default;
};

// Index expressions inside comprehensions: the bound index, a constant,
// or a declared total map applied to index expressions.
struct IndexExpr {
  enum class Kind { Var, Const, App };
  Kind kind = Kind::Const;
  std::string name;  // variable name or map name
  std::uint64_t value = 0;
  std::vector<IndexExpr> args;

  static IndexExpr var(std::string n) { return {Kind::Var, std::move(n), 0, {}}; }
  static IndexExpr cnst(std::uint64_t v) { return {Kind::Const, {}, v, {}}; }
  static IndexExpr app(std::string f, std::vector<IndexExpr> a) {
    return {Kind::App, std::move(f), 0, std::move(a)};
  }
  std::string str() const;
  bool mentions(const std::string& v) const;
  IndexExpr subst(const std::string& v, const IndexExpr& e) const;
  friend bool operator==(const IndexExpr&, const IndexExpr&) = default;
};

class Term;
struct TermRep;

// Children of a node: a finite table, an index comprehension (NAT arity),
// or the even/odd interleaving of two NAT-indexed maps.
struct ArityMap {
  enum class Kind { Tabular, Comprehension, Union };
  Kind kind = Kind::Tabular;
  std::vector<Term> entries;
  std::string indexVar;
  std::shared_ptr<const Term> body;
  std::vector<ArityMap> parts;

  static ArityMap tabular(std::vector<Term> ts);
  static ArityMap comprehension(std::string var, Term body);
  static ArityMap unite(ArityMap evens, ArityMap odds);
  bool isTabular() const { return kind == Kind::Tabular; }
};

// Named total maps on naturals and named term families, used to evaluate
// comprehension bodies at concrete indices.
struct IndexEnv {
  using Map = std::function<std::uint64_t(const std::vector<std::uint64_t>&)>;
  using Family = std::function<Term(const std::vector<std::uint64_t>&)>;
  std::map<std::string, Map> maps;
  std::map<std::string, Family> families;
  std::map<std::string, std::string> mapSource;  // printable declarations

  static const IndexEnv& builtin();
  std::uint64_t eval(const IndexExpr& e) const;
  const Family& family(const std::string& name) const;  // falls back to builtin()
  void declareBijection(const std::string& name,
                        const std::vector<std::pair<std::uint64_t, std::uint64_t>>& table);
  IndexEnv merged(const IndexEnv& other) const;
};

class Term {
 public:
  enum class Kind { Var, Node, Family };

  Term();  // the placeholder variable "_"
  static Term var(std::string name);
  static Term ixVar(std::string family, IndexExpr ix);
  static Term node(std::string family, std::vector<std::string> params, ArityMap children);
  static Term node(std::string family, std::vector<std::string> params, std::vector<Term> children);
  static Term leaf(std::string family, std::vector<std::string> params = {});
  static Term familyApp(std::string name, std::vector<IndexExpr> args);

  Kind kind() const;
  bool isVar() const { return kind() == Kind::Var; }
  bool isNode() const { return kind() == Kind::Node; }
  // Var: variable (or variable family) name. Node: operator family. Family: family name.
  const std::string& name() const;
  const std::optional<IndexExpr>& ix() const;
  const std::vector<std::string>& params() const;
  const ArityMap& children() const;
  const std::vector<IndexExpr>& familyArgs() const;
  // Operator instance name, e.g. cons_a.
  std::string opName() const;

  std::size_t depth() const;
  std::size_t hash() const;
  const std::string& str() const;  // s-expression, cached

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

  // Substitutes an index expression for a free index variable.
  Term substIndex(const std::string& v, const IndexExpr& e) const;
  // Child x of a node, evaluating comprehensions at index x.
  Term child(std::uint64_t x, const IndexEnv& env) const;
  std::size_t tabularSize() const { return children().entries.size(); }

 private:
  explicit Term(std::shared_ptr<const TermRep> r) : rep_(std::move(r)) {}
  static Term fromRep(std::shared_ptr<const TermRep> r) { return Term(std::move(r)); }
  std::shared_ptr<const TermRep> rep_;
  friend struct TermFactory;
};

struct TermRep {
  Term::Kind kind;
  std::string name;
  std::optional<IndexExpr> ix;
  std::vector<std::string> params;
  ArityMap children;
  std::vector<IndexExpr> famArgs;
  std::size_t depth = 1;
  std::size_t hash = 0;
  std::string str;
};

std::string opInstanceName(const std::string& family, const std::vector<std::string>& params);

// Key under which an indexed variable is looked up in environments.
std::string indexedVarKey(const std::string& family, std::uint64_t n);

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

// Evaluates a comprehension-style arity map at index x.
Term evalArityMap(const ArityMap& m, std::uint64_t x, const IndexEnv& env);

// Semantic equality: tabular parts syntactic, NAT parts compared after
// evaluation at the sample indices 0..k.
bool termsEqual(const Term& a, const Term& b, const IndexEnv& env, std::uint64_t k = 8);

}  // namespace qwi
