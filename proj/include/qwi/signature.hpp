// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qwi/term.hpp"

namespace qwi {

struct OpDecl {
  std::string family;
  std::vector<std::string> params;
  Arity arity;
  // Sorted signatures only: target sort and one sort per child (a single
  // entry for NAT arities). Empty strings in the single-sorted case.
  std::string target;
  std::vector<std::string> childSorts;

  std::string name() const { return opInstanceName(family, params); }
  const std::string& childSort(std::size_t x) const;
};

class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<OpDecl> ops, std::vector<std::string> sorts = {});

  const std::vector<OpDecl>& ops() const { return ops_; }
  const std::vector<std::string>& sorts() const { return sorts_; }
  bool sorted() const { return !sorts_.empty(); }
  std::optional<std::size_t> find(const std::string& instanceName) const;
  const OpDecl& op(const std::string& instanceName) const;  // throws UnknownOp
  std::size_t index(const std::string& instanceName) const;
  bool finitary() const;

 private:
  std::vector<OpDecl> ops_;
  std::vector<std::string> sorts_;
  std::map<std::string, std::size_t> byName_;
};

// Indexed signature (I, A, B): each op has a target index and, per index,
// a number of children of that index.
struct IndexedSignature {
  struct Op {
    std::string family;
    std::vector<std::string> params;
    std::string target;
    std::map<std::string, Arity> aritiesPerIndex;
  };
  std::vector<std::string> indices;
  std::vector<Op> ops;

  // Flattens to a sorted signature; children are laid out index by index
  // in declaration order.
  Signature toSignature() const;
};

// Variable family V e: a finite list of named variables (each with a sort),
// or a countable family addressed by index expressions.
struct VarFamily {
  bool countable = false;
  std::string familyName;  // countable only; empty for the anonymous family
  std::vector<std::string> names;
  std::vector<std::string> sorts;  // parallel to names; countable: one entry
  std::string label;  // display name of the variable type, e.g. ℕ+ℕ encoded as ℕ

  static VarFamily named(std::vector<std::string> ns, std::vector<std::string> ss = {});
  static VarFamily fin(std::size_t n);
  static VarFamily nat(std::string family = "", std::string sort = "");
  std::string sortOf(const std::string& name) const;
  std::size_t size() const { return names.size(); }
  std::string display() const;  // 𝟘, 𝟙, ℕ, a label, or the name list
};

struct Equation {
  std::string name;
  VarFamily vars;
  Term lhs;
  Term rhs;
  std::string sort;  // sorted systems only
};

struct SystemOfEquations {
  std::vector<Equation> equations;
  IndexEnv index;  // maps referenced by comprehensions in the equations
};

// Smart constructor enforcing the arity of a declared operator.
Term mkNode(const Signature& sig, const std::string& family,
            const std::vector<std::string>& params, ArityMap children);
Term mkNode(const Signature& sig, const std::string& instanceName, ArityMap children);

// Checks arity shape and variable scope of every node; throws on failure.
void checkTerm(const Signature& sig, const Term& t, const VarFamily* vars = nullptr);
void checkSystem(const Signature& sig, const SystemOfEquations& sys);

// Sort of a well-formed term; variables take their sort from vars.
std::string sortOf(const Signature& sig, const Term& t, const VarFamily* vars = nullptr);

// Σ_X: one nullary op per generator prepended; the system carries over.
std::pair<Signature, SystemOfEquations> freeAlgebraSignature(
    const Signature& sig, const SystemOfEquations& sys, const std::vector<std::string>& gens);

}  // namespace qwi
