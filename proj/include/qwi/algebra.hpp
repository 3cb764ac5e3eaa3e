// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qwi/signature.hpp"
#include "qwi/value.hpp"

namespace qwi {

// Reference to an operator instance as seen by an interpretation.
struct OpRef {
  std::string family;
  std::vector<std::string> params;
  std::string name() const { return opInstanceName(family, params); }
};

// An S_Σ-algebra (X, α). Finite carriers allow exhaustive checks; NAT
// arities are interpreted by a rule that receives the child function.
struct AlgebraSpec {
  using FinRule = std::function<std::optional<Value>(const OpRef&, const std::vector<Value>&)>;
  using NatRule = std::function<std::optional<Value>(
      const OpRef&, const std::function<Value(std::uint64_t)>&)>;

  std::string name;
  std::optional<std::vector<Value>> carrier;
  FinRule fin;
  NatRule nat;

  // Table-driven algebra: key is (op instance name, children).
  static AlgebraSpec table(std::string name, std::vector<Value> carrier,
                           std::map<std::pair<std::string, std::vector<Value>>, Value> entries);
  Value apply(const OpRef& op, const std::vector<Value>& children) const;
};

// Environment for bind: named variables, plus a fallback for countable
// variable families (family name, index).
struct Env {
  std::map<std::string, Value> named;
  std::function<std::optional<Value>(const std::string&, std::uint64_t)> indexed;

  Value lookup(const std::string& name) const;
  Value lookup(const std::string& family, std::uint64_t n) const;
};

// t ⋙ ρ into an algebra.
Value bind(const Term& t, const Env& env, const AlgebraSpec& alg,
           const IndexEnv& ix = IndexEnv::builtin());

// Substitution environment: named variables and countable families given
// symbolically as (index variable, body).
struct TermEnv {
  std::map<std::string, Term> named;
  std::map<std::string, std::pair<std::string, Term>> families;
};

Term substitute(const Term& t, const TermEnv& env);
Term mapTerm(const Term& t, const std::function<std::string(const std::string&)>& f);

struct SatReport {
  enum class Status { Satisfied, Violated, Sampled };
  Status status = Status::Satisfied;
  std::string equation;             // Violated
  std::map<std::string, Value> env;  // Violated: the witness ρ
  std::size_t checked = 0;
  std::string str() const;
};

struct EnvSource {
  bool exhaustive = true;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  static EnvSource all() { return {true, 0, 1}; }
  static EnvSource sampled(std::size_t n, std::uint64_t seed = 1) { return {false, n, seed}; }
};

SatReport satisfies(const AlgebraSpec& alg, const SystemOfEquations& sys, const EnvSource& src,
                    const Signature* sig = nullptr);

// Deterministic term order: depth, then variables before nodes, then
// operators in declaration order, then children lexicographically.
int compareTerms(const Signature& sig, const Term& a, const Term& b);

struct VarDecl {
  std::string name;
  std::string sort;
};

// All well-sorted terms of depth ≤ depth over the given variables, in
// compareTerms order.
std::vector<Term> enumerateTerms(const Signature& sig, const std::vector<VarDecl>& vars,
                                 std::size_t depth);

}  // namespace qwi
