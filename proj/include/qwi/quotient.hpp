// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qwi/algebra.hpp"
#include "qwi/signature.hpp"

namespace qwi {

// Closed terms of depth ≤ d together with the equation instances whose
// both sides stay inside that bound.
struct TermUniverse {
  Signature sig;
  SystemOfEquations sys;
  std::size_t depth = 0;
  std::vector<Term> terms;  // compareTerms order
  std::vector<std::string> sorts;  // parallel to terms
  std::vector<std::vector<std::size_t>> kids;  // child ids per term
  std::vector<std::pair<std::size_t, std::size_t>> instancePairs;
  std::vector<std::string> instanceEquation;  // parallel to instancePairs
  std::size_t skippedInstances = 0;

  std::optional<std::size_t> find(const Term& t) const;

  std::unordered_map<std::string, std::size_t> index;
};

TermUniverse buildUniverse(const Signature& sig, const SystemOfEquations& sys, std::size_t depth);

// Least congruence on a universe containing its instance pairs.
class CongruenceQuotient {
 public:
  explicit CongruenceQuotient(TermUniverse u);

  const TermUniverse& universe() const { return u_; }
  std::size_t classCount() const { return members_.size(); }
  std::size_t classOf(std::size_t termId) const { return cls_[termId]; }
  std::optional<std::size_t> classOfTerm(const Term& t) const;
  const Term& canon(std::size_t c) const { return u_.terms[members_[c].front()]; }
  const std::vector<std::size_t>& members(std::size_t c) const { return members_[c]; }
  const std::string& sortOfClass(std::size_t c) const { return u_.sorts[members_[c].front()]; }
  std::map<std::string, std::size_t> classCountBySort() const;
  // Class of σ(a, canonical children) when it lies in the universe.
  std::optional<std::size_t> qwintro(const OpDecl& op, const std::vector<std::size_t>& childClasses) const;
  std::string dump() const;  // canon <term> | members <k>

 private:
  TermUniverse u_;
  std::vector<std::size_t> cls_;
  std::vector<std::vector<std::size_t>> members_;
};

CongruenceQuotient closeCongruence(TermUniverse u);

enum class EqVerdict { Equal, Distinct, Unknown };
const char* verdictName(EqVerdict v);
EqVerdict decideEq(const CongruenceQuotient& q, const Term& a, const Term& b);

struct HomReport {
  bool ok = true;
  std::size_t checked = 0;
  std::string failure;  // first node where α(a, h∘b) ≠ h(σ(a,b))
};

HomReport checkHom(const CongruenceQuotient& q, const AlgebraSpec& alg, const std::vector<Value>& h);

struct RecResult {
  std::vector<Value> values;  // per class
  HomReport hom;
  bool wellDefined = true;
};

RecResult qwrec(const CongruenceQuotient& q, const AlgebraSpec& alg);

// Dependent eliminator data: candidate motive values per class and a
// step p a (π₁∘b) (π₂∘b).
struct EliminatorInput {
  std::function<std::vector<Value>(std::size_t cls)> motive;
  std::function<Value(const OpRef&, const std::vector<std::size_t>&, const std::vector<Value>&)> step;
};

struct CoherenceReport {
  bool ok = true;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::string witness;
};

// lift(l e) = lift(r e) for every instance and telescope environment.
CoherenceReport checkCoherence(const CongruenceQuotient& q, const EliminatorInput& inp);

struct ElimResult {
  std::vector<Value> values;  // per class
  CoherenceReport coherence;
  std::size_t compChecked = 0;
  bool compHolds = true;
  std::string compFailure;
};

ElimResult qwelim(const CongruenceQuotient& q, const EliminatorInput& inp);

struct UniqReport {
  HomReport hom;
  bool equalsRec = false;
  std::string discrepancy;
};

UniqReport qwuniqCheck(const CongruenceQuotient& q, const AlgebraSpec& alg, const std::vector<Value>& h);

}  // namespace qwi
