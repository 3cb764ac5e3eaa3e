// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qwi/algebra.hpp"
#include "qwi/diagram.hpp"
#include "qwi/quotient.hpp"
#include "qwi/serialize.hpp"
#include "qwi/sizes.hpp"

namespace qwi {

// One stage D_i = (Σ_{j<i} T_Σ D_j)/R_i, cut down to pairs (j, t) whose
// flattened depth is at most d. Leaves of t are variables named by the
// element ids of D_j.
struct Stage {
  struct Pair {
    std::size_t stage;
    Term term;
    std::size_t depth;  // flattened: a leaf x counts as the depth of x
  };
  std::vector<Pair> pool;
  std::unordered_map<std::string, std::size_t> poolIndex;  // "j|term"
  std::vector<std::size_t> classOfPair;
  std::vector<std::vector<std::size_t>> members;  // class → pool ids
  std::vector<std::size_t> depth;                 // class → least member depth
  std::vector<std::string> sort;                  // class → sort
  std::vector<Term> flat;                         // class → closed representative
  std::vector<std::pair<std::size_t, std::size_t>> instances;  // clause-1 pool pairs
  std::vector<std::string> instanceEquation;

  std::size_t size() const { return members.size(); }
  std::optional<std::size_t> find(std::size_t j, const Term& t) const;
  std::optional<std::size_t> classOf(std::size_t j, const Term& t) const;  // [j,t]_{R_i}
  bool sameAs(const Stage& o) const;
};

using StageLookup = std::function<const Stage&(std::size_t)>;

// ◇_i over the stages below i.
Stage diamond(const Signature& sig, const SystemOfEquations& sys, const SizeUniverse& u, std::size_t i,
              const StageLookup& below, std::size_t depth);

struct Approximation {
  Signature sig;
  SystemOfEquations sys;
  std::size_t depth = 0;
  std::shared_ptr<const SizeUniverse> universe;
  std::vector<Stage> stages;

  // τ_{j,i} t = [j,t]_{R_i}
  std::optional<std::size_t> tau(std::size_t j, std::size_t i, const Term& t) const;
  // δ_{i,j} = τ_{i,j} ∘ η
  std::size_t delta(std::size_t i, std::size_t j, std::size_t x) const;
  Diagram diagram() const;
  std::string dump() const;  // stage <size-literal>: <count>
  Json toJson() const;
};

Approximation buildFixedPoint(const Signature& sig, const SystemOfEquations& sys,
                              std::shared_ptr<const SizeUniverse> u, std::size_t depth);

struct FixedPointReport {
  bool uptoLaw = true;      // D_j = ◇_j(D(↓j)) and τ_{k,j} t = [k,t]_{R_j}
  bool restriction = true;  // recomputed upto-i fixed points agree with the global one
  bool fixedDiag = true;    // δ_{i,j}[k,t]_{R_i} = [k,t]_{R_j}
  bool functorial = true;
  bool qwintro2 = true;
  std::size_t qwintro2Checked = 0;
  std::size_t qwintro2Skipped = 0;  // no k above j in the universe
  std::string failure;
  bool ok() const { return uptoLaw && restriction && fixedDiag && functorial && qwintro2; }
};

FixedPointReport checkFixedPoint(const Approximation& a);

// The QW structure on colim D.
class ColimitQW {
 public:
  explicit ColimitQW(std::shared_ptr<const Approximation> a);

  const Approximation& approximation() const { return *a_; }
  const Diagram& diagram() const { return diagram_; }
  const Colimit& colimit() const { return colim_; }
  std::size_t classCount() const { return colim_.classCount; }
  const Term& representative(std::size_t c) const { return rep_[c]; }
  const std::string& sortOfClass(std::size_t c) const { return sort_[c]; }
  std::optional<std::size_t> nu(std::size_t i, std::size_t x) const;

  // ν_{↑i}(τ_{i,↑i}(σ(a, η∘b))); nullopt beyond the depth bound,
  // StageOverflow when no stage with a successor holds the children.
  std::optional<std::size_t> qwintro(const OpDecl& op, const std::vector<std::size_t>& kids) const;

  struct EquateReport {
    bool ok = true;
    std::size_t checked = 0;
    std::size_t skipped = 0;
    std::string failure;
  };
  EquateReport checkQwequate() const;

  struct RecReport {
    std::vector<Value> values;  // per colimit class
    bool fHolds = true;          // F_i side condition at every stage
    bool stageCoherent = true;   // r_j = r_i ∘ δ_{j,i}
    bool wellDefined = true;
    std::string failure;
    bool ok() const { return fHolds && stageCoherent && wellDefined; }
  };
  RecReport qwrec(const AlgebraSpec& alg) const;

  HomReport checkHom(const AlgebraSpec& alg, const std::vector<Value>& h) const;

 private:
  std::shared_ptr<const Approximation> a_;
  Diagram diagram_;
  Colimit colim_;
  std::vector<Term> rep_;
  std::vector<std::string> sort_;
};

struct OracleComparison {
  bool bijection = false;
  bool respectsQwintro = false;
  std::size_t colimitClasses = 0;
  std::size_t oracleClasses = 0;
  std::size_t qwintroChecked = 0;
  std::vector<std::size_t> toOracle;  // colimit class → oracle class
  std::map<std::string, std::pair<std::size_t, std::size_t>> perSort;  // sort → (colimit, oracle)
  std::string failure;
  bool ok() const { return bijection && respectsQwintro; }
};

// Throws NotStabilized when some apex element has no interior preimage.
OracleComparison compareWithOracle(const ColimitQW& qw, const CongruenceQuotient& q);

}  // namespace qwi
