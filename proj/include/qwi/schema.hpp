// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qwi/serialize.hpp"
#include "qwi/signature.hpp"

namespace qwi {

struct SrcPos {
  std::size_t line = 0, col = 0;
  std::string str() const { return std::to_string(line) + ":" + std::to_string(col); }
};

// Terms appearing in equation endpoints and index positions.
struct TermAst {
  enum class Kind { Name, Num, App, Plus, Compose, Unit };
  Kind kind = Kind::Name;
  std::string name;          // Name, App head
  std::uint64_t value = 0;   // Num, Plus offset
  std::vector<TermAst> args;  // App args; Plus {base}; Compose {f, g}
  SrcPos pos;

  static TermAst ident(std::string n, SrcPos p = {});
  static TermAst num(std::uint64_t v, SrcPos p = {});
  std::string str() const;
  bool mentions(const std::string& v) const;
  TermAst subst(const std::string& v, const TermAst& by) const;
  friend bool operator==(const TermAst& a, const TermAst& b) { return a.str() == b.str(); }
};

struct TypeAst;
using TypePtr = std::shared_ptr<const TypeAst>;

struct TypeAst {
  enum class Kind { QRef, Const, Pi, Sigma, Eq, Unit };
  Kind kind = Kind::Unit;
  std::string name;           // QRef: Q; Const: constant name
  std::vector<TermAst> args;  // QRef index arguments; Const arguments (e.g. isIso b)
  std::string binder;         // Pi, Sigma; empty when anonymous
  TypePtr left, right;        // Pi domain/codomain; Sigma first/second
  TermAst lhs, rhs;           // Eq
  SrcPos pos;

  static TypeAst qref(std::string q, std::vector<TermAst> ix = {}, SrcPos p = {});
  static TypeAst cnst(std::string n, std::vector<TermAst> args = {}, SrcPos p = {});
  static TypeAst pi(std::string b, TypeAst dom, TypeAst cod, SrcPos p = {});
  static TypeAst sigma(std::string b, TypeAst l, TypeAst r, SrcPos p = {});
  static TypeAst eq(TermAst l, TermAst r, SrcPos p = {});
  static TypeAst unit();

  // X → Bag → Bag, ∏_{x y : X} …, ∑_{a : A} …, A × B, l = r.
  std::string str() const;
  bool atomic() const;
  bool mentionsQ() const;  // any QRef inside
  bool mentionsVar(const std::string& v) const;
  TypeAst substTerm(const std::string& v, const TermAst& by) const;
  TypeAst replaceQ(const TypeAst& by) const;  // A[𝟙/Q] when by is 𝟙
};

// Pretty form with the paper's grouping of adjacent binders of equal type.
std::string typeStr(const TypeAst& t);

struct ParamDecl {
  enum class Kind { Set, Finite, Nat, Other };
  std::string name;
  Kind kind = Kind::Set;
  std::vector<std::string> elements;  // Finite
  TypeAst type;                       // Other: the offending type
  SrcPos pos;
  std::string typeText() const;
};

struct CtorDecl {
  std::string name;
  TypeAst type;
  SrcPos pos;
};

struct QitDecl {
  std::string name;
  std::vector<ParamDecl> params;
  bool indexed = false;  // `: Nat` families
  std::vector<CtorDecl> elementCtors;
  std::vector<CtorDecl> equalityCtors;
  SrcPos pos;
};

// Final codomain after stripping ∏-binders.
const TypeAst& codomain(const TypeAst& t);

QitDecl parseDecl(const std::string& source);

// ---- judgements ----

struct Derivation {
  std::string rule;  // empty for side conditions such as Γ ⊢ X : 𝓤
  std::string judgement;
  std::vector<Derivation> premises;

  std::string str(std::size_t indent = 0) const;
  std::vector<std::string> ruleSequence() const;  // post-order, named rules only
  Json toJson() const;
};

struct Rejection {
  std::string rule;
  SrcPos pos;
  std::string message;
  std::string subterm;
  std::string str() const;
  Json toJson() const;
};

struct Judgement {
  bool accepted = false;
  Derivation derivation;
  Rejection rejection;

  static Judgement accept(Derivation d);
  static Judgement reject(std::string rule, SrcPos pos, std::string message, std::string subterm);
  std::string str() const;
  Json toJson() const;
};

// Every constructor's judgement, element constructors first.
struct DeclCheck {
  bool accepted = true;
  std::vector<std::pair<std::string, Judgement>> ctors;
  std::optional<Rejection> context;  // Q ∉ Γ, unsupported parameter kinds
  std::string str() const;
  Json toJson() const;
};

// K′: replaces sub-terms whose type is 𝟙 (or A → 𝟙) by the unit term.
TypeAst eraseUnits(const TypeAst& k);

Judgement checkStrictlyPositive(const QitDecl& d, const TypeAst& k);
Judgement checkElementCtor(const QitDecl& d, const TypeAst& h);
Judgement checkEqualityCtor(const QitDecl& d, const TypeAst& k);
DeclCheck checkDecl(const QitDecl& d);

// Re-derives every node of an accepted derivation from its judgement text
// and premises; returns false on the first node that does not replay.
bool replayDerivation(const QitDecl& d, const std::string& ctor, const Derivation& der);

// ---- elaboration ----

struct Instantiation {
  std::map<std::string, std::vector<std::string>> carriers;  // Set parameters
  std::uint64_t natPrefix = 2;  // indices and Nat-valued parameters range over 0..natPrefix
  IndexEnv maps;                // candidates for ℕ → ℕ parameters
  std::vector<std::string> mapNames;
};

struct Elaboration {
  Signature sig;
  SystemOfEquations sys;
  std::optional<IndexedSignature> indexed;
  std::vector<std::string> notes;
  Json toJson() const;
};

Elaboration elaborate(const QitDecl& d, const Instantiation& inst);

// ---- eliminator ----

struct EliminatorSignature {
  std::string motive;                                      // P : Q → 𝓤
  std::vector<std::pair<std::string, std::string>> steps;  // hypothesis, hatted type
  std::vector<std::pair<std::string, std::string>> coherences;
  std::string rule;                                        // elim … : ∏_{x : Q} P x
  std::vector<std::string> computations;
  std::string str() const;
};

EliminatorSignature deriveEliminatorSignature(const QitDecl& d);

// ---- built-in library ----

struct BuiltinExample {
  std::string name;
  std::string title;
  std::string source;  // DSL text; empty when given only as an encoding
  Elaboration elaboration;
  std::string table;   // A/B/E/V/l/r summary
};

std::vector<BuiltinExample> builtinExamples();
const BuiltinExample& builtinExample(const std::string& name);
std::string encodingTable(const Elaboration& e);

}  // namespace qwi
