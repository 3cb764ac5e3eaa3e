// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include "qwi/error.hpp"
#include "qwi/schema.hpp"
#include "qwi/sexpr.hpp"

namespace qwi {

namespace {

const char* kBag = R"(-- finite multisets
qit Bag (X : Set) where
  nil : Bag
  cons : X -> Bag -> Bag
  swap : (x y : X) (zs : Bag) -> cons x (cons y zs) = cons y (cons x zs)
)";

const char* kCommVec = R"(-- length-indexed multisets
qit CommVec (X : Set) : Nat where
  nil : CommVec 0
  cons : X -> (i : Nat) -> CommVec i -> CommVec (i + 1)
  swap : (x y : X) (i : Nat) (zs : CommVec i) -> cons x (i + 1) (cons y i zs) = cons y (i + 1) (cons x i zs)
)";

const char* kInfTree = R"(-- unordered countably-branching trees
qit InfTree (X : Set) where
  leaf : InfTree
  node : X -> (Nat -> InfTree) -> InfTree
  perm : (x : X) (b : Nat -> Nat) (b' : isIso b) (f : Nat -> InfTree) -> node x f = node x (f ∘ b)
)";

Instantiation ab() {
  Instantiation in;
  in.carriers["X"] = {"a", "b"};
  return in;
}

Elaboration fromSource(const char* src, Instantiation in) { return elaborate(parseDecl(src), in); }

Equation eqn(std::string name, VarFamily v, const std::string& l, const std::string& r, std::string sort = "") {
  return {std::move(name), std::move(v), parseTerm(l), parseTerm(r), std::move(sort)};
}

// A' = {base, succ}, B' base = 0, B' succ = 1, C' = {c}, l' = r' = succ.
// V c = B'(l' c) + B'(r' c): one variable per summand.
Elaboration wsusp() {
  Elaboration e;
  e.sig = Signature({{"base", {}, Arity::fin(0), "", {}}, {"succ", {}, Arity::fin(1), "", {}}});
  VarFamily v = VarFamily::named({"l0", "r0"});
  v.label = "B'(l' c) + B'(r' c)";
  e.sys.equations.push_back(eqn("c", v, "(op succ (var l0))", "(op succ (var r0))"));
  checkSystem(e.sig, e.sys);
  return e;
}

// Z = {0}, Y_0 = {pair}, X_0 pair = 2 (both at index 0), R_0 pair = 0.
Elaboration wred() {
  Elaboration e;
  e.sig = Signature({{"pair", {}, Arity::fin(2), "0", {"0", "0"}}}, {"0"});
  IndexedSignature is;
  is.indices = {"0"};
  is.ops.push_back({"pair", {}, "0", {{"0", Arity::fin(2)}}});
  e.indexed = is;
  e.sys.equations.push_back(
      eqn("pair", VarFamily::named({"x0", "x1"}, {"0", "0"}), "(op pair (var x0) (var x1))", "(var x0)", "0"));
  e.notes.push_back("no nullary operator: the initial algebra is empty");
  checkSystem(e.sig, e.sys);
  return e;
}

// A = 3 with B = [0, 1, ℕ]; ℕ+ℕ variables are read through [even, odd].
Elaboration blass() {
  Elaboration e;
  e.sig = Signature({{"zero", {}, Arity::fin(0), "", {}},
                     {"S", {}, Arity::fin(1), "", {}},
                     {"sup", {}, Arity::nat(), "", {}}});
  declareMap(e.sys.index, parseSExpr("(bij s01 (0 1) (1 0) default i)"));
  declareMap(e.sys.index, parseSExpr("(builtin k_snd)"));
  const std::string fg = "(union (fun m (var (ix (even m)))) (fun m (var (ix (odd m)))))";
  VarFamily sum = VarFamily::nat();
  sum.label = "ℕ+ℕ";
  e.sys.equations.push_back(eqn("e1", VarFamily::named({}), "(op sup (fun n (op zero)))", "(op zero)"));
  e.sys.equations.push_back(eqn("e2_id_s01", VarFamily::nat(), "(op sup (fun n (var (ix (id n)))))",
                                "(op sup (fun n (var (ix (s01 n)))))"));
  e.sys.equations.push_back(
      eqn("e3", sum, "(op sup (union (fun n (var (ix (even n)))) (fun n (op sup " + fg + "))))", "(op sup " + fg + ")"));
  e.sys.equations.push_back(eqn("e4", sum,
                                "(op sup (union (fun n (var (ix (even n)))) (fun n (op S (op sup " + fg + ")))))",
                                "(op S (op sup " + fg + "))"));
  e.sys.equations.push_back(eqn("e5_even_odd_snd", VarFamily::nat(),
                                "(op sup (fun n (fam k_snd (unpair1 n) (even (unpair2 n)))))",
                                "(op sup (fun n (fam k_snd (unpair1 n) (odd (unpair2 n)))))"));
  e.notes.push_back("E f g, jointsurj b c and Lrel side conditions are erased; the listed instances satisfy them");
  checkSystem(e.sig, e.sys);
  return e;
}

std::vector<BuiltinExample> build() {
  std::vector<BuiltinExample> out;
  auto add = [&](std::string name, std::string title, std::string src, Elaboration e) {
    std::string t = encodingTable(e);
    out.push_back({std::move(name), std::move(title), std::move(src), std::move(e), std::move(t)});
  };
  add("bag", "Finite multisets", kBag, fromSource(kBag, ab()));
  add("commvec", "Length-indexed multisets", kCommVec, fromSource(kCommVec, ab()));
  Instantiation it = ab();
  declareMap(it.maps, parseSExpr("(bij s01 (0 1) (1 0) default i)"));
  it.mapNames = {"s01"};
  add("inftree", "Unordered countably-branching trees", kInfTree, fromSource(kInfTree, it));
  add("wsusp", "W-suspensions", "", wsusp());
  add("wred", "W-types with reductions", "", wred());
  add("blass", "Blass, Lumsdaine and Shulman's type", "", blass());
  return out;
}

std::string arityStr(const Arity& a) {
  if (a.kind == Arity::Kind::Nat) return "ℕ";
  static const char* small[] = {"𝟘", "𝟙", "𝟚", "𝟛"};
  return a.n < 4 ? small[a.n] : "Fin " + std::to_string(a.n);
}

}  // namespace

std::vector<BuiltinExample> builtinExamples() {
  static const std::vector<BuiltinExample> lib = build();
  return lib;
}

const BuiltinExample& builtinExample(const std::string& name) {
  static const std::vector<BuiltinExample> lib = builtinExamples();
  for (const auto& e : lib)
    if (e.name == name) return e;
  throw Error(ErrorCode::Usage, "no built-in example named " + name);
}

std::string encodingTable(const Elaboration& e) {
  std::string s;
  if (e.sig.sorted()) {
    s += "I";
    for (const auto& i : e.sig.sorts()) s += " " + i;
    s += "\n";
  }
  for (const auto& op : e.sig.ops()) {
    s += "A " + op.name();
    if (e.sig.sorted()) s += " : " + op.target;
    s += "  B = " + arityStr(op.arity);
    if (e.sig.sorted() && !op.childSorts.empty()) {
      s += " at";
      for (const auto& c : op.childSorts) s += " " + c;
    }
    s += "\n";
  }
  for (const auto& q : e.sys.equations) {
    s += "E " + q.name;
    if (!q.sort.empty()) s += " : " + q.sort;
    s += "  V = " + q.vars.display() + "\n";
    s += "  l " + q.lhs.str() + "\n";
    s += "  r " + q.rhs.str() + "\n";
  }
  return s;
}

}  // namespace qwi
