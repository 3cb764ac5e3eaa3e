#include <doctest.h>

#include <sstream>

#include "qwi/error.hpp"
#include "qwi/schema.hpp"
#include "qwi/serialize.hpp"
#include "support.hpp"

using namespace qwi;
using namespace testsupport;

namespace {

QitDecl load(const std::string& rel) { return parseDecl(readFile(fixture(rel))); }

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : " ") + x;
  return s;
}

const Judgement& ctor(const DeclCheck& c, const std::string& name) {
  for (const auto& [n, j] : c.ctors)
    if (n == name) return j;
  throw std::runtime_error("no constructor " + name);
}

}  // namespace

TEST_CASE("parser reads the example declarations") {
  QitDecl bag = load("qit/bag.qit");
  CHECK(bag.name == "Bag");
  CHECK(bag.elementCtors.size() == 2);
  CHECK(bag.equalityCtors.size() == 1);
  QitDecl cv = load("qit/commvec.qit");
  CHECK(cv.indexed);
  CHECK_THROWS_AS(parseDecl("qit Q where\n  c : Q ->"), Error);
}

TEST_CASE("Bag derivation replays the published tree") {
  QitDecl bag = load("qit/bag.qit");
  DeclCheck c = checkDecl(bag);
  REQUIRE(c.accepted);
  for (const auto& line : lines(readFile(fixture("golden/bag_derivation.txt")))) {
    std::stringstream ss(line);
    std::string name, rule;
    ss >> name;
    std::vector<std::string> rules;
    while (ss >> rule) rules.push_back(rule);
    const Judgement& j = ctor(c, name);
    CHECK(j.accepted);
    CHECK(join(j.derivation.ruleSequence()) == join(rules));
    CHECK(replayDerivation(bag, name, j.derivation));
  }
  CHECK(ctor(c, "cons").derivation.judgement == "Γ ⊢ (X → Bag → Bag) ElCnstr");
}

TEST_CASE("a tampered derivation does not replay") {
  QitDecl bag = load("qit/bag.qit");
  Derivation d = ctor(checkDecl(bag), "cons").derivation;
  d.premises.at(0).premises.at(0).rule = "InductiveArgument";
  CHECK_FALSE(replayDerivation(bag, "cons", d));
}

TEST_CASE("conditional equations are rejected") {
  DeclCheck c = checkDecl(load("qit/bagprime.qit"));
  CHECK_FALSE(c.accepted);
  const Judgement& j = ctor(c, "comm");
  CHECK_FALSE(j.accepted);
  CHECK(j.rejection.rule == "ConditionalEquation");
}

TEST_CASE("each forbidden shape has its rejection") {
  for (const auto& line : lines(readFile(fixture("bad/expected.txt")))) {
    std::stringstream ss(line);
    std::string file, rule;
    ss >> file >> rule;
    CAPTURE(file);
    DeclCheck c = checkDecl(load("bad/" + file));
    CHECK_FALSE(c.accepted);
    std::string got = c.context ? c.context->rule : "";
    for (const auto& [n, j] : c.ctors)
      if (!j.accepted && got.empty()) got = j.rejection.rule;
    CHECK(got == rule);
  }
}

TEST_CASE("unit erasure") {
  QitDecl d = parseDecl("qit U where\n  u : U\n  c : (1 -> U) -> U\n");
  CHECK(checkDecl(d).accepted);
}

TEST_CASE("encodings match the frozen tables") {
  for (const auto& ex : builtinExamples()) {
    CAPTURE(ex.name);
    CHECK(ex.table == readFile(fixture("encodings/" + ex.name + ".txt")));
    CHECK(dumpStable(ex.elaboration.toJson()) + "\n" == readFile(fixture("encodings/" + ex.name + ".json")));
  }
}

// Shape facts read off the published A/B/E/V tables, for |X| = 2.
TEST_CASE("encodings have the published shapes") {
  auto arities = [](const Elaboration& e) {
    std::vector<std::string> out;
    for (const auto& op : e.sig.ops()) out.push_back(op.arity.str());
    return out;
  };
  auto vars = [](const Elaboration& e) {
    std::vector<std::string> out;
    for (const auto& q : e.sys.equations) out.push_back(q.vars.display());
    return out;
  };

  // A = 𝟙 + X, B = [𝟘, 𝟙], E = X × X, V = 𝟙
  const Elaboration& bag = builtinExample("bag").elaboration;
  CHECK(arities(bag) == std::vector<std::string>{"FIN(0)", "FIN(1)", "FIN(1)"});
  CHECK(bag.sys.equations.size() == 4);
  for (const auto& v : vars(bag)) CHECK(v == "𝟙");
  CHECK(bag.sys.equations[1].lhs.str() == "(op cons a (op cons b (var zs)))");
  CHECK(bag.sys.equations[1].rhs.str() == "(op cons b (op cons a (var zs)))");

  // A_0 = 𝟙, A_{i+1} = X with B_{i+1} x j = (i = j); E_0 = E_1 = 𝟘, E_2 = X × X
  const Elaboration& cv = builtinExample("commvec").elaboration;
  REQUIRE(cv.sig.sorted());
  std::map<std::string, int> perIndex;
  for (const auto& op : cv.sig.ops()) {
    ++perIndex[op.target];
    if (op.target != "0") CHECK(op.childSorts == std::vector<std::string>{std::to_string(std::stoi(op.target) - 1)});
  }
  CHECK(perIndex == std::map<std::string, int>{{"0", 1}, {"1", 2}, {"2", 2}});
  CHECK(cv.sys.equations.size() == 4);
  for (const auto& q : cv.sys.equations) {
    CHECK(q.sort == "2");
    CHECK(q.vars.sortOf("zs") == "0");
  }

  // A = 𝟙 + X, B = [𝟘, ℕ], V = ℕ, l = σ(x, η), r = σ(x, η∘b)
  const Elaboration& tree = builtinExample("inftree").elaboration;
  CHECK(arities(tree) == std::vector<std::string>{"FIN(0)", "NAT", "NAT"});
  for (const auto& v : vars(tree)) CHECK(v == "ℕ");
  CHECK(tree.sys.equations[0].lhs.str() == "(op node a (fun n (var f (ix n))))");

  // A = A', B = B', E = C', l = σ(l' c, η), r = σ(r' c, η)
  const Elaboration& ws = builtinExample("wsusp").elaboration;
  CHECK(ws.sys.equations.size() == 1);
  CHECK(ws.sys.equations[0].lhs.opName() == "succ");
  CHECK(ws.sys.equations[0].rhs.opName() == "succ");

  // l = σ_z(y, η), r = η_z(R_z y)
  const Elaboration& wr = builtinExample("wred").elaboration;
  CHECK(wr.sys.equations[0].rhs.isVar());
  CHECK(wr.sys.equations[0].lhs.tabularSize() == 2);

  // A = 𝟛, B = [𝟘, 𝟙, ℕ], V = [𝟘, ℕ, ℕ + ℕ, ℕ + ℕ, ℕ]
  const Elaboration& bl = builtinExample("blass").elaboration;
  CHECK(arities(bl) == std::vector<std::string>{"FIN(0)", "FIN(1)", "NAT"});
  CHECK(vars(bl) == std::vector<std::string>{"𝟘", "ℕ", "ℕ+ℕ", "ℕ+ℕ", "ℕ"});
}

TEST_CASE("elaboration scales with the carrier") {
  Elaboration e = elaborateFixture("bag", {"a", "b", "c"});
  CHECK(e.sig.ops().size() == 4);
  CHECK(e.sys.equations.size() == 9);
  Elaboration cv = elaborateFixture("commvec", {"a"});
  CHECK(cv.sys.equations.size() == 1);
}

TEST_CASE("missing carriers are a usage error") {
  CHECK_THROWS_AS(elaborate(load("qit/bag.qit"), Instantiation{}), Error);
}

TEST_CASE("eliminator signatures") {
  CHECK(deriveEliminatorSignature(load("qit/bag.qit")).str() == readFile(fixture("golden/bag_eliminator.txt")));
  auto cv = deriveEliminatorSignature(load("qit/commvec.qit"));
  CHECK(cv.motive == "P : ∏_{i : ℕ} CommVec i → 𝓤");
  auto tree = deriveEliminatorSignature(load("qit/inftree.qit"));
  REQUIRE(tree.steps.size() == 2);
  CHECK(tree.steps[1].second == "∏_{x : X} ∏_{f' : ℕ → ∑_{q : InfTree} P q} P (node x (π₁ ∘ f'))");
}

TEST_CASE("built-in library") {
  CHECK(builtinExamples().size() == 6);
  CHECK_THROWS_AS(builtinExample("nope"), Error);
  CHECK_FALSE(builtinExample("wred").elaboration.notes.empty());
}
