#include <doctest.h>

#include <algorithm>
#include <set>

#include "qwi/algebra.hpp"
#include "qwi/algebras.hpp"
#include "qwi/error.hpp"
#include "qwi/serialize.hpp"
#include "qwi/sexpr.hpp"
#include "support.hpp"

using namespace qwi;
using testsupport::elaborateFixture;

namespace {

// head of the cons-spine: nil ↦ none, cons x _ ↦ x
AlgebraSpec headAlgebra() {
  AlgebraSpec a;
  a.name = "head";
  a.carrier = std::vector<Value>{Value::atom("none"), Value::atom("a"), Value::atom("b")};
  a.fin = [](const OpRef& op, const std::vector<Value>&) -> std::optional<Value> {
    if (op.params.empty()) return Value::atom("none");
    return Value::atom(op.params[0]);
  };
  return a;
}

}  // namespace

TEST_CASE("terms print and parse back") {
  for (const char* s : {"(op nil)", "(op cons a (op cons b (var zs)))", "(op node a (fun n (var f (ix (s01 n)))))",
                        "(op sup (union (fun n (var (ix (even n)))) (fun m (op zero))))"}) {
    Term t = parseTerm(s);
    CHECK(t.str() == s);
    CHECK(parseTerm(t.str()) == t);
  }
  CHECK(parseTerm("(op cons a (op cons b (op nil)))").depth() == 3);
  CHECK(parseTerm("(var x)").depth() == 1);
  CHECK_THROWS_AS(parseTerm("(op cons a"), Error);
}

TEST_CASE("operator instances and arity checks") {
  Elaboration bag = elaborateFixture("bag");
  CHECK(bag.sig.ops().size() == 3);
  CHECK(bag.sig.op("cons_a").arity == Arity::fin(1));
  CHECK(bag.sig.finitary());
  CHECK_THROWS_AS(bag.sig.op("cons_c"), Error);
  CHECK_THROWS_AS(checkTerm(bag.sig, parseTerm("(op cons a (op nil) (op nil))")), Error);
  CHECK_NOTHROW(checkTerm(bag.sig, parseTerm("(op cons a (op cons b (op nil)))")));
}

TEST_CASE("bind into the length algebra unrolls the spine") {
  Elaboration bag = elaborateFixture("bag");
  Env env;
  env.named["zs"] = Value::nat(0);
  CHECK(bind(parseTerm("(op cons a (op cons b (var zs)))"), env, lengthAlgebra()).natValue() == 2);
  env.named["zs"] = Value::nat(5);
  CHECK(bind(parseTerm("(op cons a (var zs))"), env, lengthAlgebra()).natValue() == 6);
  CHECK_THROWS_AS(bind(parseTerm("(var ws)"), env, lengthAlgebra()), Error);
}

TEST_CASE("substitution is bind into the term algebra") {
  TermEnv env;
  env.named["zs"] = parseTerm("(op nil)");
  CHECK(substitute(parseTerm("(op cons a (op cons b (var zs)))"), env).str() ==
        "(op cons a (op cons b (op nil)))");
}

TEST_CASE("satisfies: length respects swap, head does not") {
  Elaboration bag = elaborateFixture("bag");
  SatReport ok = satisfies(lengthAlgebra(8), bag.sys, EnvSource::all(), &bag.sig);
  CHECK(ok.status == SatReport::Status::Satisfied);
  CHECK(ok.checked == 4 * 9);
  SatReport bad = satisfies(headAlgebra(), bag.sys, EnvSource::all(), &bag.sig);
  REQUIRE(bad.status == SatReport::Status::Violated);
  CHECK(bad.equation == "swap_a_b");
  // exhaustive re-check of independently drawn environments agrees
  for (std::uint64_t z = 0; z <= 8; ++z) {
    Env env;
    env.named["zs"] = Value::nat(z);
    for (const auto& e : bag.sys.equations)
      CHECK(bind(e.lhs, env, lengthAlgebra(8)) == bind(e.rhs, env, lengthAlgebra(8)));
  }
}

TEST_CASE("sampled checks on countable variable families") {
  Elaboration tree = elaborateFixture("inftree");
  CHECK_THROWS_AS(satisfies(lengthAlgebra(), tree.sys, EnvSource::all(), &tree.sig), Error);
}

TEST_CASE("index maps") {
  const IndexEnv& ix = IndexEnv::builtin();
  auto app = [&](const std::string& f, std::vector<std::uint64_t> xs) {
    std::vector<IndexExpr> args;
    for (auto x : xs) args.push_back(IndexExpr::cnst(x));
    return ix.eval(IndexExpr::app(f, args));
  };
  CHECK(app("even", {3}) == 6);
  CHECK(app("odd", {3}) == 7);
  for (std::uint64_t n = 0; n < 50; ++n) CHECK(app("pair", {app("unpair1", {n}), app("unpair2", {n})}) == n);
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 10; ++a)
    for (std::uint64_t b = 0; b < 10; ++b) seen.insert(app("pair", {a, b}));
  CHECK(seen.size() == 100);
}

TEST_CASE("term order is by depth first") {
  Elaboration bag = elaborateFixture("bag");
  Term nil = parseTerm("(op nil)"), one = parseTerm("(op cons b (op nil))"),
       two = parseTerm("(op cons a (op cons a (op nil)))");
  CHECK(compareTerms(bag.sig, nil, one) < 0);
  CHECK(compareTerms(bag.sig, one, two) < 0);
  CHECK(compareTerms(bag.sig, parseTerm("(op cons a (op nil))"), one) < 0);
  CHECK(compareTerms(bag.sig, two, two) == 0);
}

TEST_CASE("closed term enumeration counts") {
  Elaboration bag = elaborateFixture("bag");
  // lists of length < d over 2 letters
  for (std::size_t d = 1; d <= 5; ++d) {
    std::size_t expect = (std::size_t{1} << d) - 1;
    auto ts = enumerateTerms(bag.sig, {}, d);
    CHECK(ts.size() == expect);
    CHECK(std::is_sorted(ts.begin(), ts.end(),
                         [&](const Term& a, const Term& b) { return compareTerms(bag.sig, a, b) < 0; }));
  }
  auto open = enumerateTerms(bag.sig, {{"zs", ""}}, 2);
  CHECK(open.size() == 1 + 1 + 2 + 2);  // zs, nil, cons x nil, cons x zs
}

TEST_CASE("signature and system survive a JSON round trip") {
  for (const char* name : {"bag", "commvec", "inftree"}) {
    Elaboration e = elaborateFixture(name);
    Json j = toJson(e.sig, e.sys);
    Signature sig = signatureFromJson(j);
    SystemOfEquations sys = systemFromJson(j);
    CHECK(dumpStable(toJson(sig, sys)) == dumpStable(j));
  }
}

TEST_CASE("free algebra signature adds generators") {
  Elaboration bag = elaborateFixture("bag");
  auto [sig, sys] = freeAlgebraSignature(bag.sig, bag.sys, {"g"});
  CHECK(sig.ops().size() == bag.sig.ops().size() + 1);
  CHECK(sys.equations.size() == bag.sys.equations.size());
}
