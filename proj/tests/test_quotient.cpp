#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "qwi/algebras.hpp"
#include "qwi/error.hpp"
#include "qwi/quotient.hpp"
#include "qwi/sexpr.hpp"
#include "support.hpp"

using namespace qwi;
using testsupport::elaborateFixture;

namespace {

// The multiset a Bag term denotes: its cons labels, sorted.
std::string sortedSpine(const Term& t) {
  std::string s;
  for (Term cur = t; cur.isNode() && !cur.params().empty(); cur = cur.children().entries.at(0)) s += cur.params()[0];
  std::sort(s.begin(), s.end());
  return s;
}

CongruenceQuotient bagQuotient(std::size_t d, std::vector<std::string> xs = {"a", "b"}) {
  Elaboration e = elaborateFixture("bag", std::move(xs));
  return CongruenceQuotient(buildUniverse(e.sig, e.sys, d));
}

}  // namespace

TEST_CASE("Bag classes are sorted multisets") {
  for (std::size_t d = 1; d <= 5; ++d) {
    CongruenceQuotient q = bagQuotient(d);
    CHECK(q.classCount() == d * (d + 1) / 2);
    const auto& u = q.universe();
    std::map<std::string, std::size_t> byMultiset;
    for (std::size_t i = 0; i < u.terms.size(); ++i) {
      auto [it, fresh] = byMultiset.emplace(sortedSpine(u.terms[i]), q.classOf(i));
      CHECK(it->second == q.classOf(i));
    }
    CHECK(byMultiset.size() == q.classCount());
  }
}

TEST_CASE("three letters") {
  // multisets of size ≤ 2 over 3 letters: 1 + 3 + 6
  CHECK(bagQuotient(3, {"a", "b", "c"}).classCount() == 10);
}

TEST_CASE("depth-d classes embed into depth-(d+1) classes") {
  for (std::size_t d = 1; d <= 3; ++d) {
    CongruenceQuotient small = bagQuotient(d), big = bagQuotient(d + 1);
    std::set<std::size_t> image;
    for (std::size_t c = 0; c < small.classCount(); ++c) {
      std::optional<std::size_t> k;
      for (auto m : small.members(c)) {
        auto km = big.classOfTerm(small.universe().terms[m]);
        REQUIRE(km);
        if (k) CHECK(*k == *km);
        k = km;
      }
      image.insert(*k);
    }
    CHECK(image.size() == small.classCount());
  }
}

TEST_CASE("canonical representatives are least members") {
  CongruenceQuotient q = bagQuotient(3);
  for (std::size_t c = 0; c < q.classCount(); ++c)
    for (auto m : q.members(c)) CHECK(compareTerms(q.universe().sig, q.canon(c), q.universe().terms[m]) <= 0);
  CHECK(q.dump().find("canon (op cons a (op cons b (op nil))) | members 2") != std::string::npos);
}

TEST_CASE("equality decisions") {
  CongruenceQuotient q = bagQuotient(3);
  auto eq = [&](const char* a, const char* b) { return decideEq(q, parseTerm(a), parseTerm(b)); };
  CHECK(eq("(op cons a (op cons b (op nil)))", "(op cons b (op cons a (op nil)))") == EqVerdict::Equal);
  CHECK(eq("(op cons a (op cons a (op nil)))", "(op cons b (op cons a (op nil)))") == EqVerdict::Distinct);
  CHECK(eq("(op cons a (op cons a (op cons b (op nil))))", "(op cons b (op cons a (op cons a (op nil))))") ==
        EqVerdict::Unknown);
}

TEST_CASE("empty system gives the discrete quotient") {
  Elaboration e = elaborateFixture("bag");
  e.sys.equations.clear();
  CongruenceQuotient q(buildUniverse(e.sig, e.sys, 3));
  CHECK(q.classCount() == q.universe().terms.size());
}

TEST_CASE("CommVec classes per index") {
  Elaboration e = elaborateFixture("commvec");
  CongruenceQuotient q(buildUniverse(e.sig, e.sys, 3));
  // multisets of size i over 2 letters
  CHECK(q.classCountBySort() == std::map<std::string, std::size_t>{{"0", 1}, {"1", 2}, {"2", 3}});
}

TEST_CASE("qwintro follows the constructors") {
  CongruenceQuotient q = bagQuotient(3);
  const auto& sig = q.universe().sig;
  auto nil = q.qwintro(sig.op("nil"), {});
  REQUIRE(nil);
  CHECK(q.canon(*nil).str() == "(op nil)");
  auto a = q.qwintro(sig.op("cons_a"), {*nil});
  auto ba = q.qwintro(sig.op("cons_b"), {*a});
  auto b = q.qwintro(sig.op("cons_b"), {*nil});
  auto ab = q.qwintro(sig.op("cons_a"), {*b});
  CHECK(*ba == *ab);
  CHECK_FALSE(q.qwintro(sig.op("cons_a"), {*ab}));  // beyond depth
}

TEST_CASE("qwrec into the length algebra") {
  CongruenceQuotient q = bagQuotient(3);
  RecResult r = qwrec(q, lengthAlgebra());
  CHECK(r.wellDefined);
  CHECK(r.hom.ok);
  auto k = q.classOfTerm(parseTerm("(op cons a (op cons b (op nil)))"));
  REQUIRE(k);
  CHECK(r.values[*k].natValue() == 2);
  for (std::size_t c = 0; c < q.classCount(); ++c)
    CHECK(r.values[c].natValue() == sortedSpine(q.canon(c)).size());
}

TEST_CASE("length + 1 is not a homomorphism") {
  CongruenceQuotient q = bagQuotient(3);
  RecResult r = qwrec(q, lengthAlgebra());
  std::vector<Value> h;
  for (const auto& v : r.values) h.push_back(Value::nat(v.natValue() + 1));
  HomReport rep = checkHom(q, lengthAlgebra(), h);
  CHECK_FALSE(rep.ok);
  CHECK(rep.failure.find("nil") != std::string::npos);
}

TEST_CASE("qwrec is the unique homomorphism") {
  CongruenceQuotient q = bagQuotient(3);
  AlgebraSpec alg = lengthAlgebra();
  RecResult r = qwrec(q, alg);
  CHECK(qwuniqCheck(q, alg, r.values).equalsRec);
  std::mt19937 rng(7);
  for (int k = 0; k < 20; ++k) {
    std::vector<Value> h = r.values;
    std::size_t c = rng() % h.size();
    h[c] = Value::nat(h[c].natValue() + 1 + rng() % 3);
    UniqReport u = qwuniqCheck(q, alg, h);
    CHECK((!u.hom.ok || u.equalsRec));
    CHECK_FALSE(u.hom.ok);
  }
}

TEST_CASE("parity eliminator: computation rule and coherence") {
  CongruenceQuotient q = bagQuotient(3);
  ElimResult r = qwelim(q, parityEliminator());
  CHECK(r.compHolds);
  CHECK(r.compChecked == 7);
  CHECK(r.coherence.ok);
  CHECK(r.coherence.checked > 0);
  for (std::size_t c = 0; c < q.classCount(); ++c) CHECK(r.values[c].natValue() == sortedSpine(q.canon(c)).size() % 2);
}

TEST_CASE("an order-sensitive eliminator is incoherent") {
  CongruenceQuotient q = bagQuotient(3);
  EliminatorInput head;
  head.motive = [](std::size_t) {
    return std::vector<Value>{Value::atom("none"), Value::atom("a"), Value::atom("b")};
  };
  head.step = [](const OpRef& op, const std::vector<std::size_t>&, const std::vector<Value>&) {
    return op.params.empty() ? Value::atom("none") : Value::atom(op.params[0]);
  };
  CoherenceReport c = checkCoherence(q, head);
  CHECK_FALSE(c.ok);
  CHECK(c.witness.find("swap_a_b") != std::string::npos);
  CHECK_THROWS_AS(qwelim(q, head), Error);
}
