#include <doctest.h>

#include <numeric>
#include <set>

#include "qwi/algebras.hpp"
#include "qwi/construction.hpp"
#include "qwi/error.hpp"
#include "qwi/sexpr.hpp"
#include "support.hpp"

using namespace qwi;
using testsupport::elaborateFixture;

namespace {

std::shared_ptr<const SizeUniverse> universe(std::size_t h) {
  return std::make_shared<const SizeUniverse>(SizeSig::basic(), h);
}

// Colimit class count by closing the generating relation directly.
std::size_t bruteColimit(const Diagram& d) {
  const SizeUniverse& u = *d.universe;
  std::vector<std::pair<std::size_t, std::size_t>> pts;
  for (std::size_t i = 0; i < u.size(); ++i) {
    bool interior = false;
    for (std::size_t k = 0; k < u.size(); ++k) interior = interior || u.lt(i, k);
    if (interior)
      for (std::size_t x = 0; x < d.sizes[i]; ++x) pts.push_back({i, x});
  }
  std::vector<std::size_t> cls(pts.size());
  std::iota(cls.begin(), cls.end(), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t p = 0; p < pts.size(); ++p)
      for (std::size_t q = 0; q < pts.size(); ++q) {
        if (cls[p] == cls[q]) continue;
        auto [i, x] = pts[p];
        auto [j, y] = pts[q];
        for (std::size_t k = 0; k < u.size(); ++k)
          if (u.lt(i, k) && u.lt(j, k) && d.delta(i, k)[x] == d.delta(j, k)[y]) {
            std::size_t lo = std::min(cls[p], cls[q]), hi = std::max(cls[p], cls[q]);
            for (auto& c : cls)
              if (c == hi) c = lo;
            changed = true;
            break;
          }
      }
  }
  return std::set<std::size_t>(cls.begin(), cls.end()).size();
}

std::shared_ptr<const Approximation> approx(const Elaboration& e, std::size_t d, std::size_t h) {
  return std::make_shared<const Approximation>(buildFixedPoint(e.sig, e.sys, universe(h), d));
}

}  // namespace

TEST_CASE("colimits of small diagrams") {
  auto u = universe(3);
  Diagram c = Diagram::constant(u, 2);
  CHECK(colim(c).classCount == 2);
  CHECK(colim(c).coconeHolds);
  Diagram g = Diagram::growingChain(u);
  CHECK(colim(g).classCount == bruteColimit(g));
  CHECK(colim(g).classCount == 3);
  CHECK(colim(Diagram::constant(u, 0)).classCount == 0);
}

TEST_CASE("a non-functorial diagram is refused") {
  Diagram d = Diagram::constant(universe(3), 2);
  d.maps[{0, 1}] = {1, 0};
  CHECK_THROWS_AS(d.validate(), Error);
  CHECK_THROWS_AS(colim(d), Error);
  CHECK_THROWS_AS(checkPowerCocontinuity(d, 2), Error);
}

TEST_CASE("finite powers commute with the colimit") {
  auto u = universe(3);
  for (std::size_t x : {1, 2}) {
    for (const Diagram& d : {Diagram::constant(u, 2), Diagram::growingChain(u)}) {
      CocontinuityReport r = checkPowerCocontinuity(d, x);
      CHECK(r.ok());
      CHECK(r.powerClasses == r.witnesses.size());
      std::size_t expect = 1;
      for (std::size_t k = 0; k < x; ++k) expect *= r.colimitClasses;
      CHECK(r.powerClasses == expect);
    }
  }
}

TEST_CASE("diamond at the bottom and one step up") {
  auto u = universe(3);
  Elaboration bag1 = elaborateFixture("bag", {"a"});
  Stage empty;
  StageLookup none = [&](std::size_t) -> const Stage& { return empty; };
  CHECK(diamond(bag1.sig, bag1.sys, *u, 0, none, 3).size() == 0);

  std::vector<Stage> st;
  st.push_back(diamond(bag1.sig, bag1.sys, *u, 0, none, 2));
  StageLookup below = [&](std::size_t j) -> const Stage& { return st.at(j); };
  Stage one = diamond(bag1.sig, bag1.sys, *u, 1, below, 2);
  CHECK(one.size() == 2);
  CHECK(one.instances.empty());
  CHECK(one.flat[0].str() == "(op nil)");
  CHECK(one.flat[1].str() == "(op cons a (op nil))");
}

TEST_CASE("Bag fixed point: stage sizes and laws") {
  auto a = approx(elaborateFixture("bag"), 3, 3);
  std::vector<std::size_t> sizes;
  for (const auto& s : a->stages) sizes.push_back(s.size());
  CHECK(sizes == std::vector<std::size_t>{0, 7, 6, 6, 6});
  CHECK(a->dump().rfind("stage (sz zero): 0\n", 0) == 0);
  FixedPointReport fp = checkFixedPoint(*a);
  CHECK(fp.ok());
  CHECK(fp.qwintro2Checked > 0);
  CHECK(a->diagram().sizes == sizes);
  // swap identifications only appear above ↑0ˢ
  CHECK(a->stages[1].instances.empty());
  CHECK_FALSE(a->stages[2].instances.empty());
}

TEST_CASE("stages stabilise for a one-letter alphabet") {
  auto a = approx(elaborateFixture("bag", {"a"}), 3, 3);
  for (std::size_t i = 2; i < a->stages.size(); ++i) CHECK(a->stages[i].size() == a->stages[2].size());
  CHECK(checkFixedPoint(*a).ok());
}

TEST_CASE("colimit QW structure on Bag") {
  auto a = approx(elaborateFixture("bag"), 3, 3);
  ColimitQW qw(a);
  CHECK(qw.classCount() == 6);
  CHECK(qw.colimit().coconeHolds);
  auto nil = qw.qwintro(a->sig.op("nil"), {});
  REQUIRE(nil);
  CHECK(qw.representative(*nil).str() == "(op nil)");
  auto eq = qw.checkQwequate();
  CHECK(eq.ok);
  CHECK(eq.checked > 0);

  CongruenceQuotient q(buildUniverse(a->sig, a->sys, 3));
  OracleComparison c = compareWithOracle(qw, q);
  CHECK(c.bijection);
  CHECK(c.respectsQwintro);
  REQUIRE(c.toOracle.size() == 6);
  CHECK(q.canon(c.toOracle[*nil]).str() == "(op nil)");
}

TEST_CASE("qwrec on the colimit matches the oracle") {
  auto a = approx(elaborateFixture("bag"), 3, 3);
  ColimitQW qw(a);
  CongruenceQuotient q(buildUniverse(a->sig, a->sys, 3));
  OracleComparison c = compareWithOracle(qw, q);
  auto mine = qw.qwrec(lengthAlgebra());
  CHECK(mine.ok());
  RecResult theirs = qwrec(q, lengthAlgebra());
  for (std::size_t k = 0; k < qw.classCount(); ++k) CHECK(mine.values[k] == theirs.values[c.toOracle[k]]);
  CHECK(qw.checkHom(lengthAlgebra(), mine.values).ok);
  std::vector<Value> off = mine.values;
  off[0] = Value::nat(off[0].natValue() + 1);
  CHECK_FALSE(qw.checkHom(lengthAlgebra(), off).ok);
}

TEST_CASE("CommVec gives per-index bijections") {
  auto a = approx(elaborateFixture("commvec"), 3, 3);
  ColimitQW qw(a);
  CongruenceQuotient q(buildUniverse(a->sig, a->sys, 3));
  OracleComparison c = compareWithOracle(qw, q);
  CHECK(c.ok());
  using P = std::pair<std::size_t, std::size_t>;
  CHECK(c.perSort == std::map<std::string, P>{{"0", {1, 1}}, {"1", {2, 2}}, {"2", {3, 3}}});
}

TEST_CASE("empty system: both quotients are discrete") {
  Elaboration e = elaborateFixture("bag");
  e.sys.equations.clear();
  auto a = approx(e, 3, 3);
  ColimitQW qw(a);
  CongruenceQuotient q(buildUniverse(e.sig, e.sys, 3));
  CHECK(q.classCount() == 7);
  CHECK(compareWithOracle(qw, q).ok());
}

TEST_CASE("too small a universe is reported") {
  Elaboration e = elaborateFixture("bag");
  auto a = approx(e, 3, 2);
  ColimitQW qw(a);
  CongruenceQuotient q(buildUniverse(e.sig, e.sys, 3));
  CHECK_THROWS_AS(compareWithOracle(qw, q), Error);
  try {
    compareWithOracle(qw, q);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NotStabilized);
  }
}

TEST_CASE("infinitary signatures are outside the construction") {
  Elaboration tree = elaborateFixture("inftree");
  CHECK_THROWS_AS(buildFixedPoint(tree.sig, tree.sys, universe(3), 2), Error);
}

TEST_CASE("structured export") {
  auto a = approx(elaborateFixture("bag"), 3, 3);
  Json j = a->toJson();
  CHECK(j["stages"].size() == 5);
  CHECK(j["stages"][1]["classes"] == 7);
  CHECK(dumpStable(j) == dumpStable(approx(elaborateFixture("bag"), 3, 3)->toJson()));
}
