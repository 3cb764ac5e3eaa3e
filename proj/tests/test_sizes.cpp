#include <doctest.h>

#include <functional>

#include "qwi/error.hpp"
#include "qwi/sizes.hpp"
#include "support.hpp"

using namespace qwi;

namespace {

// Unmemoized plump order, straight from the two generating rules.
bool naiveLe(const SizeVal& i, const SizeVal& j);
bool naiveLt(const SizeVal& i, const SizeVal& j) {
  for (const auto& c : j.children())
    if (naiveLe(i, c)) return true;
  return false;
}
bool naiveLe(const SizeVal& i, const SizeVal& j) {
  for (const auto& c : i.children())
    if (!naiveLt(c, j)) return false;
  return true;
}

const SizeUniverse& u3() {
  static const SizeUniverse u(SizeSig::basic(), 3);
  return u;
}

}  // namespace

TEST_CASE("height-3 universe over zero and join") {
  const SizeUniverse& u = u3();
  CHECK(u.size() == 5);
  CHECK(u.member(0) == zero(u.sig()));
  CHECK(u.member(1) == suc(u.sig(), zero(u.sig())));
  CHECK(SizeUniverse(SizeSig::basic(), 1).size() == 1);
  CHECK(SizeUniverse(SizeSig::basic(), 2).size() == 2);
}

TEST_CASE("order agrees with the generating rules") {
  const SizeUniverse& u = u3();
  SizeOrder ord;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j) {
      CHECK(u.lt(i, j) == naiveLt(u.member(i), u.member(j)));
      CHECK(u.le(i, j) == naiveLe(u.member(i), u.member(j)));
      CHECK(ord.lt(u.member(i), u.member(j)) == u.lt(i, j));
    }
}

TEST_CASE("plump laws hold exhaustively") {
  const SizeUniverse& u = u3();
  const SizeSig& sig = u.sig();
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(u.le(i, i));
    CHECK_FALSE(u.lt(i, i));
    CHECK(u.le(*u.zeroId(), i));
    SizeOrder ord;
    CHECK(ord.lt(u.member(i), suc(sig, u.member(i))));  // <suc
    for (const auto& c : u.member(i).children()) CHECK(ord.lt(c, u.member(i)));  // plump3
    for (std::size_t j = 0; j < n; ++j) {
      SizeVal ub = join(sig, u.member(i), u.member(j));  // <ub
      CHECK(ord.lt(u.member(i), ub));
      CHECK(ord.lt(u.member(j), ub));
      CHECK(ub == upperBound(sig, "join", {u.member(i), u.member(j)}));
      if (u.lt(i, j)) CHECK(u.member(i).height() < u.member(j).height());
      for (std::size_t k = 0; k < n; ++k) {
        if (u.lt(i, j) && u.lt(j, k)) CHECK(u.lt(i, k));
        if (u.le(i, j) && u.lt(j, k)) CHECK(u.lt(i, k));
        if (u.lt(i, j) && u.le(j, k)) CHECK(u.lt(i, k));
      }
    }
  }
  SizeOrder ord;
  SizeVal j = join(sig, u.member(1), u.member(0));
  CHECK_FALSE(ord.lt(j, j));
  CHECK_THROWS_AS(upperBound(sig, "join", {u.member(0)}), Error);
}

TEST_CASE("below sets are the strict predecessors") {
  const SizeUniverse& u = u3();
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::vector<std::size_t> expect;
    for (std::size_t j = 0; j < u.size(); ++j)
      if (u.lt(j, i)) expect.push_back(j);
    CHECK(u.below(i) == expect);
    for (auto j : u.below(i)) CHECK(j < i);  // index order is topological
  }
  CHECK(u.below(*u.zeroId()).empty());
}

TEST_CASE("size literals") {
  SizeVal s = parseSize("(sz join (sz zero) (sz join (sz zero) (sz zero)))");
  CHECK(s.height() == 3);
  CHECK(parseSize(s.str()) == s);
  CHECK(u3().find(s).has_value());
}

TEST_CASE("size signature for a system") {
  Elaboration bag = testsupport::elaborateFixture("bag");
  SizeSig s = sizeSignatureFor(bag.sig, bag.sys);
  std::vector<std::size_t> ar;
  for (const auto& o : s.ops) ar.push_back(o.arity);
  CHECK(ar == std::vector<std::size_t>{0, 2, 0, 1, 1, 1, 1, 1, 1});
  Elaboration tree = testsupport::elaborateFixture("inftree");
  CHECK_THROWS_AS(sizeSignatureFor(tree.sig, tree.sys), Error);
}

TEST_CASE("wfRec: unfolding, rank, and order independence") {
  const SizeUniverse& u = u3();
  WfStep<std::size_t> rank = [&](std::size_t i, const std::function<const std::size_t&(std::size_t)>& rec) {
    std::size_t r = 0;
    for (auto j : u.below(i)) r = std::max(r, rec(j) + 1);
    return r;
  };
  auto a = wfRec<std::size_t>(u, rank, WfOrder::Topological);
  auto b = wfRec<std::size_t>(u, rank, WfOrder::Demand);
  CHECK(a == b);
  CHECK(a[0] == 0);
  CHECK(a[1] == 1);
  // brute force: longest <-chain ending at i
  std::function<std::size_t(std::size_t)> chain = [&](std::size_t i) {
    std::size_t r = 0;
    for (std::size_t j = 0; j < u.size(); ++j)
      if (u.lt(j, i)) r = std::max(r, chain(j) + 1);
    return r;
  };
  for (std::size_t i = 0; i < u.size(); ++i) {
    CHECK(a[i] == chain(i));
    CHECK(a[i] == rank(i, [&](std::size_t j) -> const std::size_t& { return a[j]; }));
  }
  WfStep<int> zeros = [](std::size_t, const std::function<const int&(std::size_t)>&) { return 0; };
  for (int v : wfRec<int>(u, zeros)) CHECK(v == 0);
}

TEST_CASE("wfRec refuses to look upward") {
  const SizeUniverse& u = u3();
  WfStep<int> cheat = [&](std::size_t i, const std::function<const int&(std::size_t)>& rec) {
    return i + 1 < u.size() ? rec(i + 1) : 0;
  };
  CHECK_THROWS_AS(wfRec<int>(u, cheat), Error);
}
