// One line per acceptance criterion: PASS/FAIL, elapsed time, time limit, detail.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "qwi/algebras.hpp"
#include "qwi/construction.hpp"
#include "qwi/error.hpp"
#include "qwi/quotient.hpp"
#include "qwi/schema.hpp"
#include "qwi/serialize.hpp"
#include "qwi/sizes.hpp"
#include "support.hpp"

using namespace qwi;
using namespace testsupport;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sortedSpine(const Term& t) {
  std::string s;
  for (Term cur = t; cur.isNode() && !cur.params().empty(); cur = cur.children().entries.at(0)) s += cur.params()[0];
  std::sort(s.begin(), s.end());
  return s;
}

CongruenceQuotient bagAt(std::size_t d) {
  Elaboration e = elaborateFixture("bag");
  return CongruenceQuotient(buildUniverse(e.sig, e.sys, d));
}

Outcome bagQuotient() {
  CongruenceQuotient q = bagAt(3);
  std::map<std::string, std::set<std::size_t>> byMultiset;
  std::map<std::size_t, std::set<std::string>> byClass;
  const auto& u = q.universe();
  for (std::size_t i = 0; i < u.terms.size(); ++i) {
    byMultiset[sortedSpine(u.terms[i])].insert(q.classOf(i));
    byClass[q.classOf(i)].insert(sortedSpine(u.terms[i]));
  }
  bool bij = byMultiset.size() == q.classCount();
  for (const auto& [m, cs] : byMultiset) bij = bij && cs.size() == 1;
  for (const auto& [c, ms] : byClass) bij = bij && ms.size() == 1;
  return {q.classCount() == 6 && bij,
          std::to_string(q.classCount()) + " classes, " + std::to_string(byMultiset.size()) + " sorted multisets"};
}

Outcome monotone() {
  std::string detail;
  bool ok = true;
  for (std::size_t d = 1; d <= 3; ++d) {
    CongruenceQuotient small = bagAt(d), big = bagAt(d + 1);
    std::set<std::size_t> image;
    bool wellDefined = true;
    for (std::size_t c = 0; c < small.classCount(); ++c) {
      std::set<std::size_t> targets;
      for (auto m : small.members(c)) {
        auto k = big.classOfTerm(small.universe().terms[m]);
        targets.insert(k ? *k : static_cast<std::size_t>(-1));
      }
      wellDefined = wellDefined && targets.size() == 1 && *targets.begin() != static_cast<std::size_t>(-1);
      image.insert(*targets.begin());
    }
    bool inj = wellDefined && image.size() == small.classCount();
    ok = ok && inj;
    detail += "d=" + std::to_string(d) + ":" + std::to_string(small.classCount()) + "→" +
              std::to_string(big.classCount()) + (inj ? " " : " NOT-INJECTIVE ");
  }
  return {ok, detail};
}

Outcome eliminator() {
  CongruenceQuotient q = bagAt(3);
  ElimResult r = qwelim(q, parityEliminator());
  bool parity = true;
  for (std::size_t c = 0; c < q.classCount(); ++c)
    parity = parity && r.values[c].natValue() == sortedSpine(q.canon(c)).size() % 2;
  return {r.compHolds && r.compChecked == 7 && r.coherence.ok && r.coherence.checked > 0 && parity,
          "qwcomp at " + std::to_string(r.compChecked) + " nodes, coherence on " +
              std::to_string(r.coherence.checked) + " instance environments (" +
              std::to_string(r.coherence.skipped) + " beyond depth)"};
}

Outcome schemaFidelity() {
  QitDecl bag = parseDecl(readFile(fixture("qit/bag.qit")));
  DeclCheck c = checkDecl(bag);
  bool tree = c.accepted;
  for (const auto& line : lines(readFile(fixture("golden/bag_derivation.txt")))) {
    std::stringstream ss(line);
    std::string name, r;
    ss >> name;
    std::vector<std::string> want;
    while (ss >> r) want.push_back(r);
    bool found = false;
    for (const auto& [n, j] : c.ctors)
      if (n == name) {
        found = true;
        tree = tree && j.accepted && j.derivation.ruleSequence() == want && replayDerivation(bag, n, j.derivation);
      }
    tree = tree && found;
  }
  auto firstRule = [](const DeclCheck& d) {
    if (d.context) return d.context->rule;
    for (const auto& [n, j] : d.ctors)
      if (!j.accepted) return j.rejection.rule;
    return std::string("ACCEPT");
  };
  std::string prime = firstRule(checkDecl(parseDecl(readFile(fixture("qit/bagprime.qit")))));
  std::string left = firstRule(checkDecl(parseDecl(readFile(fixture("bad/q_left_of_pi.qit")))));
  return {tree && prime == "ConditionalEquation" && left == "StrictlyPositiveFunction",
          std::string("derivation ") + (tree ? "replays" : "differs") + "; Bag' " + prime + "; Q-left-of-∏ " + left};
}

Outcome encodings() {
  std::size_t matched = 0;
  std::string bad;
  for (const auto& ex : builtinExamples()) {
    bool ok = ex.table == readFile(fixture("encodings/" + ex.name + ".txt")) &&
              dumpStable(ex.elaboration.toJson()) + "\n" == readFile(fixture("encodings/" + ex.name + ".json"));
    if (ok)
      ++matched;
    else
      bad += " " + ex.name;
  }
  return {matched == 6, std::to_string(matched) + "/6 golden encodings" + (bad.empty() ? "" : "; differ:" + bad)};
}

Outcome plump() {
  SizeUniverse u(SizeSig::basic(), 3);
  const SizeSig& sig = u.sig();
  SizeOrder ord;
  std::size_t n = u.size(), checks = 0;
  bool ok = n == 5;
  auto expect = [&](bool b) {
    ++checks;
    ok = ok && b;
  };
  for (std::size_t i = 0; i < n; ++i) {
    expect(u.le(i, i));
    expect(ord.lt(u.member(i), suc(sig, u.member(i))));
    for (const auto& c : u.member(i).children()) expect(ord.lt(c, u.member(i)));
    for (std::size_t j = 0; j < n; ++j) {
      SizeVal ub = join(sig, u.member(i), u.member(j));
      expect(ord.lt(u.member(i), ub) && ord.lt(u.member(j), ub));
      if (u.lt(i, j)) expect(u.member(i).height() < u.member(j).height());
      for (std::size_t k = 0; k < n; ++k) {
        if (u.lt(i, j) && u.lt(j, k)) expect(u.lt(i, k));
        if (u.le(i, j) && u.lt(j, k)) expect(u.lt(i, k));
        if (u.lt(i, j) && u.le(j, k)) expect(u.lt(i, k));
      }
    }
  }
  return {ok, std::to_string(n) + " members, " + std::to_string(checks) + " law instances"};
}

Outcome wfrec() {
  SizeUniverse u(SizeSig::basic(), 3);
  // a step that reads every predecessor: the set of predecessor values plus i
  WfStep<std::vector<std::size_t>> step = [&](std::size_t i,
                                              const std::function<const std::vector<std::size_t>&(std::size_t)>& rec) {
    std::vector<std::size_t> out{i};
    for (auto j : u.below(i))
      for (auto x : rec(j)) out.push_back(x);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  auto a = wfRec<std::vector<std::size_t>>(u, step, WfOrder::Topological);
  auto b = wfRec<std::vector<std::size_t>>(u, step, WfOrder::Demand);
  bool unfold = true;
  for (std::size_t i = 0; i < u.size(); ++i)
    unfold = unfold && a[i] == step(i, [&](std::size_t j) -> const std::vector<std::size_t>& { return a[j]; });
  return {unfold && a == b, std::string("unfolding ") + (unfold ? "holds" : "fails") + " at all " +
                                std::to_string(u.size()) + " members; orders " + (a == b ? "agree" : "differ")};
}

Outcome cocontinuity() {
  auto u = std::make_shared<const SizeUniverse>(SizeSig::basic(), 3);
  std::size_t passed = 0, fns = 0;
  for (std::size_t x : {1, 2})
    for (const Diagram& d : {Diagram::constant(u, 2), Diagram::growingChain(u)}) {
      CocontinuityReport r = checkPowerCocontinuity(d, x);
      fns += r.functionsChecked;
      if (r.ok()) ++passed;
    }
  return {passed == 4, std::to_string(passed) + "/4 diagrams, " + std::to_string(fns) + " functions"};
}

Outcome constructionVsOracle() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"bag", "commvec"}) {
    Elaboration e = elaborateFixture(name);
    auto u = std::make_shared<const SizeUniverse>(SizeSig::basic(), 3);
    auto a = std::make_shared<const Approximation>(buildFixedPoint(e.sig, e.sys, u, 3));
    ColimitQW qw(a);
    CongruenceQuotient q(buildUniverse(e.sig, e.sys, 3));
    OracleComparison c = compareWithOracle(qw, q);
    bool fp = checkFixedPoint(*a).ok();
    ok = ok && c.ok() && fp;
    detail += std::string(name) + " " + std::to_string(c.colimitClasses) + "↔" + std::to_string(c.oracleClasses) +
              (c.ok() ? "" : " (" + c.failure + ")") + "; ";
  }
  return {ok, detail};
}

Outcome recAgreement() {
  Elaboration e = elaborateFixture("bag");
  auto u = std::make_shared<const SizeUniverse>(SizeSig::basic(), 3);
  auto a = std::make_shared<const Approximation>(buildFixedPoint(e.sig, e.sys, u, 3));
  ColimitQW qw(a);
  CongruenceQuotient q(buildUniverse(e.sig, e.sys, 3));
  OracleComparison c = compareWithOracle(qw, q);
  AlgebraSpec len = lengthAlgebra();
  auto mine = qw.qwrec(len);
  RecResult theirs = qwrec(q, len);
  std::size_t agree = 0;
  for (std::size_t k = 0; k < qw.classCount(); ++k)
    if (mine.values[k] == theirs.values[c.toOracle[k]]) ++agree;
  std::mt19937 rng(20);
  std::size_t rejected = 0;
  for (int k = 0; k < 20; ++k) {
    std::vector<Value> h = theirs.values;
    std::size_t at = rng() % h.size();
    h[at] = Value::nat(h[at].natValue() + 1 + rng() % 4);
    std::vector<Value> hc(qw.classCount());
    for (std::size_t m = 0; m < qw.classCount(); ++m) hc[m] = h[c.toOracle[m]];
    if (!checkHom(q, len, h).ok && !qw.checkHom(len, hc).ok) ++rejected;
  }
  return {mine.ok() && agree == qw.classCount() && rejected == 20,
          std::to_string(agree) + "/" + std::to_string(qw.classCount()) + " classes agree; " +
              std::to_string(rejected) + "/20 perturbations rejected"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all = {
      {1, "Bag quotient correctness", 1, bagQuotient},
      {2, "monotone approximation", 5, monotone},
      {3, "eliminator laws", 1, eliminator},
      {4, "schema fidelity", 1, schemaFidelity},
      {5, "encoding fidelity", 1, encodings},
      {6, "plump-order suite", 30, plump},
      {7, "wfRec contract", 5, wfrec},
      {8, "finite cocontinuity", 10, cocontinuity},
      {9, "construction vs oracle", 60, constructionVsOracle},
      {10, "qwrec agreement and uniqueness", 10, recAgreement},
  };
  int failures = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.pass && secs < c.limit;
    if (!pass) ++failures;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3fs < %gs", secs, c.limit);
    std::cout << (pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << " [" << buf << "] " << o.detail << "\n";
  }
  return failures == 0 ? 0 : 1;
}
