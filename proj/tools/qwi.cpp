// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "qwi/algebras.hpp"
#include "qwi/construction.hpp"
#include "qwi/error.hpp"
#include "qwi/quotient.hpp"
#include "qwi/schema.hpp"
#include "qwi/sexpr.hpp"
#include "qwi/sizes.hpp"

namespace {

using namespace qwi;

struct RunConfig {
  std::string command;
  std::string input;
  std::vector<std::string> terms;
  std::size_t depth = 3;
  std::size_t height = 3;
  std::size_t samples = 32;
  std::uint64_t natPrefix = 2;
  std::string format = "text";
  std::string algebra = "length";
  bool compareOracle = false;
  std::map<std::string, std::vector<std::string>> carriers;
};

struct Input {
  std::optional<QitDecl> decl;
  std::optional<Elaboration> builtin;
  std::string label;
};

std::vector<std::string> splitCommas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

// A file path, or the name of a built-in example.
Input loadInput(const std::string& path) {
  Input in;
  in.label = path;
  if (std::filesystem::exists(path)) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    in.decl = parseDecl(ss.str());
    return in;
  }
  for (const auto& ex : builtinExamples()) {
    if (ex.name != path) continue;
    if (!ex.source.empty()) in.decl = parseDecl(ex.source);
    in.builtin = ex.elaboration;
    return in;
  }
  throw Error(ErrorCode::Usage, "no such file or built-in example: " + path);
}

Elaboration elaborationOf(const Input& in, const RunConfig& cfg) {
  if (in.builtin && cfg.carriers.empty() && cfg.natPrefix == 2) return *in.builtin;
  if (!in.decl) throw Error(ErrorCode::Usage, in.label + " is given only as an encoding; it takes no parameters");
  auto check = checkDecl(*in.decl);
  if (!check.accepted) throw Error(ErrorCode::Usage, in.label + " is rejected by check:\n" + check.str());
  Instantiation inst;
  inst.natPrefix = cfg.natPrefix;
  for (const auto& p : in.decl->params) {
    if (p.kind != ParamDecl::Kind::Set) continue;
    auto it = cfg.carriers.find(p.name);
    if (it == cfg.carriers.end())
      throw Error(ErrorCode::Usage, "Set parameter " + p.name + " needs a carrier, e.g. --" + p.name + " a,b");
    inst.carriers[p.name] = it->second;
  }
  if (in.builtin) {
    // keep the example's index maps
    for (const auto& ex : builtinExamples())
      if (ex.name == in.label && ex.name == "inftree") {
        declareMap(inst.maps, parseSExpr("(bij s01 (0 1) (1 0) default i)"));
        inst.mapNames = {"s01"};
      }
  }
  return elaborate(*in.decl, inst);
}

void emit(const RunConfig& cfg, const std::string& text, const Json& j) {
  if (cfg.format == "json")
    std::cout << dumpStable(j) << "\n";
  else
    std::cout << text;
}

int cmdCheck(const RunConfig& cfg) {
  Input in = loadInput(cfg.input);
  if (!in.decl) throw Error(ErrorCode::Usage, cfg.input + " has no declaration to check");
  DeclCheck c = checkDecl(*in.decl);
  emit(cfg, c.str(), c.toJson());
  return c.accepted ? 0 : 1;
}

int cmdElaborate(const RunConfig& cfg) {
  Elaboration e = elaborationOf(loadInput(cfg.input), cfg);
  std::string text = encodingTable(e);
  for (const auto& n : e.notes) text += "note: " + n + "\n";
  emit(cfg, text, e.toJson());
  return 0;
}

int cmdEnum(const RunConfig& cfg) {
  Elaboration e = elaborationOf(loadInput(cfg.input), cfg);
  TermUniverse u = buildUniverse(e.sig, e.sys, cfg.depth);
  std::string text;
  Json arr = Json::array();
  for (std::size_t i = 0; i < u.terms.size(); ++i) {
    text += u.terms[i].str();
    if (!u.sorts[i].empty()) text += " : " + u.sorts[i];
    text += "\n";
    arr.push_back(u.terms[i].str());
  }
  Json j;
  j["depth"] = cfg.depth;
  j["terms"] = arr;
  emit(cfg, text, j);
  return 0;
}

int cmdEq(const RunConfig& cfg) {
  if (cfg.terms.size() != 2) throw Error(ErrorCode::Usage, "eq takes exactly two terms");
  Elaboration e = elaborationOf(loadInput(cfg.input), cfg);
  CongruenceQuotient q(buildUniverse(e.sig, e.sys, cfg.depth));
  EqVerdict v = decideEq(q, parseTerm(cfg.terms[0]), parseTerm(cfg.terms[1]));
  Json j;
  j["verdict"] = verdictName(v);
  emit(cfg, std::string(verdictName(v)) + "\n", j);
  return v == EqVerdict::Equal ? 0 : 1;
}

SatReport satisfiesSomehow(const AlgebraSpec& alg, const Elaboration& e, std::size_t k) {
  try {
    return satisfies(alg, e.sys, EnvSource::all(), &e.sig);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::InfeasibleExhaustive) throw;
    return satisfies(alg, e.sys, EnvSource::sampled(k), &e.sig);
  }
}

int cmdFold(const RunConfig& cfg) {
  Elaboration e = elaborationOf(loadInput(cfg.input), cfg);
  AlgebraSpec alg = builtinAlgebra(cfg.algebra);
  SatReport sat = satisfiesSomehow(alg, e, cfg.samples);
  Json j;
  j["algebra"] = alg.name;
  j["satisfies"] = sat.str();
  std::string text = "algebra " + alg.name + ": " + sat.str() + "\n";
  if (sat.status == SatReport::Status::Violated) {
    emit(cfg, text, j);
    return 1;
  }
  CongruenceQuotient q(buildUniverse(e.sig, e.sys, cfg.depth));
  RecResult r = qwrec(q, alg);
  Json vals = Json::array();
  for (std::size_t c = 0; c < q.classCount(); ++c) {
    text += q.canon(c).str() + " ↦ " + r.values[c].str() + "\n";
    vals.push_back({{"class", q.canon(c).str()}, {"value", r.values[c].str()}});
  }
  text += std::string("well-defined: ") + (r.wellDefined ? "yes" : "no") + "\n";
  j["values"] = vals;
  j["wellDefined"] = r.wellDefined;
  emit(cfg, text, j);
  return r.wellDefined && r.hom.ok ? 0 : 1;
}

int cmdElim(const RunConfig& cfg) {
  Input in = loadInput(cfg.input);
  Json j;
  std::string text;
  if (in.decl) {
    auto sig = deriveEliminatorSignature(*in.decl);
    text += sig.str();
    j["signature"] = sig.str();
  }
  Elaboration e = elaborationOf(in, cfg);
  CongruenceQuotient q(buildUniverse(e.sig, e.sys, cfg.depth));
  ElimResult r = qwelim(q, parityEliminator());
  text += "eliminator parity\n";
  for (std::size_t c = 0; c < q.classCount(); ++c) text += q.canon(c).str() + " ↦ " + r.values[c].str() + "\n";
  text += "coherence: " + std::to_string(r.coherence.checked) + " instances checked, " +
          std::to_string(r.coherence.skipped) + " beyond depth\n";
  text += "qwcomp: " + std::string(r.compHolds ? "holds" : "fails") + " at " + std::to_string(r.compChecked) +
          " nodes" + (r.compFailure.empty() ? "" : " (" + r.compFailure + ")") + "\n";
  j["coherenceChecked"] = r.coherence.checked;
  j["coherenceSkipped"] = r.coherence.skipped;
  j["compChecked"] = r.compChecked;
  j["compHolds"] = r.compHolds;
  emit(cfg, text, j);
  return r.compHolds ? 0 : 1;
}

int cmdConstruct(const RunConfig& cfg) {
  Elaboration e = elaborationOf(loadInput(cfg.input), cfg);
  auto u = std::make_shared<const SizeUniverse>(SizeSig::basic(), cfg.height);
  auto a = std::make_shared<const Approximation>(buildFixedPoint(e.sig, e.sys, u, cfg.depth));
  FixedPointReport fp = checkFixedPoint(*a);
  ColimitQW qw(a);
  std::string text = a->dump();
  text += "fixed point: " + std::string(fp.ok() ? "ok" : "FAILED " + fp.failure) + "\n";
  text += "colimit: " + std::to_string(qw.classCount()) + "\n";
  Json j = a->toJson();
  j["fixedPoint"] = fp.ok();
  j["colimit"] = qw.classCount();
  int status = fp.ok() ? 0 : 1;
  if (cfg.compareOracle) {
    CongruenceQuotient q(buildUniverse(e.sig, e.sys, cfg.depth));
    OracleComparison c = compareWithOracle(qw, q);
    text += "oracle: " + std::to_string(c.oracleClasses) + " classes; bijection " + (c.bijection ? "yes" : "no") +
            "; qwintro " + (c.respectsQwintro ? "respected" : "violated") + " (" + std::to_string(c.qwintroChecked) +
            " checked)\n";
    if (e.sig.sorted())
      for (const auto& [s, p] : c.perSort)
        text += "  index " + s + ": " + std::to_string(p.first) + " / " + std::to_string(p.second) + "\n";
    if (!c.failure.empty()) text += "  " + c.failure + "\n";
    j["oracle"] = {{"classes", c.oracleClasses}, {"bijection", c.bijection}, {"qwintro", c.respectsQwintro}};
    status = c.ok() ? 0 : 1;
  }
  emit(cfg, text, j);
  return status;
}

int cmdExamples(const RunConfig& cfg) {
  std::string text;
  Json arr = Json::array();
  for (const auto& ex : builtinExamples()) {
    text += ex.name + "  " + ex.title + "\n" + ex.table + "\n";
    arr.push_back({{"name", ex.name}, {"title", ex.title}, {"encoding", ex.elaboration.toJson()}});
  }
  emit(cfg, text, arr);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"qwi: quotient inductive types as QW-types"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("-d,--depth", cfg.depth, "term depth bound")->check(CLI::NonNegativeNumber);
  app.add_option("--size-height", cfg.height, "size universe height")->check(CLI::PositiveNumber);
  app.add_option("-K,--samples", cfg.samples, "environments sampled for infinite checks")
      ->check(CLI::PositiveNumber);
  app.add_option("--nat-prefix", cfg.natPrefix, "indices range over 0..N");

  auto withInput = [&](CLI::App* sub) { sub->add_option("input", cfg.input, "file or built-in example")->required(); };
  auto* check = app.add_subcommand("check", "schema judgement with derivation tree");
  withInput(check);
  auto* elab = app.add_subcommand("elaborate", "signature and system of equations");
  withInput(elab);
  auto* en = app.add_subcommand("enum", "closed terms up to the depth bound");
  withInput(en);
  auto* eq = app.add_subcommand("eq", "decide t1 = t2 in the quotient");
  withInput(eq);
  eq->add_option("terms", cfg.terms, "two terms")->expected(2)->required();
  auto* fold = app.add_subcommand("fold", "qwrec into a built-in algebra");
  withInput(fold);
  fold->add_option("--algebra", cfg.algebra, "length or parity");
  auto* elim = app.add_subcommand("elim", "eliminator signature and the parity eliminator");
  withInput(elim);
  auto* cons = app.add_subcommand("construct", "size-indexed fixed point and its colimit");
  withInput(cons);
  cons->add_flag("--compare-oracle", cfg.compareOracle, "check against the congruence closure");
  auto* ex = app.add_subcommand("examples", "built-in library");
  (void)ex;

  // `--Name a,b` for any name that is not a known option instantiates a Set
  // parameter; everything else goes to CLI11.
  static const std::set<std::string> known = {"help", "format", "depth", "size-height", "samples",
                                              "nat-prefix", "algebra", "compare-oracle"};
  std::vector<std::string> args;
  for (int k = argc - 1; k >= 1; --k) args.push_back(argv[k]);  // CLI11 wants them reversed
  std::vector<std::string> kept;
  for (std::size_t k = args.size(); k-- > 0;) {
    const std::string& a = args[k];
    if (a.rfind("--", 0) != 0 || a.size() < 3) {
      kept.push_back(a);
      continue;
    }
    std::string name = a.substr(2), vals;
    auto eqPos = name.find('=');
    if (eqPos != std::string::npos) {
      vals = name.substr(eqPos + 1);
      name = name.substr(0, eqPos);
    }
    if (known.count(name)) {
      kept.push_back(a);
      continue;
    }
    if (eqPos == std::string::npos) {
      if (k == 0) {
        std::cerr << "--" << name << " needs a comma-separated carrier\n";
        return 2;
      }
      vals = args[--k];
    }
    cfg.carriers[name] = splitCommas(vals);
  }
  std::reverse(kept.begin(), kept.end());

  try {
    app.parse(kept);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  try {
    if (cfg.command == "check") return cmdCheck(cfg);
    if (cfg.command == "elaborate") return cmdElaborate(cfg);
    if (cfg.command == "enum") return cmdEnum(cfg);
    if (cfg.command == "eq") return cmdEq(cfg);
    if (cfg.command == "fold") return cmdFold(cfg);
    if (cfg.command == "elim") return cmdElim(cfg);
    if (cfg.command == "construct") return cmdConstruct(cfg);
    return cmdExamples(cfg);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == ErrorCode::Usage ? 2 : 1;
  }
}
