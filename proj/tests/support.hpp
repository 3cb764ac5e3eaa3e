#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qwi/schema.hpp"
#include "qwi/sexpr.hpp"

namespace testsupport {

inline std::string fixture(const std::string& rel) { return std::string(QWI_FIXTURES) + "/" + rel; }

inline std::string readFile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

inline qwi::Elaboration elaborateFixture(const std::string& name, std::vector<std::string> xs = {"a", "b"}) {
  qwi::Instantiation in;
  in.carriers["X"] = std::move(xs);
  if (name == "inftree") {
    qwi::declareMap(in.maps, qwi::parseSExpr("(bij s01 (0 1) (1 0) default i)"));
    in.mapNames = {"s01"};
  }
  return qwi::elaborate(qwi::parseDecl(readFile(fixture("qit/" + name + ".qit"))), in);
}

}  // namespace testsupport
