// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#pragma once

#include <string>
#include <vector>

#include "qwi/term.hpp"

namespace qwi {

// Generic s-expression: an atom or a list.
struct SExpr {
  bool isAtom = true;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 1, col = 1;

  std::string str() const;
};

SExpr parseSExpr(const std::string& text);
std::vector<SExpr> parseSExprs(const std::string& text);

// (var x) | (var (ix e)) | (var f (ix e)) | (op f p... child...)
// | (fun i body) | (union m m) | (fam k e...)
Term parseTerm(const std::string& text);
Term termFromSExpr(const SExpr& s);
IndexExpr indexFromSExpr(const SExpr& s);

// (bij b (0 1) (1 0) default i) declarations into an index environment.
void declareMap(IndexEnv& env, const SExpr& decl);

}  // namespace qwi
