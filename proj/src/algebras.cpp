// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include "qwi/algebras.hpp"

#include <algorithm>

#include "qwi/error.hpp"

namespace qwi {

namespace {

std::uint64_t lengthOf(const std::vector<Value>& xs) {
  if (xs.empty()) return 0;
  std::uint64_t n = 1;
  for (const auto& x : xs) n += x.natValue();
  return n;
}

}  // namespace

AlgebraSpec lengthAlgebra(std::uint64_t cap) {
  AlgebraSpec a;
  a.name = "length";
  std::vector<Value> c;
  for (std::uint64_t n = 0; n <= cap; ++n) c.push_back(Value::nat(n));
  a.carrier = std::move(c);
  a.fin = [cap](const OpRef&, const std::vector<Value>& xs) -> std::optional<Value> {
    return Value::nat(std::min(lengthOf(xs), cap));
  };
  return a;
}

AlgebraSpec parityAlgebra() {
  AlgebraSpec a;
  a.name = "parity";
  a.carrier = std::vector<Value>{Value::nat(0), Value::nat(1)};
  a.fin = [](const OpRef&, const std::vector<Value>& xs) -> std::optional<Value> {
    return Value::nat(lengthOf(xs) % 2);
  };
  return a;
}

EliminatorInput parityEliminator() {
  EliminatorInput e;
  e.motive = [](std::size_t) { return std::vector<Value>{Value::nat(0), Value::nat(1)}; };
  e.step = [](const OpRef&, const std::vector<std::size_t>&, const std::vector<Value>& vs) {
    return Value::nat(lengthOf(vs) % 2);
  };
  return e;
}

std::vector<std::string> builtinAlgebraNames() { return {"length", "parity"}; }

AlgebraSpec builtinAlgebra(const std::string& name) {
  if (name == "length") return lengthAlgebra();
  if (name == "parity") return parityAlgebra();
  throw Error(ErrorCode::Usage, "no built-in algebra named " + name);
}

}  // namespace qwi
