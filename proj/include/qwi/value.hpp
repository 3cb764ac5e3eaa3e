// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace qwi {

class Term;

// Closed universe of carrier values: atoms, naturals, tuples and terms.
class Value {
 public:
  enum class Kind { Atom, Nat, Tuple, TermV };

  Value() : Value(std::uint64_t{0}) {}
  static Value atom(std::string s);
  static Value nat(std::uint64_t n);
  static Value tuple(std::vector<Value> items);
  static Value term(const Term& t);

  Kind kind() const { return kind_; }
  const std::string& atomName() const { return atom_; }
  std::uint64_t natValue() const { return nat_; }
  const std::vector<Value>& items() const { return items_; }
  const Term& termValue() const;

  std::string str() const;

  friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Value& a, const Value& b) { return compare(a, b) != 0; }
  friend bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }
  static int compare(const Value& a, const Value& b);

 private:
  explicit Value(std::uint64_t n) : kind_(Kind::Nat), nat_(n) {}

  Kind kind_;
  std::string atom_;
  std::uint64_t nat_ = 0;
  std::vector<Value> items_;
  std::shared_ptr<const Term> term_;
};

}  // namespace qwi
