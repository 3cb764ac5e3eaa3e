// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include "qwi/value.hpp"

#include "qwi/term.hpp"

namespace qwi {

Value Value::atom(std::string s) {
  Value v;
  v.kind_ = Kind::Atom;
  v.atom_ = std::move(s);
  return v;
}

Value Value::nat(std::uint64_t n) { return Value(n); }

Value Value::tuple(std::vector<Value> items) {
  Value v;
  v.kind_ = Kind::Tuple;
  v.items_ = std::move(items);
  return v;
}

Value Value::term(const Term& t) {
  Value v;
  v.kind_ = Kind::TermV;
  v.term_ = std::make_shared<const Term>(t);
  return v;
}

const Term& Value::termValue() const { return *term_; }

std::string Value::str() const {
  switch (kind_) {
    case Kind::Atom: return atom_;
    case Kind::Nat: return std::to_string(nat_);
    case Kind::TermV: return term_->str();
    case Kind::Tuple: {
      std::string s = "(";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i) s += " ";
        s += items_[i].str();
      }
      return s + ")";
    }
  }
  return "";
}

int Value::compare(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_ ? -1 : 1;
  switch (a.kind_) {
    case Kind::Atom: return a.atom_.compare(b.atom_) < 0 ? -1 : (a.atom_ == b.atom_ ? 0 : 1);
    case Kind::Nat: return a.nat_ < b.nat_ ? -1 : (a.nat_ == b.nat_ ? 0 : 1);
    case Kind::TermV: {
      const std::string& x = a.term_->str();
      const std::string& y = b.term_->str();
      return x < y ? -1 : (x == y ? 0 : 1);
    }
    case Kind::Tuple: {
      std::size_t n = std::min(a.items_.size(), b.items_.size());
      for (std::size_t i = 0; i < n; ++i)
        if (int c = compare(a.items_[i], b.items_[i])) return c;
      if (a.items_.size() == b.items_.size()) return 0;
      return a.items_.size() < b.items_.size() ? -1 : 1;
    }
  }
  return 0;
}

}  // namespace qwi
