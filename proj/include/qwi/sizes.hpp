// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qwi/error.hpp"
#include "qwi/sexpr.hpp"
#include "qwi/signature.hpp"

namespace qwi {

struct SizeOp {
  std::string name;
  std::size_t arity = 0;
};

// (Op, Ar) with finite arities. Needs a nullary op (for 0ˢ) and a binary
// op (for joins).
struct SizeSig {
  std::vector<SizeOp> ops;

  static SizeSig basic();  // {zero: 0, join: 2}
  void validate() const;
  const SizeOp& nullary() const;
  const SizeOp& binary() const;
  std::optional<std::size_t> find(const std::string& name) const;
};

struct SizeNode;

class SizeVal {
 public:
  SizeVal(std::string op, std::vector<SizeVal> children);

  const std::string& op() const;
  const std::vector<SizeVal>& children() const;
  std::size_t height() const;
  std::size_t hash() const;
  const std::string& str() const;  // (sz op child...)

  friend bool operator==(const SizeVal& a, const SizeVal& b);
  friend bool operator!=(const SizeVal& a, const SizeVal& b) { return !(a == b); }

 private:
  std::shared_ptr<const SizeNode> n_;
};

SizeVal parseSize(const std::string& text);
SizeVal sizeFromSExpr(const SExpr& s);

// Plump order, memoized on structural keys.
class SizeOrder {
 public:
  bool lt(const SizeVal& i, const SizeVal& j);
  bool le(const SizeVal& i, const SizeVal& j);

 private:
  std::unordered_map<std::string, bool> ltMemo_, leMemo_;
};

SizeVal zero(const SizeSig& sig);
SizeVal join(const SizeSig& sig, const SizeVal& i, const SizeVal& j);
SizeVal suc(const SizeSig& sig, const SizeVal& i);
SizeVal upperBound(const SizeSig& sig, const std::string& op, const std::vector<SizeVal>& family);

// All sizes of height ≤ h, ordered by height then literal order, with the
// strict order precomputed.
class SizeUniverse {
 public:
  SizeUniverse(SizeSig sig, std::size_t height);

  const SizeSig& sig() const { return sig_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<SizeVal>& members() const { return members_; }
  const SizeVal& member(std::size_t id) const { return members_[id]; }
  std::optional<std::size_t> find(const SizeVal& s) const;
  bool lt(std::size_t i, std::size_t j) const { return lt_[i * members_.size() + j]; }
  bool le(std::size_t i, std::size_t j) const { return le_[i * members_.size() + j]; }
  const std::vector<std::size_t>& below(std::size_t i) const { return below_[i]; }
  const std::vector<std::size_t>& children(std::size_t i) const { return kids_[i]; }
  std::optional<std::size_t> zeroId() const;
  std::optional<std::size_t> sucId(std::size_t i) const;

 private:
  SizeSig sig_;
  std::size_t height_;
  std::vector<SizeVal> members_;
  std::vector<std::vector<std::size_t>> kids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<char> lt_, le_;
  std::vector<std::vector<std::size_t>> below_;
};

// zero + join + one op per signature operator (arity B a) + one op per
// equation (arity |V e|).
SizeSig sizeSignatureFor(const Signature& sig, const SystemOfEquations& sys);

enum class WfOrder { Topological, Demand };

// Rec i = step i (λ j<i. Rec j). The callback passed to step may only be
// asked for members strictly below i.
template <class V>
using WfStep = std::function<V(std::size_t, const std::function<const V&(std::size_t)>&)>;

template <class V>
std::vector<V> wfRec(const SizeUniverse& u, const WfStep<V>& step, WfOrder order = WfOrder::Topological) {
  const std::size_t n = u.size();
  std::vector<std::optional<V>> out(n);
  std::vector<char> active(n, 0);
  std::function<const V&(std::size_t)> demand;
  auto guarded = [&](std::size_t i) {
    return std::function<const V&(std::size_t)>([&, i](std::size_t j) -> const V& {
      if (!u.lt(j, i))
        throw Error(ErrorCode::CycleDetected, u.member(j).str() + " is not below " + u.member(i).str());
      if (!out[j]) {
        if (order == WfOrder::Topological)
          throw Error(ErrorCode::CycleDetected, u.member(j).str() + " requested before it was computed");
        return demand(j);
      }
      return *out[j];
    });
  };
  demand = [&](std::size_t i) -> const V& {
    if (out[i]) return *out[i];
    if (active[i]) throw Error(ErrorCode::CycleDetected, "re-entered " + u.member(i).str());
    active[i] = 1;
    out[i] = step(i, guarded(i));
    active[i] = 0;
    return *out[i];
  };
  if (order == WfOrder::Topological) {
    for (std::size_t i = 0; i < n; ++i) out[i] = step(i, guarded(i));
  } else {
    for (std::size_t i = n; i-- > 0;) demand(i);
  }
  std::vector<V> res;
  res.reserve(n);
  for (auto& v : out) res.push_back(std::move(*v));
  return res;
}

}  // namespace qwi
