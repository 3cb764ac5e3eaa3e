// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include "qwi/sizes.hpp"

#include <set>

namespace qwi {

SizeSig SizeSig::basic() { return SizeSig{{{"zero", 0}, {"join", 2}}}; }

void SizeSig::validate() const {
  std::set<std::string> seen;
  bool nullary = false, binary = false;
  for (const auto& o : ops) {
    if (!seen.insert(o.name).second) throw Error(ErrorCode::NameClash, "duplicate size op " + o.name);
    nullary = nullary || o.arity == 0;
    binary = binary || o.arity == 2;
  }
  if (!nullary || !binary)
    throw Error(ErrorCode::ArityMismatch, "a size signature needs a nullary and a binary op");
}

const SizeOp& SizeSig::nullary() const {
  for (const auto& o : ops)
    if (o.arity == 0) return o;
  throw Error(ErrorCode::ArityMismatch, "no nullary size op");
}

const SizeOp& SizeSig::binary() const {
  for (const auto& o : ops)
    if (o.arity == 2) return o;
  throw Error(ErrorCode::ArityMismatch, "no binary size op");
}

std::optional<std::size_t> SizeSig::find(const std::string& name) const {
  for (std::size_t i = 0; i < ops.size(); ++i)
    if (ops[i].name == name) return i;
  return std::nullopt;
}

struct SizeNode {
  std::string op;
  std::vector<SizeVal> children;
  std::size_t height = 1;
  std::size_t hash = 0;
  std::string str;
};

SizeVal::SizeVal(std::string op, std::vector<SizeVal> children) {
  auto n = std::make_shared<SizeNode>();
  n->op = std::move(op);
  n->children = std::move(children);
  n->str = "(sz " + n->op;
  for (const auto& c : n->children) {
    n->height = std::max(n->height, c.height() + 1);
    n->str += " " + c.str();
  }
  n->str += ")";
  n->hash = std::hash<std::string>{}(n->str);
  n_ = std::move(n);
}

const std::string& SizeVal::op() const { return n_->op; }
const std::vector<SizeVal>& SizeVal::children() const { return n_->children; }
std::size_t SizeVal::height() const { return n_->height; }
std::size_t SizeVal::hash() const { return n_->hash; }
const std::string& SizeVal::str() const { return n_->str; }

bool operator==(const SizeVal& a, const SizeVal& b) {
  return a.n_ == b.n_ || (a.n_->hash == b.n_->hash && a.n_->str == b.n_->str);
}

SizeVal sizeFromSExpr(const SExpr& s) {
  if (s.isAtom || s.items.size() < 2 || !s.items[0].isAtom || s.items[0].atom != "sz" || !s.items[1].isAtom)
    throw Error(ErrorCode::SyntaxError, "expected (sz op child...) at " + std::to_string(s.line) + ":" +
                                            std::to_string(s.col));
  std::vector<SizeVal> kids;
  for (std::size_t i = 2; i < s.items.size(); ++i) kids.push_back(sizeFromSExpr(s.items[i]));
  return SizeVal(s.items[1].atom, std::move(kids));
}

SizeVal parseSize(const std::string& text) { return sizeFromSExpr(parseSExpr(text)); }

// σ a b ≤ j iff every b x < j;  i < σ a b iff i ≤ some b x.
bool SizeOrder::le(const SizeVal& i, const SizeVal& j) {
  std::string key = i.str() + "|" + j.str();
  if (auto it = leMemo_.find(key); it != leMemo_.end()) return it->second;
  bool r = true;
  for (const auto& c : i.children())
    if (!lt(c, j)) {
      r = false;
      break;
    }
  leMemo_.emplace(std::move(key), r);
  return r;
}

bool SizeOrder::lt(const SizeVal& i, const SizeVal& j) {
  std::string key = i.str() + "|" + j.str();
  if (auto it = ltMemo_.find(key); it != ltMemo_.end()) return it->second;
  bool r = false;
  for (const auto& c : j.children())
    if (le(i, c)) {
      r = true;
      break;
    }
  ltMemo_.emplace(std::move(key), r);
  return r;
}

SizeVal zero(const SizeSig& sig) { return SizeVal(sig.nullary().name, {}); }

SizeVal join(const SizeSig& sig, const SizeVal& i, const SizeVal& j) {
  return SizeVal(sig.binary().name, {i, j});
}

SizeVal suc(const SizeSig& sig, const SizeVal& i) { return join(sig, i, i); }

SizeVal upperBound(const SizeSig& sig, const std::string& op, const std::vector<SizeVal>& family) {
  auto k = sig.find(op);
  if (!k) throw Error(ErrorCode::UnknownOp, "size op " + op);
  if (sig.ops[*k].arity != family.size())
    throw Error(ErrorCode::ArityMismatch, op + " expects " + std::to_string(sig.ops[*k].arity) + " sizes");
  return SizeVal(op, family);
}

SizeUniverse::SizeUniverse(SizeSig sig, std::size_t height) : sig_(std::move(sig)), height_(height) {
  sig_.validate();
  std::vector<std::size_t> heightOf;
  auto add = [&](SizeVal v, std::vector<std::size_t> kids) {
    index_.emplace(v.str(), members_.size());
    heightOf.push_back(v.height());
    members_.push_back(std::move(v));
    kids_.push_back(std::move(kids));
  };
  if (height_ >= 1)
    for (const auto& o : sig_.ops)
      if (o.arity == 0) add(SizeVal(o.name, {}), {});
  for (std::size_t h = 2; h <= height_; ++h) {
    std::size_t pool = members_.size();  // members of height < h
    for (const auto& o : sig_.ops) {
      if (o.arity == 0 || pool == 0) continue;
      std::vector<std::size_t> idx(o.arity, 0);
      while (true) {
        std::size_t mh = 0;
        for (auto x : idx) mh = std::max(mh, heightOf[x]);
        if (mh == h - 1) {
          std::vector<SizeVal> kids;
          for (auto x : idx) kids.push_back(members_[x]);
          add(SizeVal(o.name, std::move(kids)), idx);
        }
        std::size_t x = o.arity;
        while (x-- > 0) {
          if (++idx[x] < pool) break;
          idx[x] = 0;
        }
        if (x == static_cast<std::size_t>(-1)) break;
      }
    }
  }

  const std::size_t n = members_.size();
  std::vector<signed char> ltm(n * n, -1), lem(n * n, -1);
  std::function<bool(std::size_t, std::size_t)> ltf, lef;
  lef = [&](std::size_t i, std::size_t j) -> bool {
    auto& m = lem[i * n + j];
    if (m >= 0) return m;
    bool r = true;
    for (auto c : kids_[i])
      if (!ltf(c, j)) {
        r = false;
        break;
      }
    m = r;
    return r;
  };
  ltf = [&](std::size_t i, std::size_t j) -> bool {
    auto& m = ltm[i * n + j];
    if (m >= 0) return m;
    bool r = false;
    for (auto c : kids_[j])
      if (lef(i, c)) {
        r = true;
        break;
      }
    m = r;
    return r;
  };
  lt_.assign(n * n, 0);
  le_.assign(n * n, 0);
  below_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      lt_[i * n + j] = ltf(i, j);
      le_[i * n + j] = lef(i, j);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (lt_[j * n + i]) below_[i].push_back(j);
}

std::optional<std::size_t> SizeUniverse::find(const SizeVal& s) const {
  auto it = index_.find(s.str());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> SizeUniverse::zeroId() const { return find(zero(sig_)); }

std::optional<std::size_t> SizeUniverse::sucId(std::size_t i) const { return find(suc(sig_, members_[i])); }

SizeSig sizeSignatureFor(const Signature& sig, const SystemOfEquations& sys) {
  SizeSig s = SizeSig::basic();
  for (const auto& o : sig.ops()) {
    if (o.arity.isNat()) throw Error(ErrorCode::InfinitaryArity, o.name() + " has NAT arity");
    s.ops.push_back({o.name(), o.arity.n});
  }
  for (const auto& e : sys.equations) {
    if (e.vars.countable) throw Error(ErrorCode::InfinitaryArity, e.name + " has a countable variable family");
    s.ops.push_back({e.name, e.vars.size()});
  }
  s.validate();
  return s;
}

}  // namespace qwi
