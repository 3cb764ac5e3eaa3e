// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#include <algorithm>
#include <set>

#include "qwi/error.hpp"
#include "qwi/schema.hpp"

namespace qwi {

Json Elaboration::toJson() const {
  Json j = qwi::toJson(sig, sys);
  if (!notes.empty()) j["notes"] = notes;
  return j;
}

namespace {

using K = TypeAst::Kind;

[[noreturn]] void unsupported(const SrcPos& p, const std::string& m) {
  throw Error(ErrorCode::UnsupportedParameterType, p.str() + ": " + m);
}

struct Slot {
  enum class Kind { Param, MapParam, Erased, Child, NatChild, FinChildren };
  Kind kind;
  std::string binder;
  std::vector<std::string> domain;  // Param/MapParam values, FinChildren labels
  TermAst index;                    // child sort expression (indexed QITs)
  TypeAst type;
};

const ParamDecl* findParam(const QitDecl& d, const std::string& n) {
  for (const auto& p : d.params)
    if (p.name == n) return &p;
  return nullptr;
}

// Values of a constant type at this instantiation, or nullopt if it is
// not a finite/Nat constant.
std::optional<std::vector<std::string>> constValues(const QitDecl& d, const Instantiation& inst, const TypeAst& t) {
  if (t.kind != K::Const || !t.args.empty()) return std::nullopt;
  if (t.name == "Nat") {
    std::vector<std::string> v;
    for (std::uint64_t i = 0; i <= inst.natPrefix; ++i) v.push_back(std::to_string(i));
    return v;
  }
  const ParamDecl* p = findParam(d, t.name);
  if (!p) return std::nullopt;
  if (p->kind == ParamDecl::Kind::Finite) return p->elements;
  if (p->kind == ParamDecl::Kind::Set) {
    auto it = inst.carriers.find(p->name);
    if (it == inst.carriers.end()) unsupported(t.pos, "no carrier given for " + p->name);
    return it->second;
  }
  return std::nullopt;
}

bool isNatToNat(const TypeAst& t) {
  return t.kind == K::Pi && t.left->kind == K::Const && t.left->name == "Nat" && t.right->kind == K::Const &&
         t.right->name == "Nat";
}

void flatten(const QitDecl& d, const Instantiation& inst, const std::string& binder, const TypeAst& t,
             bool equality, std::vector<Slot>& out) {
  if (t.kind == K::Unit) return;
  if (auto vals = constValues(d, inst, t)) {
    out.push_back({Slot::Kind::Param, binder, *vals, {}, t});
    return;
  }
  if (t.kind == K::Const && t.name == "isIso") {
    out.push_back({Slot::Kind::Erased, binder, {}, {}, t});
    return;
  }
  if (t.kind == K::QRef) {
    out.push_back({Slot::Kind::Child, binder, {}, t.args.empty() ? TermAst{} : t.args[0], t});
    return;
  }
  if (t.kind == K::Pi && t.right->kind == K::QRef) {
    TermAst ix = t.right->args.empty() ? TermAst{} : t.right->args[0];
    if (t.left->kind == K::Const && t.left->name == "Nat") {
      out.push_back({Slot::Kind::NatChild, binder, {}, ix, t});
      return;
    }
    if (auto vals = constValues(d, inst, *t.left)) {
      out.push_back({Slot::Kind::FinChildren, binder, *vals, ix, t});
      return;
    }
  }
  if (equality && isNatToNat(t)) {
    if (inst.mapNames.empty()) unsupported(t.pos, binder + " : ℕ → ℕ needs declared index maps");
    out.push_back({Slot::Kind::MapParam, binder, inst.mapNames, {}, t});
    return;
  }
  if (!equality && t.kind == K::Sigma && (t.binder.empty() || !t.right->mentionsVar(t.binder))) {
    flatten(d, inst, "", *t.left, equality, out);
    flatten(d, inst, "", *t.right, equality, out);
    return;
  }
  unsupported(t.pos, "cannot elaborate an argument of type " + typeStr(t));
}

struct CtorShape {
  std::string name;
  std::vector<std::vector<Slot>> args;  // one slot list per ∏-argument
  TermAst target;
};

CtorShape shapeOf(const QitDecl& d, const Instantiation& inst, const CtorDecl& c, bool equality) {
  CtorShape s;
  s.name = c.name;
  const TypeAst* cur = &c.type;
  while (cur->kind == K::Pi) {
    std::vector<Slot> slots;
    flatten(d, inst, cur->binder, *cur->left, equality, slots);
    s.args.push_back(std::move(slots));
    cur = cur->right.get();
  }
  if (cur->kind == K::QRef && !cur->args.empty()) s.target = cur->args[0];
  return s;
}

using Env = std::map<std::string, std::string>;

std::optional<std::uint64_t> evalIndex(const TermAst& t, const Env& env) {
  switch (t.kind) {
    case TermAst::Kind::Num: return t.value;
    case TermAst::Kind::Plus: {
      auto b = evalIndex(t.args[0], env);
      if (!b) return std::nullopt;
      return *b + t.value;
    }
    case TermAst::Kind::Name: {
      auto it = env.find(t.name);
      if (it == env.end()) return std::nullopt;
      return std::stoull(it->second);
    }
    default: return std::nullopt;
  }
}

std::string valueOf(const QitDecl& d, const TermAst& t, const Env& env) {
  if (t.kind == TermAst::Kind::Name) {
    auto it = env.find(t.name);
    if (it != env.end()) return it->second;
    for (const auto& p : d.params)
      if (std::find(p.elements.begin(), p.elements.end(), t.name) != p.elements.end()) return t.name;
  }
  if (auto n = evalIndex(t, env)) return std::to_string(*n);
  unsupported(t.pos, "cannot evaluate parameter " + t.str());
}

template <class F>
void forEachAssignment(const std::vector<const Slot*>& params, F&& f) {
  std::vector<std::size_t> idx(params.size(), 0);
  for (const auto* p : params)
    if (p->domain.empty()) return;
  while (true) {
    Env env;
    std::vector<std::string> vals;
    for (std::size_t k = 0; k < params.size(); ++k) {
      vals.push_back(params[k]->domain[idx[k]]);
      if (!params[k]->binder.empty()) env[params[k]->binder] = vals.back();
    }
    f(env, vals);
    std::size_t k = params.size();
    while (k-- > 0) {
      if (++idx[k] < params[k]->domain.size()) break;
      idx[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) return;
  }
}

struct OutOfPrefix {};

class EndpointTranslator {
 public:
  EndpointTranslator(const QitDecl& d, const std::map<std::string, CtorShape>& shapes, const Signature& sig,
                     const Env& env, const std::map<std::string, Slot>& vars)
      : d_(d), shapes_(shapes), sig_(sig), env_(env), vars_(vars) {}

  Term term(const TermAst& t) const {
    if (t.kind == TermAst::Kind::Name) {
      auto v = vars_.find(t.name);
      if (v != vars_.end() && v->second.kind == Slot::Kind::Child) return Term::var(t.name);
      if (shapes_.count(t.name)) return apply(t.name, {}, t.pos);
      unsupported(t.pos, "unknown endpoint name " + t.name);
    }
    if (t.kind == TermAst::Kind::App) {
      if (shapes_.count(t.name)) return apply(t.name, t.args, t.pos);
      auto v = vars_.find(t.name);
      if (v != vars_.end() && v->second.kind == Slot::Kind::FinChildren && t.args.size() == 1)
        return Term::var(t.name + "_" + valueOf(d_, t.args[0], env_));
    }
    unsupported(t.pos, "cannot encode endpoint " + t.str());
  }

 private:
  Term apply(const std::string& c, const std::vector<TermAst>& args, const SrcPos& pos) const {
    const CtorShape& s = shapes_.at(c);
    if (args.size() != s.args.size()) unsupported(pos, c + " expects " + std::to_string(s.args.size()) + " arguments");
    std::vector<std::string> params;
    std::vector<Term> kids;
    std::optional<ArityMap> natKids;
    for (std::size_t a = 0; a < args.size(); ++a) {
      if (s.args[a].size() != 1) unsupported(args[a].pos, "tuple arguments cannot appear in endpoints");
      const Slot& sl = s.args[a][0];
      const TermAst& arg = args[a];
      switch (sl.kind) {
        case Slot::Kind::Param: params.push_back(valueOf(d_, arg, env_)); break;
        case Slot::Kind::Erased: break;
        case Slot::Kind::Child: kids.push_back(term(arg)); break;
        case Slot::Kind::NatChild: natKids = family(arg); break;
        case Slot::Kind::FinChildren: {
          if (arg.kind != TermAst::Kind::Name) unsupported(arg.pos, "expected a variable family");
          for (const auto& v : sl.domain) kids.push_back(Term::var(arg.name + "_" + v));
          break;
        }
        case Slot::Kind::MapParam: unsupported(arg.pos, "map-valued constructor arguments are not supported");
      }
    }
    std::string inst = opInstanceName(c, params);
    if (!sig_.find(inst)) throw OutOfPrefix{};
    if (natKids) return Term::node(c, params, *natKids);
    return Term::node(c, params, std::move(kids));
  }

  // f ↦ λn. η (f n);  f ∘ b ↦ λn. η (f (b n)).
  ArityMap family(const TermAst& t) const {
    IndexExpr n = IndexExpr::var("n");
    const TermAst* f = &t;
    if (t.kind == TermAst::Kind::Compose) {
      f = &t.args[0];
      const TermAst& b = t.args[1];
      if (b.kind != TermAst::Kind::Name || !env_.count(b.name)) unsupported(b.pos, "expected a map parameter");
      n = IndexExpr::app(env_.at(b.name), {n});
    }
    if (f->kind != TermAst::Kind::Name || !vars_.count(f->name) || vars_.at(f->name).kind != Slot::Kind::NatChild)
      unsupported(t.pos, "expected a countable variable family");
    return ArityMap::comprehension("n", Term::ixVar(f->name, n));
  }

  const QitDecl& d_;
  const std::map<std::string, CtorShape>& shapes_;
  const Signature& sig_;
  const Env& env_;
  const std::map<std::string, Slot>& vars_;
};

}  // namespace

Elaboration elaborate(const QitDecl& d, const Instantiation& inst) {
  DeclCheck check = checkDecl(d);
  if (!check.accepted)
    throw Error(ErrorCode::UnsupportedParameterType, "declaration " + d.name + " is not accepted by the schema");
  Elaboration out;
  std::map<std::string, CtorShape> shapes;
  std::vector<OpDecl> ops;
  std::vector<std::string> sorts;
  if (d.indexed)
    for (std::uint64_t i = 0; i <= inst.natPrefix; ++i) sorts.push_back(std::to_string(i));
  IndexedSignature isig;
  isig.indices = sorts;

  for (const auto& c : d.elementCtors) {
    CtorDecl norm = c;
    norm.type = eraseUnits(c.type);
    CtorShape s = shapeOf(d, inst, norm, false);
    std::vector<const Slot*> params;
    std::vector<const Slot*> children;
    for (const auto& a : s.args)
      for (const auto& sl : a) {
        if (sl.kind == Slot::Kind::Param) params.push_back(&sl);
        if (sl.kind == Slot::Kind::Child || sl.kind == Slot::Kind::NatChild || sl.kind == Slot::Kind::FinChildren)
          children.push_back(&sl);
      }
    bool nat = std::any_of(children.begin(), children.end(), [](const Slot* s) { return s->kind == Slot::Kind::NatChild; });
    if (nat && children.size() != 1) unsupported(c.pos, c.name + " mixes a countable argument with other arguments");
    std::size_t dropped = 0;
    forEachAssignment(params, [&](const Env& env, const std::vector<std::string>& vals) {
      OpDecl op;
      op.family = c.name;
      op.params = vals;
      std::size_t n = 0;
      IndexedSignature::Op iop{c.name, vals, "", {}};
      bool inRange = true;
      auto sortOf = [&](const TermAst& ix) -> std::string {
        if (!d.indexed) return "";
        auto v = evalIndex(ix, env);
        if (!v) unsupported(c.pos, "index " + ix.str() + " does not evaluate");
        if (*v > inst.natPrefix) inRange = false;
        return std::to_string(*v);
      };
      if (d.indexed) op.target = sortOf(s.target);
      iop.target = op.target;
      for (const Slot* ch : children) {
        std::string so = sortOf(ch->index);
        std::size_t k = ch->kind == Slot::Kind::FinChildren ? ch->domain.size() : 1;
        n += k;
        if (d.indexed)
          for (std::size_t r = 0; r < k; ++r) op.childSorts.push_back(so);
        if (d.indexed) {
          auto& slot = iop.aritiesPerIndex[so];
          slot = ch->kind == Slot::Kind::NatChild ? Arity::nat() : Arity::fin(slot.n + k);
        }
      }
      op.arity = nat ? Arity::nat() : Arity::fin(n);
      if (!inRange) {
        ++dropped;
        return;
      }
      ops.push_back(op);
      isig.ops.push_back(iop);
    });
    if (dropped)
      out.notes.push_back(std::to_string(dropped) + " instance(s) of " + c.name + " fall outside the index prefix 0.." +
                          std::to_string(inst.natPrefix));
    shapes.emplace(c.name, std::move(s));
  }
  out.sig = Signature(std::move(ops), sorts);
  if (d.indexed) out.indexed = isig;
  out.sys.index = inst.maps;

  for (const auto& c : d.equalityCtors) {
    CtorDecl norm = c;
    norm.type = eraseUnits(c.type);
    CtorShape s = shapeOf(d, inst, norm, true);
    std::vector<const Slot*> params;
    std::map<std::string, Slot> vars;
    std::vector<std::string> varOrder;
    for (const auto& a : s.args)
      for (const auto& sl : a) {
        if (sl.kind == Slot::Kind::Param || sl.kind == Slot::Kind::MapParam) params.push_back(&sl);
        if (sl.kind == Slot::Kind::Child || sl.kind == Slot::Kind::NatChild || sl.kind == Slot::Kind::FinChildren) {
          vars.emplace(sl.binder, sl);
          varOrder.push_back(sl.binder);
        }
      }
    bool countable = std::any_of(varOrder.begin(), varOrder.end(),
                                 [&](const std::string& v) { return vars.at(v).kind == Slot::Kind::NatChild; });
    if (countable && varOrder.size() != 1)
      unsupported(c.pos, c.name + " mixes a countable variable family with other variables");
    const TypeAst& eq = codomain(norm.type);
    std::size_t dropped = 0;
    forEachAssignment(params, [&](const Env& env, const std::vector<std::string>& vals) {
      Equation e;
      e.name = opInstanceName(c.name, vals);
      auto sortOf = [&](const TermAst& ix) -> std::string {
        if (!d.indexed) return "";
        auto v = evalIndex(ix, env);
        if (!v) unsupported(c.pos, "index " + ix.str() + " does not evaluate");
        if (*v > inst.natPrefix) throw OutOfPrefix{};
        return std::to_string(*v);
      };
      try {
        if (countable) {
          const Slot& f = vars.at(varOrder[0]);
          e.vars = VarFamily::nat(f.binder, sortOf(f.index));
        } else {
          std::vector<std::string> names, vsorts;
          for (const auto& v : varOrder) {
            const Slot& sl = vars.at(v);
            std::string so = sortOf(sl.index);
            if (sl.kind == Slot::Kind::FinChildren) {
              for (const auto& x : sl.domain) {
                names.push_back(v + "_" + x);
                vsorts.push_back(so);
              }
            } else {
              names.push_back(v);
              vsorts.push_back(so);
            }
          }
          e.vars = VarFamily::named(names, d.indexed ? vsorts : std::vector<std::string>{});
        }
        EndpointTranslator tr(d, shapes, out.sig, env, vars);
        e.lhs = tr.term(eq.lhs);
        e.rhs = tr.term(eq.rhs);
      } catch (const OutOfPrefix&) {
        ++dropped;
        return;
      }
      if (d.indexed) e.sort = qwi::sortOf(out.sig, e.lhs, &e.vars);
      out.sys.equations.push_back(std::move(e));
    });
    if (dropped)
      out.notes.push_back(std::to_string(dropped) + " instance(s) of " + c.name + " fall outside the index prefix 0.." +
                          std::to_string(inst.natPrefix));
  }
  checkSystem(out.sig, out.sys);
  return out;
}

}  // namespace qwi
