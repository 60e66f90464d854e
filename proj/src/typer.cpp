#include "csc/typer.hpp"

#include "csc/capcalc.hpp"
#include "csc/print.hpp"
#include "csc/subst.hpp"

namespace csc {

const char* to_string(TypeErrorCode code) {
  switch (code) {
    case TypeErrorCode::NotSeparated: return "NotSeparated";
    case TypeErrorCode::NotSubtype: return "NotSubtype";
    case TypeErrorCode::NotSubcapture: return "NotSubcapture";
    case TypeErrorCode::EscapingBinder: return "EscapingBinder";
    case TypeErrorCode::ExpectedFun: return "ExpectedFun";
    case TypeErrorCode::ExpectedTFun: return "ExpectedTFun";
    case TypeErrorCode::ExpectedBox: return "ExpectedBox";
    case TypeErrorCode::ExpectedRef: return "ExpectedRef";
    case TypeErrorCode::ExpectedRdr: return "ExpectedRdr";
    case TypeErrorCode::UnboundName: return "UnboundName";
    case TypeErrorCode::IllFormed: return "IllFormed";
  }
  return "?";
}

TypeError::TypeError(TypeErrorCode code, std::string message, Span span, TypingContext ctx)
    : std::runtime_error(std::move(message)), code_(code), span_(span), ctx_(std::move(ctx)) {}

TypeError& TypeError::with_offending(CaptureSet left, CaptureSet right) {
  offending_.emplace(std::move(left), std::move(right));
  return *this;
}

// ---------------------------------------------------------------- subtyping

namespace {

Name fresh_for(const TypingContext& ctx, const Name& base, const std::set<Name>& avoid) {
  if (!ctx.binds(base) && !avoid.count(base)) return base;
  for (unsigned i = 1;; ++i) {
    Name n = base_name(base) + "%s" + std::to_string(i);
    if (!ctx.binds(n) && !avoid.count(n)) return n;
  }
}

}  // namespace

bool subtype(const TypingContext& ctx, const Type& t1, const Type& t2) {
  return subcapture(ctx, t1.captures, t2.captures) && subshape(ctx, t1.shape, t2.shape);
}

bool subshape(const TypingContext& ctx, const ShapeType& s1, const ShapeType& s2) {
  if (s2.as<shape::Top>()) return true;
  if (const auto* v = s1.as<shape::TVar>()) {
    if (const auto* w = s2.as<shape::TVar>(); w && w->name == v->name) return true;
    const TypeBinding* b = ctx.find_type(v->name);
    return b && subshape(ctx, b->bound, s2);
  }
  return std::visit(
      overloaded{
          [&](const shape::Nat&) { return s2.as<shape::Nat>() != nullptr; },
          [&](const shape::Fun& f1) {
            const auto* f2 = s2.as<shape::Fun>();
            if (!f2 || !(f1.degree == f2->degree)) return false;
            if (!subtype(ctx, f2->param_type, f1.param_type)) return false;
            std::set<Name> avoid = free_names(f1.result).terms;
            for (const auto& n : free_names(f2->result).terms) avoid.insert(n);
            avoid.erase(f1.param);
            avoid.erase(f2->param);
            Name z = fresh_for(ctx, f2->param, avoid);
            TypingContext inner = ctx.extend_term(z, f2->degree, f2->param_type);
            return subtype(inner, rename_free(f1.result, f1.param, z), rename_free(f2->result, f2->param, z));
          },
          [&](const shape::TFun& f1) {
            const auto* f2 = s2.as<shape::TFun>();
            if (!f2 || !subshape(ctx, f2->bound, f1.bound)) return false;
            std::set<Name> avoid = free_names(f1.body).types;
            for (const auto& n : free_names(f2->body).types) avoid.insert(n);
            avoid.erase(f1.tparam);
            avoid.erase(f2->tparam);
            Name z = fresh_for(ctx, f2->tparam, avoid);
            TypingContext inner = ctx.extend_type(z, f2->bound);
            return subtype(inner, subst_tvar(f1.body, f1.tparam, ShapeType::tvar(z)),
                           subst_tvar(f2->body, f2->tparam, ShapeType::tvar(z)));
          },
          [&](const shape::Box& b1) {
            const auto* b2 = s2.as<shape::Box>();
            return b2 && subtype(ctx, b1.inner, b2->inner);
          },
          [&](const shape::Ref& r1) {
            const auto* r2 = s2.as<shape::Ref>();
            return r2 && subshape(ctx, r1.inner, r2->inner) && subshape(ctx, r2->inner, r1.inner);
          },
          [&](const shape::Rdr& r1) {
            const auto* r2 = s2.as<shape::Rdr>();
            return r2 && subshape(ctx, r1.inner, r2->inner) && subshape(ctx, r2->inner, r1.inner);
          },
          [](const auto&) { return false; },
      },
      s1.node().v);
}

// --------------------------------------------------------------- separation

namespace {

bool sep_atoms(const TypingContext& ctx, const CaptureAtom& a, const CaptureAtom& b, std::size_t depth);

bool sep_sets(const TypingContext& ctx, const CaptureSet& c1, const CaptureSet& c2, std::size_t depth) {
  for (const auto& a : c1) {
    for (const auto& b : c2) {
      if (!sep_atoms(ctx, a, b, depth)) return false;
    }
  }
  return true;
}

const TermBinding& term_binding(const TypingContext& ctx, const Name& x) {
  const TermBinding* tb = ctx.find_term(x);
  if (!tb) throw UnboundAtom(x);
  return *tb;
}

bool sep_atoms(const TypingContext& ctx, const CaptureAtom& a, const CaptureAtom& b, std::size_t depth) {
  // Each unfolding moves to a strictly earlier binding on one side.
  if (depth > 2 * ctx.size() + 2) throw InvariantViolation("separation recursion exceeded context depth");
  if (below_rdr(ctx, a) && below_rdr(ctx, b)) return true;
  if (a.is_var()) {
    const TermBinding& x = term_binding(ctx, a.name());
    if (b.is_var() && x.degree.contains(b.name())) return true;
    bool all = true;
    for (const auto& c : x.type.captures) {
      if (!(all = sep_atoms(ctx, c, b, depth + 1))) break;
    }
    if (all) return true;
  }
  if (b.is_var()) {
    const TermBinding& y = term_binding(ctx, b.name());
    if (a.is_var() && y.degree.contains(a.name())) return true;
    bool all = true;
    for (const auto& c : y.type.captures) {
      if (!(all = sep_atoms(ctx, a, c, depth + 1))) break;
    }
    if (all) return true;
  }
  return false;
}

CaptureSet restrict_to(const CaptureSet& c, const TypingContext& ctx) {
  std::vector<CaptureAtom> atoms;
  for (const auto& a : c) {
    if (a.is_var() && ctx.find_term(a.name())) atoms.push_back(a);
  }
  return CaptureSet(std::move(atoms));
}

}  // namespace

bool separated_atoms(const TypingContext& ctx, const CaptureAtom& a, const CaptureAtom& b) {
  return sep_atoms(ctx, a, b, 0);
}

bool separated_sets(const TypingContext& ctx, const CaptureSet& c1, const CaptureSet& c2) {
  return sep_sets(ctx, c1, c2, 0);
}

bool separated_terms(const TypingContext& ctx, const Term& s, const Term& t) {
  return separated_sets(ctx, restrict_to(cv(s), ctx), restrict_to(cv(t), ctx));
}

// ---------------------------------------------------------------- avoidance

namespace {

struct Avoider {
  const Name& x;
  const CaptureSet& replacement;
  bool ok = true;

  bool mentions(const Type& t) const { return mentions_term_name(t, x); }
  bool mentions(const ShapeType& s) const { return free_names(s).terms.count(x) != 0; }

  Type type(const Type& t) {
    return Type(shape(t.shape), t.captures.replaced(x, replacement));
  }

  ShapeType shape(const ShapeType& s) {
    if (!mentions(s)) return s;
    return std::visit(overloaded{
                          [&](const shape::Fun& f) {
                            if (f.degree.contains(x) || mentions(f.param_type)) ok = false;
                            return ShapeType::fun(f.param, f.degree, f.param_type, type(f.result));
                          },
                          [&](const shape::TFun& f) {
                            if (mentions(f.bound)) ok = false;
                            return ShapeType::tfun(f.tparam, f.bound, type(f.body));
                          },
                          [&](const shape::Box& b) { return ShapeType::box(type(b.inner)); },
                          [&](const auto&) {
                            // Ref / Rdr contents are invariant.
                            ok = false;
                            return s;
                          },
                      },
                      s.node().v);
  }
};

}  // namespace

std::optional<Type> avoid(const Name& x, const CaptureSet& replacement, const Type& u) {
  Avoider a{x, replacement};
  Type out = a.type(u);
  if (!a.ok || mentions_term_name(out, x)) return std::nullopt;
  return out;
}

// ------------------------------------------------------------------- typing

namespace {

class Checker {
 public:
  Type synth(const TypingContext& ctx, const Term& t, Span outer) {
    Span sp = t.span().known() ? t.span() : outer;
    try {
      return synth_node(ctx, t, sp);
    } catch (const UnboundAtom& e) {
      throw TypeError(TypeErrorCode::UnboundName, "unbound name '" + e.name() + "'", sp, ctx);
    } catch (const WfError& e) {
      auto code = e.kind() == WfError::Kind::RootInDegree ? TypeErrorCode::IllFormed : TypeErrorCode::UnboundName;
      throw TypeError(code, e.what(), sp, ctx);
    } catch (const ContextError& e) {
      throw TypeError(TypeErrorCode::IllFormed, e.what(), sp, ctx);
    }
  }

 private:
  [[noreturn]] static void fail(TypeErrorCode code, const std::string& msg, Span sp, const TypingContext& ctx) {
    throw TypeError(code, msg, sp, ctx);
  }

  static const TermBinding& var(const TypingContext& ctx, const Name& x, Span sp) {
    const TermBinding* b = ctx.find_term(x);
    if (!b) fail(TypeErrorCode::UnboundName, "unbound name '" + x + "'", sp, ctx);
    return *b;
  }

  // Type of a variable occurrence: S^{x}.
  static Type occurrence(const TypingContext& ctx, const Name& x, Span sp) {
    return Type(var(ctx, x, sp).type.shape, CaptureSet::of_names({x}));
  }

  static ShapeType exposed(const TypingContext& ctx, const Name& x, Span sp) {
    return promote(ctx, var(ctx, x, sp).type.shape);
  }

  static void require_pure(const TypingContext& ctx, const Name& x, Span sp, const char* what) {
    if (!subcapture(ctx, CaptureSet::of_names({x}), {})) {
      fail(TypeErrorCode::NotSubcapture,
           std::string(what) + " '" + x + "' captures " + var(ctx, x, sp).type.captures.to_string() +
               ", which is not a subcapture of {}",
           sp, ctx);
    }
  }

  static void require_in_domain(const TypingContext& ctx, const CaptureSet& c, Span sp) {
    for (const auto& a : c) {
      if (a.is_root() || !ctx.find_term(a.name())) {
        fail(TypeErrorCode::IllFormed, "capture set " + c.to_string() + " is not contained in the context domain",
             sp, ctx);
      }
    }
  }

  Type finish_binder(const TypingContext& ctx, const Name& x, const CaptureSet& widen, const Type& u, Span sp) {
    if (!mentions_term_name(u, x)) return u;
    auto widened = avoid(x, widen, u);
    if (!widened) {
      fail(TypeErrorCode::EscapingBinder,
           "type " + print_type(u) + " mentions local binder '" + x +
               "' in a position that cannot be widened; hint: bind the result with a wider annotated type",
           sp, ctx);
    }
    return *widened;
  }

  Type synth_node(const TypingContext& ctx, const Term& t, Span sp) {
    return std::visit(
        overloaded{
            [&](const term::Var& v) { return occurrence(ctx, v.name, sp); },
            [&](const term::NatLit&) { return Type(ShapeType::nat()); },
            [&](const term::Lam& l) {
              wf_degree(ctx, l.degree);
              wf_type(ctx, l.param_type);
              TypingContext inner = ctx.extend_term(l.param, l.degree, l.param_type);
              Type body = synth(inner, l.body, sp);
              return Type(ShapeType::fun(l.param, l.degree, l.param_type, body), cv(l.body).without(l.param));
            },
            [&](const term::TLam& l) {
              wf_shape(ctx, l.bound);
              TypingContext inner = ctx.extend_type(l.tparam, l.bound);
              Type body = synth(inner, l.body, sp);
              return Type(ShapeType::tfun(l.tparam, l.bound, body), cv(l.body));
            },
            [&](const term::App& a) {
              ShapeType fs = exposed(ctx, a.fn, sp);
              const auto* f = fs.as<shape::Fun>();
              if (!f) {
                fail(TypeErrorCode::ExpectedFun, "'" + a.fn + "' has type " + print_shape(fs) + ", not a function",
                     sp, ctx);
              }
              Type arg = occurrence(ctx, a.arg, sp);
              if (!subtype(ctx, arg, f->param_type)) {
                fail(TypeErrorCode::NotSubtype,
                     "argument '" + a.arg + "' of type " + print_type(arg) + " is not a subtype of " +
                         print_type(f->param_type),
                     sp, ctx);
              }
              CaptureSet y = CaptureSet::of_names({a.arg});
              if (!separated_sets(ctx, y, f->degree.set())) {
                throw TypeError(TypeErrorCode::NotSeparated,
                                "argument " + y.to_string() + " for parameter '" + f->param + "' is not separated from " +
                                    f->degree.to_string(),
                                sp, ctx)
                    .with_offending(y, f->degree.set());
              }
              return rename_free(f->result, f->param, a.arg);
            },
            [&](const term::TApp& a) {
              wf_shape(ctx, a.arg);
              ShapeType fs = exposed(ctx, a.fn, sp);
              const auto* f = fs.as<shape::TFun>();
              if (!f) {
                fail(TypeErrorCode::ExpectedTFun,
                     "'" + a.fn + "' has type " + print_shape(fs) + ", not a type function", sp, ctx);
              }
              if (!subshape(ctx, a.arg, f->bound)) {
                fail(TypeErrorCode::NotSubtype,
                     "type argument " + print_shape(a.arg) + " is not a subtype of bound " + print_shape(f->bound),
                     sp, ctx);
              }
              return subst_tvar(f->body, f->tparam, a.arg);
            },
            [&](const term::BoxVal& b) {
              Type inner = occurrence(ctx, b.var, sp);
              return Type(ShapeType::box(inner));
            },
            [&](const term::Unbox& u) {
              require_in_domain(ctx, u.captures, sp);
              ShapeType bs = exposed(ctx, u.var, sp);
              const auto* b = bs.as<shape::Box>();
              if (!b) fail(TypeErrorCode::ExpectedBox, "'" + u.var + "' has type " + print_shape(bs) + ", not a box", sp, ctx);
              require_pure(ctx, u.var, sp, "boxed value");
              if (!subcapture(ctx, b->inner.captures, u.captures)) {
                fail(TypeErrorCode::NotSubcapture,
                     "boxed captures " + b->inner.captures.to_string() + " are not a subcapture of " +
                         u.captures.to_string(),
                     sp, ctx);
              }
              return Type(b->inner.shape, u.captures);
            },
            [&](const term::Let& l) {
              Type bound = synth(ctx, l.bound, sp);
              TypingContext inner = ctx.extend_term(l.name, {}, bound);
              Type body = synth(inner, l.body, sp);
              if (l.mode == LetMode::Par && !separated_terms(ctx, l.bound, l.body)) {
                CaptureSet left = restrict_to(cv(l.bound), ctx);
                CaptureSet right = restrict_to(cv(l.body), ctx);
                throw TypeError(TypeErrorCode::NotSeparated,
                                "parallel binding " + left.to_string() + " and body " + right.to_string() +
                                    " are not separated",
                                sp, ctx)
                    .with_offending(left, right);
              }
              return finish_binder(inner, l.name, bound.captures, body, sp);
            },
            [&](const term::DVar& d) {
              wf_degree(ctx, d.degree);
              const TermBinding& y = var(ctx, d.init, sp);
              require_pure(ctx, d.init, sp, "initializer");
              Type ref(ShapeType::ref(y.type.shape), CaptureSet::universal());
              TypingContext inner = ctx.extend_term(d.name, d.degree, ref);
              Type body = synth(inner, d.body, sp);
              return finish_binder(inner, d.name, CaptureSet::universal(), body, sp);
            },
            [&](const term::ReaderVal& r) {
              ShapeType s = exposed(ctx, r.var, sp);
              const auto* ref = s.as<shape::Ref>();
              if (!ref) fail(TypeErrorCode::ExpectedRef, "'" + r.var + "' has type " + print_shape(s) + ", not a Ref", sp, ctx);
              return Type(ShapeType::rdr(ref->inner), CaptureSet::of_names({r.var}));
            },
            [&](const term::Read& r) {
              ShapeType s = exposed(ctx, r.var, sp);
              const auto* rdr = s.as<shape::Rdr>();
              if (!rdr) {
                fail(TypeErrorCode::ExpectedRdr, "'" + r.var + "' has type " + print_shape(s) + ", not a reader", sp,
                     ctx);
              }
              return Type(rdr->inner);
            },
            [&](const term::Write& w) {
              ShapeType s = exposed(ctx, w.target, sp);
              const auto* ref = s.as<shape::Ref>();
              if (!ref) {
                fail(TypeErrorCode::ExpectedRef, "'" + w.target + "' has type " + print_shape(s) + ", not a Ref", sp,
                     ctx);
              }
              Type payload = occurrence(ctx, w.value, sp);
              if (!subtype(ctx, payload, Type(ref->inner))) {
                fail(TypeErrorCode::NotSubtype,
                     "written value '" + w.value + "' of type " + print_type(payload) + " is not a subtype of " +
                         print_shape(ref->inner),
                     sp, ctx);
              }
              return Type(ref->inner);
            },
            [&](const term::Add& a) {
              for (const Name* x : {&a.lhs, &a.rhs}) {
                ShapeType s = exposed(ctx, *x, sp);
                if (!s.as<shape::Nat>()) {
                  fail(TypeErrorCode::NotSubtype, "operand '" + *x + "' of type " + print_shape(s) + " is not Nat",
                       sp, ctx);
                }
              }
              return Type(ShapeType::nat());
            },
        },
        t.node().v);
  }
};

}  // namespace

Type typecheck(const TypingContext& ctx, const Term& t) { return Checker().synth(ctx, t, t.span()); }

Type check_against(const TypingContext& ctx, const Term& t, const Type& expected) {
  Type got = typecheck(ctx, t);
  if (!subtype(ctx, got, expected)) {
    throw TypeError(TypeErrorCode::NotSubtype,
                    "type " + print_type(got) + " is not a subtype of " + print_type(expected), t.span(), ctx);
  }
  return got;
}

}  // namespace csc
