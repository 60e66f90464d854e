#include "csc/capcalc.hpp"

#include <algorithm>

namespace csc {

CaptureSet cv(const Term& t) {
  return std::visit(
      overloaded{
          [](const term::Var& v) { return CaptureSet::of_names({v.name}); },
          [](const term::Lam& l) { return cv(l.body).without(l.param); },
          [](const term::TLam& l) { return cv(l.body); },
          [](const term::BoxVal&) { return CaptureSet{}; },
          [](const term::ReaderVal& r) { return CaptureSet::of_names({r.var}); },
          [](const term::App& a) { return CaptureSet::of_names({a.fn, a.arg}); },
          [](const term::TApp& a) { return CaptureSet::of_names({a.fn}); },
          [](const term::Let& l) {
            CaptureSet body = cv(l.body);
            // A value whose binder is unused contributes nothing.
            if (l.bound.is_value() && !body.contains_var(l.name)) return body;
            return cv(l.bound).united(body).without(l.name);
          },
          [](const term::Unbox& u) { return u.captures.united(CaptureSet::of_names({u.var})); },
          [](const term::DVar& d) { return CaptureSet::of_names({d.init}).united(cv(d.body).without(d.name)); },
          [](const term::Read& r) { return CaptureSet::of_names({r.var}); },
          [](const term::Write& w) { return CaptureSet::of_names({w.target, w.value}); },
          [](const term::NatLit&) { return CaptureSet{}; },
          [](const term::Add& a) { return CaptureSet::of_names({a.lhs, a.rhs}); },
      },
      t.node().v);
}

ShapeType promote(const TypingContext& ctx, const ShapeType& s) {
  ShapeType cur = s;
  for (std::size_t guard = 0; guard <= ctx.size(); ++guard) {
    const auto* tv = cur.as<shape::TVar>();
    if (!tv) return cur;
    const TypeBinding* b = ctx.find_type(tv->name);
    if (!b) return cur;
    cur = b->bound;
  }
  throw InvariantViolation("cyclic type-variable bounds");
}

bool is_reader_shape(const TypingContext& ctx, const ShapeType& s) {
  const ShapeType* cur = &s;
  for (std::size_t guard = 0; guard <= ctx.size(); ++guard) {
    if (cur->as<shape::Rdr>()) return true;
    const auto* tv = cur->as<shape::TVar>();
    if (!tv) return false;
    const TypeBinding* b = ctx.find_type(tv->name);
    if (!b) return false;
    cur = &b->bound;
  }
  throw InvariantViolation("cyclic type-variable bounds");
}

bool is_reader(const TypingContext& ctx, const Name& x) {
  const TermBinding* b = ctx.find_term(x);
  if (!b) throw UnboundAtom(x);
  return is_reader_shape(ctx, b->type.shape);
}

namespace {

bool atom_sub(const TypingContext& ctx, const CaptureAtom& a, const CaptureSet& upper, std::size_t depth);

bool set_sub(const TypingContext& ctx, const CaptureSet& lower, const CaptureSet& upper, std::size_t depth) {
  for (const auto& a : lower) {
    if (!atom_sub(ctx, a, upper, depth)) return false;
  }
  return true;
}

bool atom_sub(const TypingContext& ctx, const CaptureAtom& a, const CaptureSet& upper, std::size_t depth) {
  if (a.is_root()) return upper.contains(a) || (a.is_rdr() && upper.contains(CaptureAtom::cap()));
  const TermBinding* b = ctx.find_term(a.name());
  if (!b) throw UnboundAtom(a.name());
  if (upper.contains(a)) return true;
  // A well-formed context cannot make the chain longer than its size.
  if (depth > ctx.size()) throw InvariantViolation("subcapture recursion exceeded context depth");
  if (set_sub(ctx, b->type.captures, upper, depth + 1)) return true;
  return is_reader_shape(ctx, b->type.shape) && atom_sub(ctx, CaptureAtom::rdr(), upper, depth + 1);
}

void check_bound(const TypingContext& ctx, const CaptureSet& c) {
  for (const auto& a : c) {
    if (!a.is_root() && !ctx.find_term(a.name())) throw UnboundAtom(a.name());
  }
}

}  // namespace

bool subcapture(const TypingContext& ctx, const CaptureSet& lower, const CaptureSet& upper) {
  check_bound(ctx, upper);
  return set_sub(ctx, lower, upper, 0);
}

bool subcapture_atom(const TypingContext& ctx, const CaptureAtom& a, const CaptureSet& upper) {
  check_bound(ctx, upper);
  return atom_sub(ctx, a, upper, 0);
}

bool below_rdr(const TypingContext& ctx, const CaptureAtom& a) {
  if (a.is_root()) return a.is_rdr();
  const TermBinding* b = ctx.find_term(a.name());
  if (!b) throw UnboundAtom(a.name());
  if (is_reader_shape(ctx, b->type.shape)) return true;
  // Captures of a binding name strictly earlier bindings, so this ends.
  return std::all_of(b->type.captures.begin(), b->type.captures.end(),
                     [&](const CaptureAtom& c) { return below_rdr(ctx, c); });
}

}  // namespace csc
