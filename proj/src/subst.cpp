#include "csc/subst.hpp"

namespace csc {

namespace {

class FreeCollector {
 public:
  FreeNames out;

  void term(const Term& t) {
    std::visit(overloaded{
                   [&](const term::Var& v) { use(v.name); },
                   [&](const term::Lam& l) {
                     degree(l.degree);
                     type(l.param_type);
                     scoped_term(l.param, [&] { term(l.body); });
                   },
                   [&](const term::TLam& l) {
                     shape(l.bound);
                     scoped_type(l.tparam, [&] { term(l.body); });
                   },
                   [&](const term::BoxVal& b) { use(b.var); },
                   [&](const term::ReaderVal& r) { use(r.var); },
                   [&](const term::App& a) {
                     use(a.fn);
                     use(a.arg);
                   },
                   [&](const term::TApp& a) {
                     use(a.fn);
                     shape(a.arg);
                   },
                   [&](const term::Let& l) {
                     term(l.bound);
                     scoped_term(l.name, [&] { term(l.body); });
                   },
                   [&](const term::Unbox& u) {
                     captures(u.captures);
                     use(u.var);
                   },
                   [&](const term::DVar& d) {
                     degree(d.degree);
                     use(d.init);
                     scoped_term(d.name, [&] { term(d.body); });
                   },
                   [&](const term::Read& r) { use(r.var); },
                   [&](const term::Write& w) {
                     use(w.target);
                     use(w.value);
                   },
                   [&](const term::NatLit&) {},
                   [&](const term::Add& a) {
                     use(a.lhs);
                     use(a.rhs);
                   },
               },
               t.node().v);
  }

  void type(const Type& t) {
    captures(t.captures);
    shape(t.shape);
  }

  void shape(const ShapeType& s) {
    std::visit(overloaded{
                   [&](const shape::TVar& v) {
                     if (!bound_types_.count(v.name)) out.types.insert(v.name);
                   },
                   [&](const shape::Top&) {},
                   [&](const shape::Nat&) {},
                   [&](const shape::Fun& f) {
                     degree(f.degree);
                     type(f.param_type);
                     scoped_term(f.param, [&] { type(f.result); });
                   },
                   [&](const shape::TFun& f) {
                     shape(f.bound);
                     scoped_type(f.tparam, [&] { type(f.body); });
                   },
                   [&](const shape::Box& b) { type(b.inner); },
                   [&](const shape::Ref& r) { shape(r.inner); },
                   [&](const shape::Rdr& r) { shape(r.inner); },
               },
               s.node().v);
  }

  void captures(const CaptureSet& c) {
    for (const auto& a : c) {
      if (a.is_var()) use(a.name());
    }
  }

  void degree(const SeparationDegree& d) { captures(d.set()); }

 private:
  void use(const Name& n) {
    if (!bound_terms_.count(n)) out.terms.insert(n);
  }

  template <class F>
  void scoped_term(const Name& n, F&& f) {
    bool fresh = bound_terms_.insert(n).second;
    f();
    if (fresh) bound_terms_.erase(n);
  }

  template <class F>
  void scoped_type(const Name& n, F&& f) {
    bool fresh = bound_types_.insert(n).second;
    f();
    if (fresh) bound_types_.erase(n);
  }

  std::set<Name> bound_terms_;
  std::set<Name> bound_types_;
};

}  // namespace

FreeNames free_names(const Term& t) {
  FreeCollector c;
  c.term(t);
  return std::move(c.out);
}

FreeNames free_names(const Type& t) {
  FreeCollector c;
  c.type(t);
  return std::move(c.out);
}

FreeNames free_names(const ShapeType& s) {
  FreeCollector c;
  c.shape(s);
  return std::move(c.out);
}

CaptureSet free_term_names(const Term& t) {
  std::vector<CaptureAtom> atoms;
  for (const auto& n : free_names(t).terms) atoms.push_back(CaptureAtom::var(n));
  return CaptureSet(std::move(atoms));
}

bool mentions_term_name(const Type& t, const Name& x) { return free_names(t).terms.count(x) != 0; }

Renamer& Renamer::rename(Name from, Name to) {
  terms_[std::move(from)] = std::move(to);
  return *this;
}

Renamer& Renamer::substitute(Name tvar, ShapeType with) {
  tvars_.insert_or_assign(std::move(tvar), std::move(with));
  return *this;
}

Renamer& Renamer::on_binder(BinderHook hook) {
  hook_ = std::move(hook);
  return *this;
}

Name Renamer::name(const Name& n) const {
  auto it = terms_.find(n);
  return it == terms_.end() ? n : it->second;
}

Renamer Renamer::enter(const Name& binder, BinderKind kind, Name* renamed) const {
  Renamer inner = *this;
  *renamed = hook_ ? hook_(binder, kind) : binder;
  if (kind == BinderKind::Term) {
    if (*renamed == binder) {
      inner.terms_.erase(binder);
    } else {
      inner.terms_[binder] = *renamed;
    }
  } else {
    if (*renamed == binder) {
      inner.tvars_.erase(binder);
    } else {
      inner.tvars_.insert_or_assign(binder, ShapeType::tvar(*renamed));
    }
  }
  return inner;
}

CaptureSet Renamer::captures(const CaptureSet& c) const {
  if (terms_.empty()) return c;
  std::vector<CaptureAtom> atoms;
  atoms.reserve(c.size());
  for (const auto& a : c) atoms.push_back(a.is_var() ? CaptureAtom::var(name(a.name())) : a);
  return CaptureSet(std::move(atoms));
}

SeparationDegree Renamer::degree(const SeparationDegree& d) const { return SeparationDegree(captures(d.set())); }

Type Renamer::type(const Type& t) const { return Type(shape(t.shape), captures(t.captures)); }

ShapeType Renamer::shape(const ShapeType& s) const {
  if (terms_.empty() && tvars_.empty() && !hook_) return s;
  return std::visit(overloaded{
                        [&](const shape::TVar& v) -> ShapeType {
                          auto it = tvars_.find(v.name);
                          return it == tvars_.end() ? s : it->second;
                        },
                        [&](const shape::Top&) { return s; },
                        [&](const shape::Nat&) { return s; },
                        [&](const shape::Fun& f) {
                          Name param;
                          Renamer inner = enter(f.param, BinderKind::Term, &param);
                          return ShapeType::fun(param, degree(f.degree), type(f.param_type), inner.type(f.result));
                        },
                        [&](const shape::TFun& f) {
                          Name tparam;
                          Renamer inner = enter(f.tparam, BinderKind::Type, &tparam);
                          return ShapeType::tfun(tparam, shape(f.bound), inner.type(f.body));
                        },
                        [&](const shape::Box& b) { return ShapeType::box(type(b.inner)); },
                        [&](const shape::Ref& r) { return ShapeType::ref(shape(r.inner)); },
                        [&](const shape::Rdr& r) { return ShapeType::rdr(shape(r.inner)); },
                    },
                    s.node().v);
}

Term Renamer::term(const Term& t) const {
  Term out = std::visit(
      overloaded{
          [&](const term::Var& v) { return Term::var(name(v.name)); },
          [&](const term::Lam& l) {
            Name param;
            Renamer inner = enter(l.param, BinderKind::Term, &param);
            return Term::lam(param, degree(l.degree), type(l.param_type), inner.term(l.body));
          },
          [&](const term::TLam& l) {
            Name tparam;
            Renamer inner = enter(l.tparam, BinderKind::Type, &tparam);
            return Term::tlam(tparam, shape(l.bound), inner.term(l.body));
          },
          [&](const term::BoxVal& b) { return Term::box(name(b.var)); },
          [&](const term::ReaderVal& r) { return Term::reader(name(r.var)); },
          [&](const term::App& a) { return Term::app(name(a.fn), name(a.arg)); },
          [&](const term::TApp& a) { return Term::tapp(name(a.fn), shape(a.arg)); },
          [&](const term::Let& l) {
            Term bound = term(l.bound);
            Name x;
            Renamer inner = enter(l.name, BinderKind::Term, &x);
            return Term::let(l.mode, x, bound, inner.term(l.body));
          },
          [&](const term::Unbox& u) { return Term::unbox(captures(u.captures), name(u.var)); },
          [&](const term::DVar& d) {
            SeparationDegree deg = degree(d.degree);
            Name init = name(d.init);
            Name x;
            Renamer inner = enter(d.name, BinderKind::Term, &x);
            return Term::dvar(x, deg, init, inner.term(d.body));
          },
          [&](const term::Read& r) { return Term::read(name(r.var)); },
          [&](const term::Write& w) { return Term::write(name(w.target), name(w.value)); },
          [&](const term::NatLit&) { return t; },
          [&](const term::Add& a) { return Term::add(name(a.lhs), name(a.rhs)); },
      },
      t.node().v);
  return t.span().known() ? out.with_span(t.span()) : out;
}

Term rename_free(const Term& t, const Name& from, const Name& to) { return Renamer().rename(from, to).term(t); }
Type rename_free(const Type& t, const Name& from, const Name& to) { return Renamer().rename(from, to).type(t); }
Term subst_tvar(const Term& t, const Name& tvar, const ShapeType& with) {
  return Renamer().substitute(tvar, with).term(t);
}
Type subst_tvar(const Type& t, const Name& tvar, const ShapeType& with) {
  return Renamer().substitute(tvar, with).type(t);
}

Name base_name(const Name& n) { return n.substr(0, n.find('%')); }

Term alpha_normalize(const Term& t) {
  FreeNames free = free_names(t);
  auto used = std::make_shared<std::set<Name>>(free.terms);
  used->insert(free.types.begin(), free.types.end());
  Renamer r;
  r.on_binder([used](const Name& b, BinderKind) {
    if (used->insert(b).second) return b;
    Name base = base_name(b);
    for (unsigned i = 1;; ++i) {
      Name candidate = base + "%" + std::to_string(i);
      if (used->insert(candidate).second) return candidate;
    }
  });
  return r.term(t);
}

namespace {
void collect_binders(const Type& t, std::vector<Name>& out);

void collect_binders(const ShapeType& s, std::vector<Name>& out) {
  std::visit(overloaded{
                 [&](const shape::Fun& f) {
                   out.push_back(f.param);
                   collect_binders(f.param_type, out);
                   collect_binders(f.result, out);
                 },
                 [&](const shape::TFun& f) {
                   out.push_back(f.tparam);
                   collect_binders(f.bound, out);
                   collect_binders(f.body, out);
                 },
                 [&](const shape::Box& b) { collect_binders(b.inner, out); },
                 [&](const shape::Ref& r) { collect_binders(r.inner, out); },
                 [&](const shape::Rdr& r) { collect_binders(r.inner, out); },
                 [](const auto&) {},
             },
             s.node().v);
}

void collect_binders(const Type& t, std::vector<Name>& out) { collect_binders(t.shape, out); }

void collect_binders(const Term& t, std::vector<Name>& out) {
  std::visit(overloaded{
                 [&](const term::Lam& l) {
                   out.push_back(l.param);
                   collect_binders(l.param_type, out);
                   collect_binders(l.body, out);
                 },
                 [&](const term::TLam& l) {
                   out.push_back(l.tparam);
                   collect_binders(l.bound, out);
                   collect_binders(l.body, out);
                 },
                 [&](const term::TApp& a) { collect_binders(a.arg, out); },
                 [&](const term::Let& l) {
                   out.push_back(l.name);
                   collect_binders(l.bound, out);
                   collect_binders(l.body, out);
                 },
                 [&](const term::DVar& d) {
                   out.push_back(d.name);
                   collect_binders(d.body, out);
                 },
                 [](const auto&) {},
             },
             t.node().v);
}
}  // namespace

std::vector<Name> binder_names(const Term& t) {
  std::vector<Name> out;
  collect_binders(t, out);
  return out;
}

}  // namespace csc
