#include "csc/runtime.hpp"

#include <sstream>

#include "csc/print.hpp"
#include "csc/subst.hpp"

namespace csc {

// ------------------------------------------------------------------ stores

void Store::append(StoreBinding b) {
  if (b.kind == StoreBinding::Kind::Set) {
    if (!has_var(b.name)) {
      throw RuntimeError(RuntimeError::Kind::MissingVar, "set of '" + b.name + "' without a mutable binding");
    }
  } else if (defines(b.name)) {
    throw RuntimeError(RuntimeError::Kind::DuplicateBinding, "store already binds '" + b.name + "'");
  }
  entries_.push_back(std::move(b));
}

bool Store::has_var(const Name& x) const {
  for (const auto& e : entries_) {
    if (e.kind == StoreBinding::Kind::VarInit && e.name == x) return true;
  }
  return false;
}

const Term* Store::find_val(const Name& x) const {
  for (const auto& e : entries_) {
    if (e.kind == StoreBinding::Kind::Val && e.name == x) return &e.value;
  }
  return nullptr;
}

bool Store::defines(const Name& x) const {
  for (const auto& e : entries_) {
    if (e.kind != StoreBinding::Kind::Set && e.name == x) return true;
  }
  return false;
}

Term lookup_val(const Store& s, const Name& x) {
  if (const Term* v = s.find_val(x)) return *v;
  throw RuntimeError(RuntimeError::Kind::MissingVal, "no value bound to '" + x + "'");
}

Term lookup_var(const Store& s, const Name& x) {
  const auto& es = s.entries();
  for (auto it = es.rbegin(); it != es.rend(); ++it) {
    if (it->name != x) continue;
    if (it->kind == StoreBinding::Kind::Set || it->kind == StoreBinding::Kind::VarInit) return it->value;
  }
  throw RuntimeError(RuntimeError::Kind::MissingVar, "no mutable variable '" + x + "'");
}

std::string print_store(const Store& s) {
  if (s.entries().empty()) return "·";
  std::string out;
  for (const auto& e : s.entries()) {
    if (!out.empty()) out += ", ";
    switch (e.kind) {
      case StoreBinding::Kind::Val: out += "val " + e.name + "↦" + print_term(e.value); break;
      case StoreBinding::Kind::VarInit: out += "var " + e.name + " := " + print_term(e.value); break;
      case StoreBinding::Kind::Set: out += "set " + e.name + " := " + print_term(e.value); break;
    }
  }
  return out;
}

std::string print_config(const Configuration& c) { return print_store(c.store) + " | " + print_term(c.term); }

std::string to_string(const FocusPath& p) {
  if (p.empty()) return "[]";
  std::string out;
  for (const auto& s : p) {
    if (!out.empty()) out += "/";
    out += (s.kind == FocusStep::Kind::IntoBinding ? "bind(" : "body(") + s.binder + ")";
  }
  return out;
}

const char* to_string(Rule r) {
  switch (r) {
    case Rule::Apply: return "apply";
    case Rule::TApply: return "tapply";
    case Rule::Open: return "open";
    case Rule::Get: return "get";
    case Rule::LiftLet: return "lift-let";
    case Rule::Rename: return "rename";
    case Rule::LiftVar: return "lift-var";
    case Rule::LiftSet: return "lift-set";
    case Rule::Add: return "add";
  }
  return "?";
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Answer: return "answer";
    case Outcome::Stuck: return "stuck";
    case Outcome::StepLimit: return "step-limit";
  }
  return "?";
}

bool is_answer_config(const Configuration& c) { return c.term.is_answer(); }

// ----------------------------------------------------------------- redexes

namespace {

bool closed_under(const Term& v, const Store& s) {
  FreeNames fv = free_names(v);
  if (!fv.types.empty()) return false;
  for (const auto& n : fv.terms) {
    if (!s.defines(n)) return false;
  }
  return true;
}

template <class T>
const T* val_as(const Store& s, const Name& x) {
  const Term* v = s.find_val(x);
  return v ? v->as<T>() : nullptr;
}

std::optional<Rule> local_rule(const Term& t, const Store& s) {
  return std::visit(overloaded{
                        [&](const term::App& a) -> std::optional<Rule> {
                          if (val_as<term::Lam>(s, a.fn)) return Rule::Apply;
                          return std::nullopt;
                        },
                        [&](const term::TApp& a) -> std::optional<Rule> {
                          if (val_as<term::TLam>(s, a.fn)) return Rule::TApply;
                          return std::nullopt;
                        },
                        [&](const term::Unbox& u) -> std::optional<Rule> {
                          if (val_as<term::BoxVal>(s, u.var)) return Rule::Open;
                          return std::nullopt;
                        },
                        [&](const term::Read& r) -> std::optional<Rule> {
                          const auto* rd = val_as<term::ReaderVal>(s, r.var);
                          if (rd && s.has_var(rd->var)) return Rule::Get;
                          return std::nullopt;
                        },
                        [&](const term::Write& w) -> std::optional<Rule> {
                          if (s.has_val(w.value) && s.has_var(w.target)) return Rule::LiftSet;
                          return std::nullopt;
                        },
                        [&](const term::DVar& d) -> std::optional<Rule> {
                          if (s.has_val(d.init)) return Rule::LiftVar;
                          return std::nullopt;
                        },
                        [&](const term::Add& a) -> std::optional<Rule> {
                          if (val_as<term::NatLit>(s, a.lhs) && val_as<term::NatLit>(s, a.rhs)) return Rule::Add;
                          return std::nullopt;
                        },
                        [](const auto&) -> std::optional<Rule> { return std::nullopt; },
                    },
                    t.node().v);
}

void collect(const Term& t, FocusPath& path, const Store& s, std::vector<Redex>& out) {
  if (const auto* l = t.as<term::Let>()) {
    if (l->bound.is_value()) {
      if (closed_under(l->bound, s)) out.push_back({path, Rule::LiftLet});
    } else if (l->bound.as<term::Var>()) {
      out.push_back({path, Rule::Rename});
    } else {
      path.push_back({FocusStep::Kind::IntoBinding, l->name});
      collect(l->bound, path, s, out);
      path.pop_back();
    }
    if (l->mode == LetMode::Par) {
      path.push_back({FocusStep::Kind::IntoBody, l->name});
      collect(l->body, path, s, out);
      path.pop_back();
    }
    return;
  }
  if (auto r = local_rule(t, s)) out.push_back({path, *r});
}

[[noreturn]] void violation(const std::string& msg) { throw RuntimeError(RuntimeError::Kind::RuleViolation, msg); }

// Rebuilds t with the subterm at path[i..] replaced by f(subterm).
template <class F>
Term rewrite_at(const Term& t, const FocusPath& path, std::size_t i, F&& f) {
  if (i == path.size()) return f(t);
  const auto* l = t.as<term::Let>();
  if (!l || l->name != path[i].binder) violation("focus path does not match the term");
  Term out = t;
  if (path[i].kind == FocusStep::Kind::IntoBinding) {
    out = Term::let(l->mode, l->name, rewrite_at(l->bound, path, i + 1, f), l->body);
  } else {
    if (l->mode != LetMode::Par) violation("body focus on a sequential let");
    out = Term::let(l->mode, l->name, l->bound, rewrite_at(l->body, path, i + 1, f));
  }
  return t.span().known() ? out.with_span(t.span()) : out;
}

Name thread_tag(const FocusPath& path) {
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    if (it->kind == FocusStep::Kind::IntoBinding) return it->binder;
  }
  return "0";
}

}  // namespace

std::vector<Redex> enabled_redexes(const Configuration& c) {
  std::vector<Redex> out;
  FocusPath path;
  collect(c.term, path, c.store, out);
  return out;
}

StepResult step(const Configuration& c, std::size_t choice, const StepOptions& opts) {
  auto redexes = enabled_redexes(c);
  if (choice >= redexes.size()) {
    throw RuntimeError(RuntimeError::Kind::InvalidChoice, "choice " + std::to_string(choice) + " out of range (" +
                                                              std::to_string(redexes.size()) + " enabled)");
  }
  return step_redex(c, redexes[choice], opts);
}

StepResult step_redex(const Configuration& c, const Redex& r, const StepOptions& opts) {
  StepResult res{c, r, {}};
  Configuration& next = res.config;
  const Name tag = thread_tag(r.path);

  auto freshener = [&next, tag](Renamer& ren) {
    ren.on_binder([&next, tag](const Name& b, BinderKind) {
      return base_name(b) + "%" + tag + "." + std::to_string(++next.fresh[tag]);
    });
  };
  auto val = [&](const Name& x) -> const Term& {
    const Term* v = c.store.find_val(x);
    if (!v) violation(std::string(to_string(r.rule)) + ": '" + x + "' has no value");
    return *v;
  };

  next.term = rewrite_at(c.term, r.path, 0, [&](const Term& t) -> Term {
    switch (r.rule) {
      case Rule::LiftLet: {
        const auto* l = t.as<term::Let>();
        if (!l || !l->bound.is_value() || !closed_under(l->bound, c.store)) violation("lift-let premise fails");
        next.store.append({StoreBinding::Kind::Val, l->name, l->bound});
        return l->body;
      }
      case Rule::Rename: {
        const auto* l = t.as<term::Let>();
        const auto* y = l ? l->bound.as<term::Var>() : nullptr;
        if (!y) violation("rename premise fails");
        return opts.mutate ? l->body : rename_free(l->body, l->name, y->name);
      }
      case Rule::LiftVar: {
        const auto* d = t.as<term::DVar>();
        if (!d) violation("lift-var premise fails");
        next.store.append({StoreBinding::Kind::VarInit, d->name, val(d->init)});
        return d->body;
      }
      case Rule::Apply: {
        const auto* a = t.as<term::App>();
        const auto* lam = a ? val(a->fn).as<term::Lam>() : nullptr;
        if (!lam) violation("apply premise fails");
        Renamer ren;
        freshener(ren);
        if (!opts.mutate) ren.rename(lam->param, a->arg);
        return ren.term(lam->body);
      }
      case Rule::TApply: {
        const auto* a = t.as<term::TApp>();
        const auto* tl = a ? val(a->fn).as<term::TLam>() : nullptr;
        if (!tl) violation("tapply premise fails");
        Renamer ren;
        freshener(ren);
        ren.substitute(tl->tparam, a->arg);
        return ren.term(tl->body);
      }
      case Rule::Open: {
        const auto* u = t.as<term::Unbox>();
        const auto* b = u ? val(u->var).as<term::BoxVal>() : nullptr;
        if (!b) violation("open premise fails");
        return Term::var(b->var);
      }
      case Rule::Get: {
        const auto* rd = t.as<term::Read>();
        const auto* rv = rd ? val(rd->var).as<term::ReaderVal>() : nullptr;
        if (!rv || !c.store.has_var(rv->var)) violation("get premise fails");
        res.events.push_back({AccessEvent::Kind::ReadVar, rv->var, r.path, 0});
        return lookup_var(c.store, rv->var);
      }
      case Rule::LiftSet: {
        const auto* w = t.as<term::Write>();
        if (!w || !c.store.has_var(w->target)) violation("lift-set premise fails");
        Term v = val(w->value);
        next.store.append({StoreBinding::Kind::Set, w->target, v});
        res.events.push_back({AccessEvent::Kind::WriteVar, w->target, r.path, 0});
        return v;
      }
      case Rule::Add: {
        const auto* a = t.as<term::Add>();
        const auto* x = a ? val(a->lhs).as<term::NatLit>() : nullptr;
        const auto* y = a ? val(a->rhs).as<term::NatLit>() : nullptr;
        if (!x || !y) violation("add premise fails");
        return Term::nat(x->value + y->value);
      }
    }
    violation("unknown rule");
  });
  return res;
}

// --------------------------------------------------------------- schedules

Schedule Schedule::random(std::uint64_t seed) {
  Schedule s(Kind::Random);
  s.seed_ = seed;
  s.state_ = seed;
  return s;
}

Schedule Schedule::scripted(std::vector<std::size_t> choices) {
  Schedule s(Kind::Scripted);
  s.script_ = std::move(choices);
  return s;
}

Schedule Schedule::parse_script(const std::string& text) {
  std::vector<std::size_t> choices;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    line = line.substr(0, line.find('#'));
    std::istringstream words(line);
    std::string w;
    while (words >> w) {
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(w, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != w.size() || w[0] == '-') {
        throw RuntimeError(RuntimeError::Kind::InvalidChoice, "bad schedule entry '" + w + "'");
      }
      choices.push_back(static_cast<std::size_t>(v));
    }
  }
  return scripted(std::move(choices));
}

std::string Schedule::describe() const {
  switch (kind_) {
    case Kind::LeftFirst: return "left-first";
    case Kind::RightFirst: return "right-first";
    case Kind::Random: return "random(" + std::to_string(seed_) + ")";
    case Kind::Scripted: return "scripted";
  }
  return "?";
}

std::size_t Schedule::choose(const std::vector<Redex>& enabled) {
  const std::size_t n = enabled.size();
  switch (kind_) {
    case Kind::LeftFirst: return 0;
    case Kind::RightFirst: return n - 1;
    case Kind::Random:
      state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
      return static_cast<std::size_t>((state_ >> 33) % n);
    case Kind::Scripted:
      if (pos_ >= script_.size()) return 0;
      if (script_[pos_] >= n) {
        throw RuntimeError(RuntimeError::Kind::InvalidChoice,
                           "scripted choice " + std::to_string(script_[pos_]) + " at step " +
                               std::to_string(pos_ + 1) + " out of range (" + std::to_string(n) + " enabled)");
      }
      return script_[pos_++];
  }
  return 0;
}

RunResult run(const Term& t, Schedule sched, std::size_t max_steps, const StepOptions& opts) {
  Configuration cfg(t);
  RunResult res{Outcome::Answer, cfg, cfg, {}};
  for (std::size_t n = 0;; ++n) {
    auto redexes = enabled_redexes(cfg);
    if (redexes.empty()) {
      res.outcome = is_answer_config(cfg) ? Outcome::Answer : Outcome::Stuck;
      break;
    }
    if (n >= max_steps) {
      res.outcome = Outcome::StepLimit;
      break;
    }
    std::size_t choice = sched.choose(redexes);
    StepResult sr = step_redex(cfg, redexes[choice], opts);
    for (auto& e : sr.events) e.step = n + 1;
    cfg = sr.config;
    res.trace.push_back({n + 1, sr.redex, std::move(sr.events), cfg});
  }
  res.final = cfg;
  return res;
}

}  // namespace csc
