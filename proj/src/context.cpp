#include "csc/context.hpp"

#include <algorithm>
#include <set>

#include "csc/print.hpp"

namespace csc {

const Name& binding_name(const Binding& b) {
  return std::visit([](const auto& x) -> const Name& { return x.name; }, b);
}

namespace {
std::string context_error_message(ContextError::Kind kind, const Name& name) {
  switch (kind) {
    case ContextError::Kind::DuplicateName:
      return "name '" + name + "' is already bound";
    case ContextError::Kind::NotFound:
      return "name '" + name + "' is not bound";
    case ContextError::Kind::ReservedName:
      break;
  }
  return "'" + name + "' is a root capability and cannot be bound";
}

std::string wf_error_message(WfError::Kind kind, const Name& name, const std::string& location) {
  switch (kind) {
    case WfError::Kind::UnboundName:
      return "unbound name '" + name + "' in " + location;
    case WfError::Kind::UnboundTypeVar:
      return "unbound type variable '" + name + "' in " + location;
    case WfError::Kind::RootInDegree:
      break;
  }
  return "separation degree in " + location + " mentions a root capability";
}
}  // namespace

ContextError::ContextError(Kind kind, Name name)
    : std::runtime_error(context_error_message(kind, name)), kind_(kind), name_(std::move(name)) {}

WfError::WfError(Kind kind, Name name, std::string location)
    : std::runtime_error(wf_error_message(kind, name, location)),
      kind_(kind),
      name_(std::move(name)),
      location_(std::move(location)) {}

TypingContext TypingContext::extend(Binding binding) const {
  const Name& name = binding_name(binding);
  if (name == "cap" || name == "rdr") throw ContextError(ContextError::Kind::ReservedName, name);
  if (binds(name)) throw ContextError(ContextError::Kind::DuplicateName, name);
  TypingContext out = *this;
  out.bindings_.push_back(std::move(binding));
  return out;
}

TypingContext TypingContext::extend_term(Name name, SeparationDegree degree, Type type) const {
  return extend(TermBinding{std::move(name), std::move(degree), std::move(type)});
}

TypingContext TypingContext::extend_type(Name name, ShapeType bound) const {
  return extend(TypeBinding{std::move(name), std::move(bound)});
}

const Binding& TypingContext::lookup(const Name& name) const {
  for (const auto& b : bindings_) {
    if (binding_name(b) == name) return b;
  }
  throw ContextError(ContextError::Kind::NotFound, name);
}

const TermBinding* TypingContext::find_term(const Name& name) const {
  for (const auto& b : bindings_) {
    const auto* t = std::get_if<TermBinding>(&b);
    if (t && t->name.size() == name.size() && t->name[0] == name[0] && t->name == name) return t;
  }
  return nullptr;
}

const TypeBinding* TypingContext::find_type(const Name& name) const {
  for (const auto& b : bindings_) {
    if (const auto* t = std::get_if<TypeBinding>(&b); t && t->name == name) return t;
  }
  return nullptr;
}

bool TypingContext::binds(const Name& name) const {
  return std::any_of(bindings_.begin(), bindings_.end(), [&](const Binding& b) { return binding_name(b) == name; });
}

CaptureSet TypingContext::term_domain() const {
  std::vector<CaptureAtom> atoms;
  for (const auto& b : bindings_) {
    if (const auto* t = std::get_if<TermBinding>(&b)) atoms.push_back(CaptureAtom::var(t->name));
  }
  return CaptureSet(std::move(atoms));
}

TypingContext TypingContext::prefix(std::size_t n) const {
  TypingContext out;
  out.bindings_.assign(bindings_.begin(), bindings_.begin() + static_cast<std::ptrdiff_t>(std::min(n, size())));
  return out;
}

std::string TypingContext::to_string() const {
  std::string out;
  for (const auto& b : bindings_) {
    if (!out.empty()) out += ", ";
    std::visit(overloaded{
                   [&](const TypeBinding& t) { out += t.name + " <: " + print_shape(t.bound); },
                   [&](const TermBinding& t) {
                     out += t.name + " :" + t.degree.to_string() + " " + print_type(t.type);
                   },
               },
               b);
  }
  return out.empty() ? "(empty)" : out;
}

namespace {

// Scoping walk: names bound by binders inside the type being checked.
class WfChecker {
 public:
  WfChecker(const TypingContext& ctx, std::string location) : ctx_(ctx), location_(std::move(location)) {}

  void type(const Type& ty) {
    captures(ty.captures);
    shape(ty.shape);
  }

  void captures(const CaptureSet& set) {
    for (const auto& a : set) {
      if (a.is_root()) continue;
      if (!term_bound(a.name())) throw WfError(WfError::Kind::UnboundName, a.name(), location_);
    }
  }

  void degree(const SeparationDegree& d) {
    for (const auto& a : d.set()) {
      if (a.is_root()) throw WfError(WfError::Kind::RootInDegree, a.to_string(), location_);
      if (!term_bound(a.name())) throw WfError(WfError::Kind::UnboundName, a.name(), location_);
    }
  }

  void shape(const ShapeType& s) {
    std::visit(overloaded{
                   [&](const shape::TVar& v) {
                     if (!type_bound(v.name)) throw WfError(WfError::Kind::UnboundTypeVar, v.name, location_);
                   },
                   [&](const shape::Top&) {},
                   [&](const shape::Nat&) {},
                   [&](const shape::Fun& f) {
                     degree(f.degree);
                     type(f.param_type);
                     local_terms_.push_back(f.param);
                     type(f.result);
                     local_terms_.pop_back();
                   },
                   [&](const shape::TFun& f) {
                     shape(f.bound);
                     local_types_.push_back(f.tparam);
                     type(f.body);
                     local_types_.pop_back();
                   },
                   [&](const shape::Box& b) { type(b.inner); },
                   [&](const shape::Ref& r) { shape(r.inner); },
                   [&](const shape::Rdr& r) { shape(r.inner); },
               },
               s.node().v);
  }

 private:
  bool term_bound(const Name& n) const {
    return std::find(local_terms_.begin(), local_terms_.end(), n) != local_terms_.end() ||
           ctx_.find_term(n) != nullptr;
  }
  bool type_bound(const Name& n) const {
    return std::find(local_types_.begin(), local_types_.end(), n) != local_types_.end() ||
           ctx_.find_type(n) != nullptr;
  }

  const TypingContext& ctx_;
  std::string location_;
  std::vector<Name> local_terms_;
  std::vector<Name> local_types_;
};

}  // namespace

void wf_type(const TypingContext& ctx, const Type& ty) { WfChecker(ctx, "type " + print_type(ty)).type(ty); }

void wf_shape(const TypingContext& ctx, const ShapeType& s) { WfChecker(ctx, "type " + print_shape(s)).shape(s); }

void wf_degree(const TypingContext& ctx, const SeparationDegree& d) {
  WfChecker(ctx, "separation degree " + d.to_string()).degree(d);
}

void wf_context(const TypingContext& ctx) {
  std::set<Name> seen;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const Binding& b = ctx.bindings()[i];
    const Name& n = binding_name(b);
    if (n == "cap" || n == "rdr") throw ContextError(ContextError::Kind::ReservedName, n);
    if (!seen.insert(n).second) throw ContextError(ContextError::Kind::DuplicateName, n);
    TypingContext before = ctx.prefix(i);
    std::visit(overloaded{
                   [&](const TypeBinding& t) { WfChecker(before, "bound of " + n).shape(t.bound); },
                   [&](const TermBinding& t) {
                     WfChecker(before, "degree of " + n).degree(t.degree);
                     WfChecker(before, "type of " + n).type(t.type);
                   },
               },
               b);
  }
}

}  // namespace csc
