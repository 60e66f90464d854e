#include "csc/ast.hpp"

#include <algorithm>

namespace csc {

std::string CaptureAtom::to_string() const {
  switch (kind_) {
    case Kind::Cap:
      return "cap";
    case Kind::Rdr:
      return "rdr";
    case Kind::Var:
      break;
  }
  return name_;
}

CaptureSet::CaptureSet(std::initializer_list<CaptureAtom> atoms) : atoms_(atoms) {
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

CaptureSet::CaptureSet(std::vector<CaptureAtom> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

CaptureSet CaptureSet::of_names(std::initializer_list<Name> names) {
  std::vector<CaptureAtom> atoms;
  for (const auto& n : names) {
    if (n == "cap") {
      atoms.push_back(CaptureAtom::cap());
    } else if (n == "rdr") {
      atoms.push_back(CaptureAtom::rdr());
    } else {
      atoms.push_back(CaptureAtom::var(n));
    }
  }
  return CaptureSet(std::move(atoms));
}

bool CaptureSet::contains(const CaptureAtom& atom) const {
  // Sets are tiny in practice; a linear scan beats the ordered compare.
  if (atoms_.size() <= 8) return std::find(atoms_.begin(), atoms_.end(), atom) != atoms_.end();
  return std::binary_search(atoms_.begin(), atoms_.end(), atom);
}

bool CaptureSet::contains_var(const Name& name) const {
  return std::any_of(atoms_.begin(), atoms_.end(), [&](const CaptureAtom& a) { return a.is_var() && a.name() == name; });
}

bool CaptureSet::has_root() const {
  return std::any_of(atoms_.begin(), atoms_.end(), [](const CaptureAtom& a) { return a.is_root(); });
}

bool CaptureSet::subset_of(const CaptureSet& other) const {
  return std::includes(other.atoms_.begin(), other.atoms_.end(), atoms_.begin(), atoms_.end());
}

void CaptureSet::insert(CaptureAtom atom) {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), atom);
  if (it == atoms_.end() || *it != atom) atoms_.insert(it, std::move(atom));
}

void CaptureSet::erase(const CaptureAtom& atom) {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), atom);
  if (it != atoms_.end() && *it == atom) atoms_.erase(it);
}

CaptureSet CaptureSet::united(const CaptureSet& other) const {
  CaptureSet out;
  out.atoms_.reserve(atoms_.size() + other.atoms_.size());
  std::set_union(atoms_.begin(), atoms_.end(), other.atoms_.begin(), other.atoms_.end(),
                 std::back_inserter(out.atoms_));
  return out;
}

CaptureSet CaptureSet::without(const Name& name) const {
  CaptureSet out = *this;
  out.erase(CaptureAtom::var(name));
  return out;
}

CaptureSet CaptureSet::replaced(const Name& from, const CaptureSet& to) const {
  if (!contains_var(from)) return *this;
  return without(from).united(to);
}

std::string CaptureSet::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) out += ", ";
    out += atoms_[i].to_string();
  }
  return out + "}";
}

SeparationDegree::SeparationDegree(CaptureSet set) : set_(std::move(set)) {
  if (set_.has_root()) throw RootInDegreeError();
}

SeparationDegree::SeparationDegree(std::initializer_list<Name> names)
    : SeparationDegree(CaptureSet::of_names(names)) {}

namespace {
ShapeType make_shape(decltype(ShapeNode::v) v) {
  return ShapeType(std::make_shared<const ShapeNode>(ShapeNode{std::move(v)}));
}

Term make_term(decltype(TermNode::v) v) {
  return Term(std::make_shared<const TermNode>(TermNode{std::move(v), Span{}}));
}

const ShapeType& top_singleton() {
  static const ShapeType t = make_shape(shape::Top{});
  return t;
}
}  // namespace

ShapeType::ShapeType() : ShapeType(top_singleton()) {}

ShapeType ShapeType::tvar(Name name) { return make_shape(shape::TVar{std::move(name)}); }
ShapeType ShapeType::top() { return top_singleton(); }
ShapeType ShapeType::nat() {
  static const ShapeType n = make_shape(shape::Nat{});
  return n;
}
ShapeType ShapeType::fun(Name param, SeparationDegree degree, Type param_type, Type result) {
  return make_shape(shape::Fun{std::move(param), std::move(degree), std::move(param_type), std::move(result)});
}
ShapeType ShapeType::tfun(Name tparam, ShapeType bound, Type body) {
  return make_shape(shape::TFun{std::move(tparam), std::move(bound), std::move(body)});
}
ShapeType ShapeType::box(Type inner) { return make_shape(shape::Box{std::move(inner)}); }
ShapeType ShapeType::ref(ShapeType inner) { return make_shape(shape::Ref{std::move(inner)}); }
ShapeType ShapeType::rdr(ShapeType inner) { return make_shape(shape::Rdr{std::move(inner)}); }

bool ShapeType::operator==(const ShapeType& other) const {
  return node_ == other.node_ || node_->v == other.node_->v;
}

Term Term::var(Name x) { return make_term(term::Var{std::move(x)}); }
Term Term::lam(Name x, SeparationDegree degree, Type param_type, Term body) {
  return make_term(term::Lam{std::move(x), std::move(degree), std::move(param_type), std::move(body)});
}
Term Term::tlam(Name X, ShapeType bound, Term body) {
  return make_term(term::TLam{std::move(X), std::move(bound), std::move(body)});
}
Term Term::box(Name x) { return make_term(term::BoxVal{std::move(x)}); }
Term Term::reader(Name x) { return make_term(term::ReaderVal{std::move(x)}); }
Term Term::app(Name f, Name arg) { return make_term(term::App{std::move(f), std::move(arg)}); }
Term Term::tapp(Name f, ShapeType arg) { return make_term(term::TApp{std::move(f), std::move(arg)}); }
Term Term::let(LetMode mode, Name x, Term bound, Term body) {
  return make_term(term::Let{mode, std::move(x), std::move(bound), std::move(body)});
}
Term Term::unbox(CaptureSet captures, Name x) { return make_term(term::Unbox{std::move(captures), std::move(x)}); }
Term Term::dvar(Name x, SeparationDegree degree, Name init, Term body) {
  return make_term(term::DVar{std::move(x), std::move(degree), std::move(init), std::move(body)});
}
Term Term::read(Name x) { return make_term(term::Read{std::move(x)}); }
Term Term::write(Name target, Name value) { return make_term(term::Write{std::move(target), std::move(value)}); }
Term Term::nat(std::uint64_t n) { return make_term(term::NatLit{n}); }
Term Term::add(Name lhs, Name rhs) { return make_term(term::Add{std::move(lhs), std::move(rhs)}); }

const Span& Term::span() const { return node_->span; }

Term Term::with_span(Span span) const {
  return Term(std::make_shared<const TermNode>(TermNode{node_->v, span}));
}

bool Term::is_value() const {
  return std::visit(overloaded{
                        [](const term::Lam&) { return true; },
                        [](const term::TLam&) { return true; },
                        [](const term::BoxVal&) { return true; },
                        [](const term::ReaderVal&) { return true; },
                        [](const term::NatLit&) { return true; },
                        [](const auto&) { return false; },
                    },
                    node_->v);
}

bool Term::is_answer() const { return is_value() || as<term::Var>() != nullptr; }

bool Term::operator==(const Term& other) const { return node_ == other.node_ || node_->v == other.node_->v; }

}  // namespace csc
