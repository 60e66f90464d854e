// Abstract syntax of the capture separation calculus: capture atoms and sets,
// separation degrees, shape types, capturing types and A-normal terms.
//
// All nodes are immutable and shared; copying a Term or ShapeType copies a
// pointer. Equality is structural and ignores source spans.
#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace csc {

using Name = std::string;

struct Span {
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::uint32_t length = 0;

  bool known() const { return line != 0; }
  bool operator==(const Span&) const = default;
};

class CaptureAtom {
 public:
  enum class Kind : std::uint8_t { Cap, Rdr, Var };

  static CaptureAtom var(Name name) { return CaptureAtom(Kind::Var, std::move(name)); }
  static CaptureAtom cap() { return CaptureAtom(Kind::Cap, {}); }
  static CaptureAtom rdr() { return CaptureAtom(Kind::Rdr, {}); }

  Kind kind() const { return kind_; }
  bool is_var() const { return kind_ == Kind::Var; }
  bool is_root() const { return kind_ != Kind::Var; }
  bool is_cap() const { return kind_ == Kind::Cap; }
  bool is_rdr() const { return kind_ == Kind::Rdr; }
  // Empty for roots.
  const Name& name() const { return name_; }

  std::string to_string() const;

  auto operator<=>(const CaptureAtom&) const = default;
  // Names are short; the first-character test skips most memcmp calls.
  bool operator==(const CaptureAtom& o) const {
    return kind_ == o.kind_ && name_.size() == o.name_.size() &&
           (name_.empty() || (name_[0] == o.name_[0] && name_ == o.name_));
  }

 private:
  CaptureAtom(Kind kind, Name name) : kind_(kind), name_(std::move(name)) {}

  Kind kind_;
  Name name_;
};

// A finite set of capture atoms kept sorted and duplicate-free.
class CaptureSet {
 public:
  using const_iterator = std::vector<CaptureAtom>::const_iterator;

  CaptureSet() = default;
  CaptureSet(std::initializer_list<CaptureAtom> atoms);
  explicit CaptureSet(std::vector<CaptureAtom> atoms);

  static CaptureSet of_names(std::initializer_list<Name> names);
  static CaptureSet singleton(CaptureAtom atom) { return CaptureSet{std::move(atom)}; }
  static CaptureSet universal() { return CaptureSet{CaptureAtom::cap()}; }

  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }
  const_iterator begin() const { return atoms_.begin(); }
  const_iterator end() const { return atoms_.end(); }
  const std::vector<CaptureAtom>& atoms() const { return atoms_; }

  bool contains(const CaptureAtom& atom) const;
  bool contains_var(const Name& name) const;
  bool has_root() const;
  bool subset_of(const CaptureSet& other) const;

  void insert(CaptureAtom atom);
  void erase(const CaptureAtom& atom);

  CaptureSet united(const CaptureSet& other) const;
  CaptureSet without(const Name& name) const;
  // Replaces the variable `from` (if present) by all atoms of `to`.
  CaptureSet replaced(const Name& from, const CaptureSet& to) const;

  std::string to_string() const;

  bool operator==(const CaptureSet&) const = default;

 private:
  std::vector<CaptureAtom> atoms_;
};

class RootInDegreeError : public std::invalid_argument {
 public:
  RootInDegreeError() : std::invalid_argument("separation degree cannot mention cap or rdr") {}
};

// The set of variables a binding is declared separated from. Never contains
// a root; the constructor throws RootInDegreeError otherwise.
class SeparationDegree {
 public:
  SeparationDegree() = default;
  explicit SeparationDegree(CaptureSet set);
  SeparationDegree(std::initializer_list<Name> names);

  const CaptureSet& set() const { return set_; }
  bool empty() const { return set_.empty(); }
  bool contains(const Name& name) const { return set_.contains_var(name); }
  std::string to_string() const { return set_.to_string(); }

  bool operator==(const SeparationDegree&) const = default;

 private:
  CaptureSet set_;
};

struct ShapeNode;
struct Type;

class ShapeType {
 public:
  ShapeType();  // Top
  explicit ShapeType(std::shared_ptr<const ShapeNode> node) : node_(std::move(node)) {}

  static ShapeType tvar(Name name);
  static ShapeType top();
  static ShapeType nat();
  static ShapeType fun(Name param, SeparationDegree degree, Type param_type, Type result);
  static ShapeType tfun(Name tparam, ShapeType bound, Type body);
  static ShapeType box(Type inner);
  static ShapeType ref(ShapeType inner);
  static ShapeType rdr(ShapeType inner);

  const ShapeNode& node() const { return *node_; }
  template <class T>
  const T* as() const;

  bool operator==(const ShapeType& other) const;

 private:
  std::shared_ptr<const ShapeNode> node_;
};

struct Type {
  ShapeType shape;
  CaptureSet captures;

  Type() = default;
  Type(ShapeType s) : shape(std::move(s)) {}  // NOLINT: S is S^{}
  Type(ShapeType s, CaptureSet c) : shape(std::move(s)), captures(std::move(c)) {}

  bool operator==(const Type&) const = default;
};

namespace shape {
struct TVar {
  Name name;
  bool operator==(const TVar&) const = default;
};
struct Top {
  bool operator==(const Top&) const = default;
};
struct Nat {
  bool operator==(const Nat&) const = default;
};
struct Fun {
  Name param;
  SeparationDegree degree;
  Type param_type;
  Type result;
  bool operator==(const Fun&) const = default;
};
struct TFun {
  Name tparam;
  ShapeType bound;
  Type body;
  bool operator==(const TFun&) const = default;
};
struct Box {
  Type inner;
  bool operator==(const Box&) const = default;
};
struct Ref {
  ShapeType inner;
  bool operator==(const Ref&) const = default;
};
struct Rdr {
  ShapeType inner;
  bool operator==(const Rdr&) const = default;
};
}  // namespace shape

struct ShapeNode {
  std::variant<shape::TVar, shape::Top, shape::Nat, shape::Fun, shape::TFun, shape::Box, shape::Ref,
               shape::Rdr>
      v;
};

template <class T>
const T* ShapeType::as() const {
  return std::get_if<T>(&node_->v);
}

enum class LetMode : std::uint8_t { Seq, Par };

struct TermNode;

class Term {
 public:
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}

  static Term var(Name x);
  static Term lam(Name x, SeparationDegree degree, Type param_type, Term body);
  static Term tlam(Name X, ShapeType bound, Term body);
  static Term box(Name x);
  static Term reader(Name x);
  static Term app(Name f, Name arg);
  static Term tapp(Name f, ShapeType arg);
  static Term let(LetMode mode, Name x, Term bound, Term body);
  static Term unbox(CaptureSet captures, Name x);
  static Term dvar(Name x, SeparationDegree degree, Name init, Term body);
  static Term read(Name x);
  static Term write(Name target, Name value);
  static Term nat(std::uint64_t n);
  static Term add(Name lhs, Name rhs);

  const TermNode& node() const { return *node_; }
  template <class T>
  const T* as() const;
  const Span& span() const;
  Term with_span(Span span) const;

  // v ::= lambda | type lambda | box x | reader x   (plus natural literals)
  bool is_value() const;
  // a ::= v | x
  bool is_answer() const;

  bool operator==(const Term& other) const;

 private:
  std::shared_ptr<const TermNode> node_;
};

namespace term {
struct Var {
  Name name;
  bool operator==(const Var&) const = default;
};
struct Lam {
  Name param;
  SeparationDegree degree;
  Type param_type;
  Term body;
  bool operator==(const Lam&) const = default;
};
struct TLam {
  Name tparam;
  ShapeType bound;
  Term body;
  bool operator==(const TLam&) const = default;
};
struct BoxVal {
  Name var;
  bool operator==(const BoxVal&) const = default;
};
struct ReaderVal {
  Name var;
  bool operator==(const ReaderVal&) const = default;
};
struct App {
  Name fn;
  Name arg;
  bool operator==(const App&) const = default;
};
struct TApp {
  Name fn;
  ShapeType arg;
  bool operator==(const TApp&) const = default;
};
struct Let {
  LetMode mode;
  Name name;
  Term bound;
  Term body;
  bool operator==(const Let&) const = default;
};
struct Unbox {
  CaptureSet captures;
  Name var;
  bool operator==(const Unbox&) const = default;
};
struct DVar {
  Name name;
  SeparationDegree degree;
  Name init;
  Term body;
  bool operator==(const DVar&) const = default;
};
struct Read {
  Name var;
  bool operator==(const Read&) const = default;
};
struct Write {
  Name target;
  Name value;
  bool operator==(const Write&) const = default;
};
// Natural-number extension.
struct NatLit {
  std::uint64_t value;
  bool operator==(const NatLit&) const = default;
};
struct Add {
  Name lhs;
  Name rhs;
  bool operator==(const Add&) const = default;
};
}  // namespace term

struct TermNode {
  std::variant<term::Var, term::Lam, term::TLam, term::BoxVal, term::ReaderVal, term::App, term::TApp,
               term::Let, term::Unbox, term::DVar, term::Read, term::Write, term::NatLit, term::Add>
      v;
  Span span;
};

template <class T>
const T* Term::as() const {
  return std::get_if<T>(&node_->v);
}

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace csc
