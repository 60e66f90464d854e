#include "csc/print.hpp"

namespace csc {

namespace {

std::string degree_clause(const SeparationDegree& d) {
  if (d.empty()) return "";
  return " sep " + d.to_string();
}

bool needs_parens_before_caret(const ShapeType& s) {
  return s.as<shape::Fun>() != nullptr || s.as<shape::TFun>() != nullptr;
}

bool is_binder_term(const Term& t) { return t.as<term::Let>() != nullptr || t.as<term::DVar>() != nullptr; }

std::string print_bound(const Term& t) {
  bool wrap = is_binder_term(t);
  if (const auto* l = t.as<term::Lam>()) wrap = is_binder_term(l->body);
  if (const auto* l = t.as<term::TLam>()) wrap = is_binder_term(l->body);
  return wrap ? "(" + print_term(t) + ")" : print_term(t);
}

}  // namespace

std::string print_shape(const ShapeType& s) {
  return std::visit(overloaded{
                        [](const shape::TVar& v) { return v.name; },
                        [](const shape::Top&) { return std::string("Top"); },
                        [](const shape::Nat&) { return std::string("Nat"); },
                        [](const shape::Fun& f) {
                          return "forall(" + f.param + degree_clause(f.degree) + ": " + print_type(f.param_type) +
                                 ") " + print_type(f.result);
                        },
                        [](const shape::TFun& f) {
                          return "forall[" + f.tparam + " <: " + print_shape(f.bound) + "] " + print_type(f.body);
                        },
                        [](const shape::Box& b) { return "Box[" + print_type(b.inner) + "]"; },
                        [](const shape::Ref& r) { return "Ref[" + print_shape(r.inner) + "]"; },
                        [](const shape::Rdr& r) { return "Rdr[" + print_shape(r.inner) + "]"; },
                    },
                    s.node().v);
}

std::string print_type(const Type& t) {
  if (t.captures.empty()) return print_shape(t.shape);
  std::string s = print_shape(t.shape);
  if (needs_parens_before_caret(t.shape)) s = "(" + s + ")";
  return s + "^" + t.captures.to_string();
}

std::string print_term(const Term& t) {
  return std::visit(
      overloaded{
          [](const term::Var& v) { return v.name; },
          [](const term::Lam& l) {
            return "fn(" + l.param + degree_clause(l.degree) + ": " + print_type(l.param_type) + ") => " +
                   print_term(l.body);
          },
          [](const term::TLam& l) {
            return "tfn[" + l.tparam + " <: " + print_shape(l.bound) + "] => " + print_term(l.body);
          },
          [](const term::BoxVal& b) { return "box " + b.var; },
          [](const term::ReaderVal& r) { return "reader " + r.var; },
          [](const term::App& a) { return a.fn + " " + a.arg; },
          [](const term::TApp& a) { return a.fn + "[" + print_shape(a.arg) + "]"; },
          [](const term::Let& l) {
            return std::string(l.mode == LetMode::Par ? "letpar " : "let ") + l.name + " = " + print_bound(l.bound) +
                   " in " + print_term(l.body);
          },
          [](const term::Unbox& u) { return "unbox " + u.captures.to_string() + " " + u.var; },
          [](const term::DVar& d) {
            return "var " + d.name + degree_clause(d.degree) + " := " + d.init + " in " + print_term(d.body);
          },
          [](const term::Read& r) { return "read " + r.var; },
          [](const term::Write& w) { return w.target + " := " + w.value; },
          [](const term::NatLit& n) { return std::to_string(n.value); },
          [](const term::Add& a) { return a.lhs + " + " + a.rhs; },
      },
      t.node().v);
}

std::string elide(const std::string& text, std::size_t width) {
  if (width == 0 || text.size() <= width) return text;
  if (width <= 3) return text.substr(0, width);
  return text.substr(0, width - 3) + "...";
}

}  // namespace csc
