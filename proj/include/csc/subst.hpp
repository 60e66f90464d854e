// Free names, capture-respecting renaming and substitution, binder
// freshening and alpha-normalization.
//
// Substitutions stop at binders that shadow the substituted name. They do
// not rename to avoid capture: after alpha_normalize every binder is
// distinct from every other name in the program, and runtime copies are
// freshened before substitution, so capture cannot arise.
#pragma once

#include <functional>
#include <map>
#include <set>

#include "csc/ast.hpp"

namespace csc {

struct FreeNames {
  std::set<Name> terms;
  std::set<Name> types;
};

FreeNames free_names(const Term& t);
FreeNames free_names(const Type& t);
FreeNames free_names(const ShapeType& s);
// Free term names (captures, degrees, variables) of a term as a capture set.
CaptureSet free_term_names(const Term& t);
bool mentions_term_name(const Type& t, const Name& x);

enum class BinderKind { Term, Type };

// Simultaneous renaming of free term names, substitution of free type
// variables, and optional rewriting of binder names.
class Renamer {
 public:
  using BinderHook = std::function<Name(const Name&, BinderKind)>;

  Renamer() = default;

  Renamer& rename(Name from, Name to);
  Renamer& substitute(Name tvar, ShapeType with);
  Renamer& on_binder(BinderHook hook);

  Term term(const Term& t) const;
  Type type(const Type& t) const;
  ShapeType shape(const ShapeType& s) const;
  CaptureSet captures(const CaptureSet& c) const;
  SeparationDegree degree(const SeparationDegree& d) const;
  Name name(const Name& n) const;

 private:
  Renamer enter(const Name& binder, BinderKind kind, Name* renamed) const;

  std::map<Name, Name> terms_;
  std::map<Name, ShapeType> tvars_;
  BinderHook hook_;
};

Term rename_free(const Term& t, const Name& from, const Name& to);
Type rename_free(const Type& t, const Name& from, const Name& to);
Term subst_tvar(const Term& t, const Name& tvar, const ShapeType& with);
Type subst_tvar(const Type& t, const Name& tvar, const ShapeType& with);

// The part of a generated name before the first '%'.
Name base_name(const Name& n);

// Renames binders so that all binder names are pairwise distinct and
// distinct from the free names of t. A clashing binder `x` becomes `x%N`
// for the smallest N not yet used. Idempotent.
Term alpha_normalize(const Term& t);

// Every binder name occurring in t, in pre-order (duplicates kept).
std::vector<Name> binder_names(const Term& t);

}  // namespace csc
