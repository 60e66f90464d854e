// Typing contexts and well-formedness of types under them.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "csc/ast.hpp"

namespace csc {

struct TypeBinding {
  Name name;
  ShapeType bound;
};

struct TermBinding {
  Name name;
  SeparationDegree degree;
  Type type;
};

using Binding = std::variant<TypeBinding, TermBinding>;

const Name& binding_name(const Binding& b);

class ContextError : public std::runtime_error {
 public:
  enum class Kind { DuplicateName, NotFound, ReservedName };
  ContextError(Kind kind, Name name);

  Kind kind() const { return kind_; }
  const Name& name() const { return name_; }

 private:
  Kind kind_;
  Name name_;
};

// Ordered bindings `X <: S` and `x :_D T`. Names are pairwise distinct and
// never cap or rdr.
class TypingContext {
 public:
  TypingContext() = default;

  // Throws ContextError{DuplicateName} or {ReservedName}. Does not re-check
  // well-formedness of the binding; see wf_context / wf_type.
  TypingContext extend(Binding binding) const;
  TypingContext extend_term(Name name, SeparationDegree degree, Type type) const;
  TypingContext extend_type(Name name, ShapeType bound) const;

  // Throws ContextError{NotFound}.
  const Binding& lookup(const Name& name) const;
  const TermBinding* find_term(const Name& name) const;
  const TypeBinding* find_type(const Name& name) const;
  bool binds(const Name& name) const;

  // dom(ctx) restricted to term bindings, as a capture set.
  CaptureSet term_domain() const;
  const std::vector<Binding>& bindings() const { return bindings_; }
  std::size_t size() const { return bindings_.size(); }
  TypingContext prefix(std::size_t n) const;

  std::string to_string() const;

 private:
  std::vector<Binding> bindings_;
};

class WfError : public std::runtime_error {
 public:
  enum class Kind { UnboundName, RootInDegree, UnboundTypeVar };
  WfError(Kind kind, Name name, std::string location);

  Kind kind() const { return kind_; }
  const Name& name() const { return name_; }
  const std::string& location() const { return location_; }

 private:
  Kind kind_;
  Name name_;
  std::string location_;
};

// Scoping well-formedness: every free term name is bound as a term in ctx
// (or is a root), every type variable is bound as a type, every degree names
// only bound terms. Throws WfError.
void wf_type(const TypingContext& ctx, const Type& ty);
void wf_shape(const TypingContext& ctx, const ShapeType& shape);
void wf_degree(const TypingContext& ctx, const SeparationDegree& degree);
// Every binding is well-formed under the bindings before it.
void wf_context(const TypingContext& ctx);

}  // namespace csc
