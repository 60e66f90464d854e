// Capture-set algebra: cv, subcapturing and the reader check.
#pragma once

#include <stdexcept>

#include "csc/ast.hpp"
#include "csc/context.hpp"

namespace csc {

class UnboundAtom : public std::runtime_error {
 public:
  explicit UnboundAtom(Name name) : std::runtime_error("unbound capture atom '" + name + "'"), name_(std::move(name)) {}
  const Name& name() const { return name_; }

 private:
  Name name_;
};

// Raised when a recursion guard fires; unreachable on well-formed contexts.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

CaptureSet cv(const Term& t);

// Follows type-variable bounds to a non-variable shape. Unbound variables
// stop the walk and are returned as-is.
ShapeType promote(const TypingContext& ctx, const ShapeType& s);

bool is_reader_shape(const TypingContext& ctx, const ShapeType& s);
// Throws UnboundAtom if x is not a term binding.
bool is_reader(const TypingContext& ctx, const Name& x);

bool subcapture(const TypingContext& ctx, const CaptureSet& lower, const CaptureSet& upper);
bool subcapture_atom(const TypingContext& ctx, const CaptureAtom& a, const CaptureSet& upper);
// {a} <: {rdr}, without the generic set scans.
bool below_rdr(const TypingContext& ctx, const CaptureAtom& a);

}  // namespace csc
