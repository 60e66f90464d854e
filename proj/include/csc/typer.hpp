// Subtyping, separation checking and the typing judgment.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "csc/ast.hpp"
#include "csc/context.hpp"

namespace csc {

enum class TypeErrorCode {
  NotSeparated,
  NotSubtype,
  NotSubcapture,
  EscapingBinder,
  ExpectedFun,
  ExpectedTFun,
  ExpectedBox,
  ExpectedRef,
  ExpectedRdr,
  UnboundName,
  IllFormed,
};

const char* to_string(TypeErrorCode code);

class TypeError : public std::runtime_error {
 public:
  TypeError(TypeErrorCode code, std::string message, Span span, TypingContext ctx);

  TypeErrorCode code() const { return code_; }
  const Span& span() const { return span_; }
  const TypingContext& context() const { return ctx_; }
  // Set for NotSeparated only.
  const std::optional<std::pair<CaptureSet, CaptureSet>>& offending() const { return offending_; }
  TypeError& with_offending(CaptureSet left, CaptureSet right);

 private:
  TypeErrorCode code_;
  Span span_;
  TypingContext ctx_;
  std::optional<std::pair<CaptureSet, CaptureSet>> offending_;
};

bool subtype(const TypingContext& ctx, const Type& t1, const Type& t2);
bool subshape(const TypingContext& ctx, const ShapeType& s1, const ShapeType& s2);

bool separated_atoms(const TypingContext& ctx, const CaptureAtom& a, const CaptureAtom& b);
bool separated_sets(const TypingContext& ctx, const CaptureSet& c1, const CaptureSet& c2);
bool separated_terms(const TypingContext& ctx, const Term& s, const Term& t);

// Synthesizes the type of t. Throws TypeError on the first failed premise.
Type typecheck(const TypingContext& ctx, const Term& t);
// typecheck followed by subtype against `expected`.
Type check_against(const TypingContext& ctx, const Term& t, const Type& expected);

// Widens U so that it no longer mentions x, replacing covariant occurrences
// of x in capture sets by `replacement`. Returns nullopt if x occurs in a
// position where widening is unsound (contravariant, degree, Ref/Rdr).
std::optional<Type> avoid(const Name& x, const CaptureSet& replacement, const Type& u);

}  // namespace csc
