// Concrete syntax: lexer and recursive-descent parser producing A-normal,
// alpha-normalized terms.
//
//   t1 || t2        =>  letpar _k = t1 in t2         (right-associative)
//   f (g x) 3       =>  let _1 = g x in let _2 = f _1 in let _3 = 3 in _2 _3
//
// Identifiers starting with '_' or containing '%' are reserved for generated
// names. parse() rejects them unless ParseOptions::allow_reserved is set,
// which is how printed runtime configurations are read back.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "csc/ast.hpp"

namespace csc {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  Span span;

  // "path:line:col: error[code]: message"
  std::string render(const std::string& path) const;
};

// LexError, ParseError, DegreeContainsRoot, ReservedName.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(Diagnostic d);
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

struct ParseOptions {
  bool allow_reserved = false;
  bool normalize = true;
};

Term parse_term(const std::string& src, const ParseOptions& opts = {});
Type parse_type(const std::string& src, const ParseOptions& opts = {});

// Alias for print_term; parse(pretty(t)) == t.
std::string pretty(const Term& t);

// Reads a file; throws std::runtime_error on IO failure.
std::string read_file(const std::string& path);

}  // namespace csc
