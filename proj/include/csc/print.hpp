// Concrete-syntax rendering of types and terms. The output is accepted by
// the parser (see surface.hpp) and reparses to the same AST.
#pragma once

#include <string>

#include "csc/ast.hpp"

namespace csc {

std::string print_shape(const ShapeType& s);
std::string print_type(const Type& t);
std::string print_term(const Term& t);

// Truncates to `width` columns with a trailing ellipsis. width == 0 keeps all.
std::string elide(const std::string& text, std::size_t width);

}  // namespace csc
