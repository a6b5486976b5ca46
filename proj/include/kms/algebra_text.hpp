#pragma once

#include <string>
#include <string_view>

#include "kms/algebra.hpp"

namespace kms {

/// Renders `λ · s[e1.e2] s*[f1]`, with `p[v]` for vertex projections and the
/// coefficient omitted when it is 1. Terms appear in canonical (map) order;
/// the zero element renders as `0`. Real coefficients print in shortest
/// round-trip form, complex ones as `(a+bi)`.
[[nodiscard]] std::string render(const WeightedGraph& g, const AlgebraElement& x);
[[nodiscard]] std::string render(const WeightedGraph& g, const Monomial& m);

/// Inverse of render(). Grammar (whitespace-insensitive):
///   expr   := ['-'] term (('+' | '-') term)*
///   term   := [scalar ['·' | '*']] factor*
///   factor := 's[' id ('.' id)* ']' | 's*[' id ('.' id)* ']' | 'p[' id ']'
///   scalar := decimal | '(' decimal [('+'|'-') decimal] 'i' ')' | '(' decimal ')'
/// Juxtaposed factors multiply. Throws InputError with a column on bad input.
[[nodiscard]] AlgebraElement parse_element(const WeightedGraph& g, std::string_view text);

}  // namespace kms
