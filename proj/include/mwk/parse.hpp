#pragma once

#include <string>

#include "mwk/field.hpp"

namespace mwk {

/* Field syntax: Q | F<p> | Fp | <field>[x]/(poly) | <field>(t) */
FieldPtr parse_field(const std::string& text);

/* Rational expression in integer literals and the tower variables. */
Elem parse_elem(const Field& F, const std::string& text);

/* Polynomial in `var` over F; divisions only by nonzero constants. */
Poly parse_poly(const Field& F, const std::string& text, const std::string& var);

/* Scanning forms used by larger grammars: parse starting at `pos`, stop at
 * the first token that cannot continue the expression (`,` `]` `>` `;` ...)
 * and leave `pos` there. */
Elem scan_elem(const Field& F, const std::string& text, size_t& pos);
Poly scan_poly(const Field& F, const std::string& text, size_t& pos, const std::string& var);

[[noreturn]] void syntax_error(const std::string& text, size_t pos, const std::string& expected);
void skip_space(const std::string& text, size_t& pos);

}  // namespace mwk
