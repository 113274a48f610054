#pragma once

#include <string>
#include <vector>

#include "mwk/quadratic.hpp"

namespace mwk {

struct MSymbol {
    mpz_class coef;
    std::vector<Elem> entries;
};

/* Integer combination of symbols {a_1,...,a_n}, homogeneous of degree n. */
struct MilnorExpr {
    FieldPtr F;
    int degree = 0;
    std::vector<MSymbol> terms;
};

/* Field-class specific record; equal records <=> equal classes when
 * decided == Yes. */
struct MilnorNormal {
    int degree = 0;
    Tri decided = Tri::Unknown;
    std::string record;
};

/* Two entries with b = 1 - a or b = -a: the symbol vanishes in K^M and in
 * K^MW (up to the commutation unit the pair can be made adjacent). */
bool steinberg_degenerate(const Field& F, const std::vector<Elem>& a);

MilnorExpr mk_simplify(const MilnorExpr& e);
MilnorExpr mk_add(const MilnorExpr& a, const MilnorExpr& b);
MilnorExpr mk_neg(const MilnorExpr& a);
MilnorExpr mk_scale(const MilnorExpr& a, const mpz_class& c);
MilnorExpr mk_mul(const MilnorExpr& a, const MilnorExpr& b);

Tri mk_is_zero(const MilnorExpr& e);
Tri mk_equal(const MilnorExpr& a, const MilnorExpr& b);
MilnorNormal mk_normalize(const MilnorExpr& e);

/* Tame residue with the uniformizer of v. */
MilnorExpr mk_residue(const PointValuation& v, const MilnorExpr& e);
MilnorExpr mk_specialize(const PointValuation& v, const MilnorExpr& e);

/* Norm map along a finite tower E/L (see milnor_witt.cpp for the engine). */
MilnorExpr mk_transfer(const FieldPtr& E, const FieldPtr& L, const MilnorExpr& e);

/* s_n: sum of Pfister forms, a representative modulo I^(n+1). */
Form s_n(const MilnorExpr& e);
Tri sn_equal(const Field& F, const Form& a, const Form& b, int n);

std::string mk_str(const MilnorExpr& e);

/* Element of K_1 = F^x represented by a degree-1 expression. */
Elem k1_value(const MilnorExpr& e);

}  // namespace mwk
