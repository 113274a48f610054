#pragma once

#include <string>
#include <vector>

#include "mwk/field.hpp"

namespace mwk {

/* A discrete valuation on Q (at a prime) or on a rational function field
 * F(t) (at a monic irreducible polynomial, or at infinity with uniformizer
 * -1/t). */
struct PointValuation {
    enum class Kind { RationalPrime, MonicIrreducible, Infinity };

    FieldPtr field;    // the valued field
    Kind kind;
    mpz_class prime;   // RationalPrime
    Poly poly;         // MonicIrreducible, over field->base()
    FieldPtr residue;  // k(v)
    Elem uniformizer;  // in field

    static PointValuation at_prime(const FieldPtr& Q, const mpz_class& p);
    static PointValuation at_poly(const FieldPtr& Ft, const Poly& q);
    static PointValuation at_infinity(const FieldPtr& Ft);

    std::string str() const;
};

struct Valued {
    long order;
    Elem unit;  // residue class of a * pi^(-order), in v.residue
};

Valued valuation(const PointValuation& v, const Elem& a);

/* Residue field of F[t]/(q): the base itself for linear q. `t` names the
 * generator otherwise. */
FieldPtr residue_field(const FieldPtr& base, const Poly& q, const std::string& t);

/* Image of g(t) in F[t]/(q), with the residue field from residue_field(). */
Elem reduce_mod(const Field& R, const Field& base, const Poly& g, const Poly& q);

/* Dual of reduce_mod: the polynomial of degree < deg q representing e. */
Poly lift_poly(const Field& R, const Field& base, const Elem& e, const Poly& q);

/* A fresh variable name for a polynomial ring over F. */
std::string fresh_var(const Field& F, const std::string& hint = "t");

/* An L-linear functional E -> L, stored by its values on the power-product
 * basis of the tower from L up to E. */
struct Functional {
    FieldPtr E, L;
    std::vector<Elem> values;

    Elem operator()(const Elem& e) const;
};

/* Basis of E over a subfield L: products of generator powers, innermost
 * step varying fastest. */
std::vector<Elem> tower_basis(const Field& E, const Field& L);
std::vector<Elem> tower_coords(const Field& E, const Field& L, const Elem& e);

Functional trace_functional(const FieldPtr& E, const FieldPtr& L);
/* f(x^i) = 0 for i < n-1 and f(x^(n-1)) = 1, composed along the tower. */
Functional scharlau_functional(const FieldPtr& E, const FieldPtr& L);
Elem norm(const Field& E, const Field& L, const Elem& e);
/* Matrix of multiplication by e on tower_basis(E, L). */
std::vector<std::vector<Elem>> mult_matrix(const Field& E, const Field& L, const Elem& e);

/* b with g(y) = f(b*y) for all y. */
Elem functional_change_unit(const Functional& f, const Functional& g);

}  // namespace mwk
