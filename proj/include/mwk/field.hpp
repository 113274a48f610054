#pragma once

#include <gmpxx.h>

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "mwk/errors.hpp"

namespace mwk {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/* An element of a presented field.  The interpretation depends on the
 * owning Field:
 *   prime fields      -> q (for F_p an integer in [0,p))
 *   simple extension  -> num holds coefficients over the base, reduced
 *                        modulo the minimal polynomial
 *   rational function -> num/den over the base, coprime, den monic
 * Elements never carry their field; every operation goes through one. */
struct Elem {
    mpq_class q;
    std::vector<Elem> num;
    std::vector<Elem> den;
};

using Poly = std::vector<Elem>;  // coefficients, lowest degree first

class Field : public std::enable_shared_from_this<Field> {
public:
    enum class Kind { Rationals, PrimeFinite, SimpleExtension, RationalFunction };

    static FieldPtr rationals();
    static FieldPtr prime(const mpz_class& p);
    /* Rejects reducible (where decidable) and inseparable minimal polynomials.
     * The polynomial is made monic. */
    static FieldPtr extension(const FieldPtr& base, Poly minpoly, const std::string& var);
    /* Same as extension() but skips the irreducibility test; the caller
     * guarantees it (factor output, residue fields). */
    static FieldPtr extension_trusted(const FieldPtr& base, Poly minpoly, const std::string& var);
    static FieldPtr function_field(const FieldPtr& base, const std::string& var);

    Kind kind() const { return kind_; }
    const FieldPtr& base() const { return base_; }
    const Poly& minpoly() const { return minpoly_; }
    const std::string& var() const { return var_; }
    const mpz_class& characteristic() const { return char_; }
    FieldPtr self() const { return shared_from_this(); }

    /* Degree over base() for simple extensions, 1 for prime fields, 0 for
     * rational function fields. */
    int degree() const;
    bool is_prime_field() const { return kind_ == Kind::Rationals || kind_ == Kind::PrimeFinite; }
    bool is_finite() const { return finite_; }
    /* Cardinality; only meaningful when is_finite(). */
    const mpz_class& size() const { return size_; }
    /* Number of tower steps above the prime field. */
    int height() const;
    /* True if `sub` occurs in the tower below (or equals) this field. */
    bool has_subfield(const Field& sub) const;
    /* Degree over a subfield in the tower (throws NotFinite through a
     * transcendental step). */
    int degree_over(const Field& sub) const;

    Elem zero() const;
    Elem one() const;
    Elem from_int(long v) const;
    Elem from_mpz(const mpz_class& v) const;
    Elem from_rational(const mpq_class& v) const;
    Elem generator() const;
    /* n(x)/d(x) for the generator x; d defaults to 1.  Rational function
     * fields and simple extensions only. */
    Elem from_poly(const Poly& n, const Poly& d = {}) const;
    /* Image of an element of a subfield somewhere below in the tower. */
    Elem embed_from(const Field& sub, const Elem& e) const;
    Elem embed(const Elem& base_elem) const { return embed_from(*base_, base_elem); }

    bool is_zero(const Elem& a) const;
    bool is_one(const Elem& a) const { return eq(a, one()); }
    bool eq(const Elem& a, const Elem& b) const { return cmp(a, b) == 0; }
    int cmp(const Elem& a, const Elem& b) const;

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem inv(const Elem& a) const;
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
    Elem pow(const Elem& a, long e) const;
    Elem pow(const Elem& a, const mpz_class& e) const;

    /* Rational number for Q-elements, integer representative for F_p. */
    const mpq_class& rational(const Elem& a) const { return a.q; }
    /* True if the element lies in the image of the prime field. */
    bool is_prime_constant(const Elem& a) const;

    std::string str(const Elem& a) const;
    std::string descriptor() const;
    /* Structural equality of presentations. */
    bool same(const Field& other) const;

    /* Deterministic enumeration of a finite field (index < size()). */
    Elem element_at(mpz_class index) const;
    Elem random(std::mt19937_64& rng) const;

    /* Variable names of the tower, innermost first. */
    std::vector<std::string> variables() const;

    Field(Kind k, FieldPtr base, Poly minpoly, std::string var, mpz_class ch);

private:
    Kind kind_;
    FieldPtr base_;
    Poly minpoly_;
    std::string var_;
    mpz_class char_;
    bool finite_ = false;
    mpz_class size_ = 0;
};

bool same_field(const FieldPtr& a, const FieldPtr& b);
void require_same(const FieldPtr& a, const FieldPtr& b, const char* where);

/* Integer helpers. */
namespace integer {
bool is_prime(const mpz_class& n);
/* Prime factorization of |n| (n != 0), ascending primes with multiplicity. */
std::vector<std::pair<mpz_class, int>> factor(const mpz_class& n);
mpz_class squarefree_part(const mpz_class& n);  // keeps sign
}  // namespace integer

namespace poly {

void trim(const Field& F, Poly& p);
int deg(const Poly& p);  // -1 for the zero polynomial
bool is_zero(const Poly& p);
const Elem& lc(const Poly& p);
Poly constant(const Field& F, const Elem& c);
Poly monomial(const Field& F, const Elem& c, int k);
Poly x(const Field& F);  // the indeterminate
Poly add(const Field& F, const Poly& a, const Poly& b);
Poly sub(const Field& F, const Poly& a, const Poly& b);
Poly neg(const Field& F, const Poly& a);
Poly mul(const Field& F, const Poly& a, const Poly& b);
Poly scale(const Field& F, const Poly& a, const Elem& c);
void divmod(const Field& F, const Poly& a, const Poly& b, Poly& q, Poly& r);
Poly rem(const Field& F, const Poly& a, const Poly& b);
Poly quo(const Field& F, const Poly& a, const Poly& b);
Poly monic(const Field& F, const Poly& a);
Poly gcd(const Field& F, Poly a, Poly b);  // monic, or zero
/* Returns monic g with s*a + t*b = g. */
Poly xgcd(const Field& F, const Poly& a, const Poly& b, Poly& s, Poly& t);
Poly deriv(const Field& F, const Poly& a);
Elem eval(const Field& F, const Poly& a, const Elem& x);
Poly compose(const Field& F, const Poly& a, const Poly& b);  // a(b(x))
Poly pow(const Field& F, const Poly& a, unsigned e);
Poly powmod(const Field& F, const Poly& a, const mpz_class& e, const Poly& m);
bool eq(const Field& F, const Poly& a, const Poly& b);
int cmp(const Field& F, const Poly& a, const Poly& b);
std::string str(const Field& F, const Poly& a, const std::string& var);
/* Image of a polynomial over a subfield. */
Poly embed(const Field& F, const Field& sub, const Poly& a);

}  // namespace poly

}  // namespace mwk
