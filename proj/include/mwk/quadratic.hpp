#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mwk/tower.hpp"

namespace mwk {

/* Diagonal entries <a_1,...,a_n>. As a Witt class, a virtual form
 * c<a> with c < 0 is stored as |c| copies of <-a>. */
using Form = std::vector<Elem>;

struct InvariantRecord {
    long rank = 0;
    Elem det;              // square-class representative
    bool det_canonical = true;
    std::vector<long> signatures;                 // one per real place
    std::vector<std::pair<mpz_class, int>> hasse;  // (prime, +-1) at 2 and the support
    std::string str(const Field& F) const;
};

/* Grothendieck-Witt element: rank plus Witt class. */
struct GW {
    mpz_class rank;
    Form form;
};

struct WittDecomposition {
    long index;
    Form anisotropic;
};

// Hilbert symbol over Q; p == 0 is the real place.
int hilbert_symbol(const mpq_class& a, const mpq_class& b, const mpz_class& p);
int hasse_invariant(const Form& f, const mpz_class& p);  // Q only
std::vector<mpz_class> relevant_primes(const Form& f);   // 2 and the support, Q only

InvariantRecord invariants(const Field& F, const Form& f);

Form witt_neg(const Field& F, const Form& f);
Form witt_add(const Form& a, const Form& b);
Form witt_mul(const Field& F, const Form& a, const Form& b);
Form witt_scale(const Field& F, const Form& f, const Elem& c);  // <c> * f
Form witt_multiple(const Field& F, const Form& f, const mpz_class& c);
/* Canonical square classes, then syntactic cancellation of <a> + <-a>. */
Form witt_cancel(const Field& F, const Form& f);

Tri witt_zero(const Field& F, const Form& f);
Tri witt_equal(const Field& F, const Form& a, const Form& b);

GW gw_of(const Form& f);
GW gw_add(const GW& a, const GW& b);
GW gw_neg(const Field& F, const GW& a);
GW gw_mul(const Field& F, const GW& a, const GW& b);
Tri gw_equal(const Field& F, const GW& a, const GW& b);
std::string gw_str(const Field& F, const GW& g);  // canonical where decidable

WittDecomposition witt_decompose(const Field& F, const Form& f);

Tri in_fundamental_power(const Field& F, const Form& f, int n);

/* <<a_1,...,a_n>> = prod(<a_i> - 1). */
Form pfister(const Field& F, const std::vector<Elem>& a);

/* Symmetric elimination of a Gram matrix; throws on degenerate input. */
Form diagonalize(const Field& L, std::vector<std::vector<Elem>> G);

Form scharlau_transfer(const Functional& f, const Form& q);
GW scharlau_transfer(const Functional& f, const GW& q);

/* Real embeddings of Q or a real quadratic field, as signs of elements. */
int real_places(const Field& F);
int real_sign(const Field& F, const Elem& a, int place);

std::string form_str(const Field& F, const Form& f);

/* A 1-dimensional vector space tag with a chosen generator; generators are
 * compared up to squares of units. */
struct Orientation {
    std::string line;
    Elem generator;
    std::string str(const Field& F) const;
};

Orientation canonical_orientation(const FieldPtr& E, const FieldPtr& L);

struct TwistedGW {
    GW value;
    Orientation twist;
};

}  // namespace mwk
