#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mwk/field.hpp"

namespace mwk {

struct Factorization {
    Elem unit;
    std::vector<std::pair<Poly, int>> factors;  // monic irreducible, multiplicity
};

/* Largest input degree accepted by factor(), per coefficient field class. */
struct FactorCaps {
    int finite = 24;
    int rationals = 12;
    int other = 6;
};
FactorCaps& factor_caps();

/* Complete factorization over F_q towers, Q, characteristic-zero towers of
 * simple extensions (norm descent), and degree <= 2 over rational function
 * fields. */
Factorization factor(const Field& F, const Poly& p);
Poly expand(const Field& F, const Factorization& f);
Tri is_irreducible(const Field& F, const Poly& p);
std::vector<Elem> roots(const Field& F, const Poly& p);

std::optional<Elem> sqrt(const Field& F, const Elem& a);  // throws UnsupportedField
Tri is_square(const Field& F, const Elem& a);

struct SquareClass {
    Elem rep;
    std::optional<Elem> witness;  // a = rep * witness^2
    bool canonical = true;
};
SquareClass square_class(const Field& F, const Elem& a);

/* p(t) = p0(t^(l^m)), l the characteristic. */
std::pair<Poly, int> separable_decompose(const Field& F, const Poly& p);

/* Square-free decomposition of a nonzero polynomial: monic pieces with
 * multiplicities (product equals p / lc). */
std::vector<std::pair<Poly, int>> squarefree(const Field& F, const Poly& p);

}  // namespace mwk
