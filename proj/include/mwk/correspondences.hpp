#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mwk/milnor_witt.hpp"

namespace mwk {

/* A closed point of G_m^q over L: residue field E (a tower over L, or L
 * itself) with coordinates in E, and a GW(E) coefficient taken relative to
 * the canonical orientation of omega_{E/L}. */
struct CyclePoint {
    FieldPtr E;
    std::vector<Elem> coords;
    GW coef;
};

/* Zero-dimensional correspondence Spec L -> G_m^q; q = 0 is GW data. */
struct Correspondence {
    FieldPtr L;
    int q = 0;
    std::vector<CyclePoint> points;
};

int point_degree(const Correspondence& c, const CyclePoint& p);
int max_degree(const Correspondence& c);

/* Merge equal points and drop zero coefficients. */
Correspondence cycle_simplify(const Correspondence& c);
Correspondence cycle_add(const Correspondence& a, const Correspondence& b);
Correspondence cycle_neg(const Correspondence& a);
Correspondence cycle_scale(const Correspondence& a, const mpz_class& n);
/* Left action of GW(L). */
Correspondence cycle_act(const GW& beta, const Correspondence& a);
/* Exterior product; one factor must be supported on rational points. */
Correspondence cycle_product(const Correspondence& a, const Correspondence& b);
Tri cycle_identical(const Correspondence& a, const Correspondence& b);

std::string point_str(const Correspondence& c, const CyclePoint& p);
std::string cycle_str(const Correspondence& c);

Correspondence phi(const MWExpr& e);
Correspondence phi(const MWClass& a);

/* Sum over points of Tr_{E/L}(psi * [x_1,...,x_q]), cohomological. */
MWClass theta(const Correspondence& c, bool with_rep = false);

/* Points over E viewed over a subfield L of the tower. */
Correspondence transfer_correspondence(const FieldPtr& E, const FieldPtr& L, const Correspondence& c);

/* Family over A^1_L with parameter u:
 *   F(u,t) = sum_k F[k](u) t^k, monic in t with F(u,0) a nonzero constant,
 *   w(t) and the coordinate functions g_j(t) independent of u.
 * The class <w>[F][g_1]...[g_q] of K^MW_{q+1}(L(u)(t)) defines the cycle. */
struct ResiduePresentation {
    FieldPtr L;
    std::string var;
    std::vector<Poly> F;  // coefficients in L[u]
    Poly w;
    std::vector<Poly> coords;
};

/* Residue cycle at u = i over the closed points of G_m, twists collapsed
 * by <q'(x)>. */
Correspondence family_evaluate(const ResiduePresentation& fam, const Elem& i);
std::string family_str(const ResiduePresentation& fam);

struct ReductionMove {
    std::string kind;  // "family" or "linear"
    std::string point;
    std::string over;  // field the family lives over
    ResiduePresentation family;
    mpz_class multiplicity = 1;
    Correspondence ev0, ev1;  // transported to the base
    Correspondence before, after;
};

struct ReductionTrace {
    std::vector<ReductionMove> moves;
};

/* One pass: every point of maximal degree d >= 2 is replaced modulo family
 * boundaries by points of degree < d. */
std::pair<Correspondence, ReductionTrace> reduce_degree(const Correspondence& c);
/* Re-applies the recorded boundaries to the first `before`; true when every
 * step lands exactly on the recorded `after`. */
bool replay(const ReductionTrace& tr, const Correspondence& input, const Correspondence& output);

/* Reduce until every point is rational and read off the symbol sum. */
MWClass normalize_to_kmw(const Correspondence& c, ReductionTrace* trace = nullptr);

/* t^2 - u(a+b)t - (1-u)(1+ab)t + ab with w = 1 and coordinate t: the
 * points a, b at u = 1 and 1, ab at u = 0. */
ResiduePresentation two_point_family(const FieldPtr& L, const Elem& a, const Elem& b);

}  // namespace mwk
