#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mwk/milnor_k.hpp"

namespace mwk {

/* coef * <twist> * eta^eta * [entries...]; degree entries.size() - eta.
 * Twists and eta are central, so a term is a single word in normal order. */
struct MWTerm {
    mpz_class coef;
    Elem twist;
    int eta = 0;
    std::vector<Elem> entries;
};

struct MWExpr {
    FieldPtr F;
    int degree = 0;
    std::vector<MWTerm> terms;
};

/* Constructors. */
MWExpr mw_zero(const FieldPtr& F, int degree);
MWExpr mw_one(const FieldPtr& F);
MWExpr mw_symbol(const FieldPtr& F, const std::vector<Elem>& a);  // [a_1,...,a_n]
MWExpr mw_eta(const FieldPtr& F, int k = 1);
MWExpr mw_bracket(const FieldPtr& F, const Elem& a);             // <a>
MWExpr mw_hyperbolic(const FieldPtr& F);                         // h = 2 + eta[-1]
MWExpr mw_epsilon(const FieldPtr& F);                            // -<-1>
MWExpr mw_from_gw(const FieldPtr& F, const Form& f);

MWExpr mw_add(const MWExpr& a, const MWExpr& b);
MWExpr mw_neg(const MWExpr& a);
MWExpr mw_sub(const MWExpr& a, const MWExpr& b);
MWExpr mw_scale(const MWExpr& a, const mpz_class& c);
MWExpr mw_mul(const MWExpr& a, const MWExpr& b);
/* Merge like terms, drop [1] and zero coefficients, canonical twists. */
MWExpr mw_simplify(const MWExpr& e);
std::string mw_str(const MWExpr& e);

/* Fiber-square normal form. */
struct MWClass {
    FieldPtr F;
    int degree = 0;
    MilnorExpr milnor;  // degree >= 1
    mpz_class rank;     // degree == 0
    Form witt;          // I^n leg for n >= 1, W part of GW for n == 0, W for n < 0
    std::optional<MWExpr> rep;
};

MWClass mw_normalize(const MWExpr& e);
Tri mw_equal(const MWClass& a, const MWClass& b);
Tri mw_equal(const MWExpr& a, const MWExpr& b);
Tri mw_is_zero(const MWClass& a);
/* Sum on both legs; the representative survives when both carry one. */
MWClass mw_class_add(const MWClass& a, const MWClass& b);
/* Fiber condition: s_n(Milnor leg) = I^n leg mod I^(n+1). */
Tri fiber_compatible(const MWClass& a);
/* Representative when present, otherwise one rebuilt from the legs
 * (possible for n <= 0); a leg summary for n >= 1 without one. */
std::string mw_class_str(const MWClass& a);

MilnorExpr bridge_f(const MWExpr& e);
MWExpr bridge_H(const MilnorExpr& m);

struct TwistedMWClass {
    MWClass value;
    Orientation twist;
};

MWExpr residue_expr(const PointValuation& v, const MWExpr& e);
TwistedMWClass residue(const PointValuation& v, const MWExpr& e);
MWExpr specialize_expr(const PointValuation& v, const MWExpr& e);
MWClass specialize(const PointValuation& v, const MWExpr& e);

/* Split-sequence transfer: lift to L(t), subtract the residues at other
 * closed points recursively and take -d_inf.  L is any subfield of E in
 * the tower; steps are composed innermost-out. */
MWExpr transfer_geometric_expr(const FieldPtr& E, const FieldPtr& L, const MWExpr& e);
/* Same with the <p'(x)> twist at every step. */
MWExpr transfer_cohomological_expr(const FieldPtr& E, const FieldPtr& L, const MWExpr& e);

/* One step E/E.base() with every lifted entry shifted by shift * minpoly;
 * the result must not depend on the shift. */
MWExpr transfer_geometric_perturbed(const FieldPtr& E, const MWExpr& e, int shift);

/* Transfers on the pair representation; the representative is carried
 * through the lift engine when with_rep is set. */
MWClass transfer_geometric(const FieldPtr& E, const FieldPtr& L, const MWClass& a, bool with_rep = true);
MWClass transfer_cohomological(const FieldPtr& E, const FieldPtr& L, const MWClass& a, bool with_rep = true);

/* Restriction of scalars along L -> E. */
MWExpr mw_extend(const FieldPtr& E, const MWExpr& e);

/* Closed points of A^1 (or G_m when gm is set) and infinity where the
 * residue of e is nonzero; e lives over a rational function field. */
std::vector<PointValuation> unramified_check(const MWExpr& e, bool gm = false);

}  // namespace mwk
