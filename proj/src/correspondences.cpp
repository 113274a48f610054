#include "mwk/correspondences.hpp"

#include <algorithm>

#include "mwk/factor.hpp"

namespace mwk {

namespace {

GW gw_embed(const Field& E, const Field& L, const GW& g)
{
    GW out{g.rank, {}};
    for (auto& x : g.form) out.form.push_back(E.embed_from(L, x));
    return out;
}

Form tidy(const Field& F, const Form& f)
{
    try {
        return witt_cancel(F, f);
    } catch (const Error&) {
        return f;
    }
}

bool gw_zero(const Field& F, const GW& g)
{
    if (g.rank != 0) return false;
    Form f = tidy(F, g.form);
    if (f.empty()) return true;
    try {
        return witt_zero(F, f) == Tri::Yes;
    } catch (const Error&) {
        return false;
    }
}

/* c<b>(<y_1>-1)...(<y_k>-1) in GW. */
GW term_gw(const Field& F, const mpz_class& c, const Elem& b, const std::vector<Elem>& tail)
{
    GW g;
    g.rank = tail.empty() ? c : mpz_class(0);
    g.form = witt_multiple(F, witt_scale(F, pfister(F, tail), b), c);
    return g;
}

MWExpr gw_expr(const FieldPtr& F, const GW& g)
{
    MWExpr r = mw_from_gw(F, g.form);
    mpz_class extra = g.rank - static_cast<long>(g.form.size());
    return mw_add(r, mw_scale(mw_hyperbolic(F), extra / 2));
}

bool same_coords(const Field& E, const std::vector<Elem>& a, const std::vector<Elem>& b)
{
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!E.eq(a[i], b[i])) return false;
    return true;
}

/* Variables of E above L, with their minimal polynomials. */
std::string tower_suffix(const Field& E, const Field& L)
{
    if (E.same(L)) return "";
    return tower_suffix(*E.base(), L) + "[" + E.var() + "]/(" + poly::str(*E.base(), E.minpoly(), E.var()) + ")";
}

/* Points of the cycle of an MWExpr of degree q over R: one point per term,
 * coordinates the first q entries. */
std::vector<CyclePoint> points_of(const MWExpr& e, int q, bool drop_ones)
{
    const Field& R = *e.F;
    std::vector<CyclePoint> out;
    for (auto& t : e.terms) {
        std::vector<Elem> coords(t.entries.begin(), t.entries.begin() + q);
        if (drop_ones && std::any_of(coords.begin(), coords.end(), [&](const Elem& x) { return R.is_one(x); }))
            continue;
        std::vector<Elem> tail(t.entries.begin() + q, t.entries.end());
        out.push_back(CyclePoint{e.F, coords, term_gw(R, t.coef, t.twist, tail)});
    }
    return out;
}

Correspondence map_linear(const Correspondence& c, const CyclePoint& p)
{
    // E = E'[y]/(y - r)
    const FieldPtr& B = p.E->base();
    Elem r = B->neg(p.E->minpoly()[0]);
    auto down = [&](const Elem& x) { return poly::eval(*B, x.num, r); };
    CyclePoint out{B, {}, GW{p.coef.rank, {}}};
    for (auto& x : p.coords) out.coords.push_back(down(x));
    for (auto& x : p.coef.form) out.coef.form.push_back(down(x));
    return Correspondence{c.L, c.q, {out}};
}

Poly lift_u(const Field& L, const Elem& c) { return poly::constant(L, c); }

}  // namespace

int point_degree(const Correspondence& c, const CyclePoint& p) { return p.E->degree_over(*c.L); }

int max_degree(const Correspondence& c)
{
    int d = 0;
    for (auto& p : c.points) d = std::max(d, point_degree(c, p));
    return d;
}

Correspondence cycle_simplify(const Correspondence& c)
{
    Correspondence out{c.L, c.q, {}};
    for (auto& p : c.points) {
        if (!p.E->has_subfield(*c.L))
            throw Error(ErrorCode::FieldMismatch, p.E->descriptor() + " is not a tower over " + c.L->descriptor());
        if (static_cast<int>(p.coords.size()) != c.q)
            throw Error(ErrorCode::InvalidArgument, "point with " + std::to_string(p.coords.size()) +
                                                        " coordinates in a cycle to Gm^" + std::to_string(c.q));
        for (auto& x : p.coords)
            if (p.E->is_zero(x)) throw Error(ErrorCode::InvalidArgument, "zero coordinate");
        auto it = std::find_if(out.points.begin(), out.points.end(), [&](const CyclePoint& o) {
            return same_field(o.E, p.E) && same_coords(*p.E, o.coords, p.coords);
        });
        if (it == out.points.end())
            out.points.push_back(p);
        else
            it->coef = gw_add(it->coef, p.coef);
    }
    std::vector<CyclePoint> kept;
    for (auto& p : out.points) {
        p.coef.form = tidy(*p.E, p.coef.form);
        if (!gw_zero(*p.E, p.coef)) kept.push_back(p);
    }
    out.points = kept;
    return out;
}

Correspondence cycle_add(const Correspondence& a, const Correspondence& b)
{
    require_same(a.L, b.L, "cycle sum");
    if (a.q != b.q) throw Error(ErrorCode::NonHomogeneous, "cycles to different targets");
    Correspondence c = a;
    c.points.insert(c.points.end(), b.points.begin(), b.points.end());
    return cycle_simplify(c);
}

Correspondence cycle_neg(const Correspondence& a) { return cycle_scale(a, -1); }

Correspondence cycle_scale(const Correspondence& a, const mpz_class& n)
{
    Correspondence c = a;
    for (auto& p : c.points) {
        p.coef.rank *= n;
        p.coef.form = witt_multiple(*p.E, p.coef.form, n);
    }
    return cycle_simplify(c);
}

Correspondence cycle_act(const GW& beta, const Correspondence& a)
{
    Correspondence c = a;
    for (auto& p : c.points) p.coef = gw_mul(*p.E, gw_embed(*p.E, *a.L, beta), p.coef);
    return cycle_simplify(c);
}

Correspondence cycle_product(const Correspondence& a, const Correspondence& b)
{
    require_same(a.L, b.L, "cycle product");
    const Field& L = *a.L;
    Correspondence c{a.L, a.q + b.q, {}};
    for (auto& x : a.points)
        for (auto& y : b.points) {
            bool xr = x.E->same(L), yr = y.E->same(L);
            if (!xr && !yr)
                throw Error(ErrorCode::UnsupportedField, "product of two non-rational points");
            const FieldPtr& E = xr ? y.E : x.E;
            CyclePoint p{E, {}, {}};
            for (auto& v : x.coords) p.coords.push_back(E->embed_from(*x.E, v));
            for (auto& v : y.coords) p.coords.push_back(E->embed_from(*y.E, v));
            p.coef = gw_mul(*E, gw_embed(*E, *x.E, x.coef), gw_embed(*E, *y.E, y.coef));
            c.points.push_back(p);
        }
    return cycle_simplify(c);
}

Tri cycle_identical(const Correspondence& a0, const Correspondence& b0)
{
    if (!same_field(a0.L, b0.L) || a0.q != b0.q) return Tri::No;
    Correspondence a = cycle_simplify(a0), b = cycle_simplify(b0);
    if (a.points.size() != b.points.size()) return Tri::No;
    Tri all = Tri::Yes;
    for (auto& p : a.points) {
        auto it = std::find_if(b.points.begin(), b.points.end(), [&](const CyclePoint& o) {
            return same_field(o.E, p.E) && same_coords(*p.E, o.coords, p.coords);
        });
        if (it == b.points.end()) return Tri::No;
        all = tri_and(all, gw_equal(*p.E, p.coef, it->coef));
        if (all == Tri::No) return all;
    }
    return all;
}

std::string point_str(const Correspondence& c, const CyclePoint& p)
{
    std::string s = "point(" + tower_suffix(*p.E, *c.L) + "; ";
    for (size_t i = 0; i < p.coords.size(); ++i) s += (i ? ", " : "") + p.E->str(p.coords[i]);
    return s + "; " + gw_str(*p.E, p.coef) + ")";
}

std::string cycle_str(const Correspondence& c)
{
    std::string s = "cycle{";
    for (size_t i = 0; i < c.points.size(); ++i) s += (i ? " + " : " ") + point_str(c, c.points[i]);
    if (!c.points.empty()) s += " ";
    return s + "} : " + c.L->descriptor() + " -> Gm^" + std::to_string(c.q);
}

Correspondence phi(const MWExpr& e0)
{
    MWExpr e = mw_simplify(e0);
    if (e.degree < 0)
        throw Error(ErrorCode::NegativeDegreeUnsupported, "negative degrees are Witt classes, not cycles to Gm^q");
    Correspondence c{e.F, e.degree, points_of(e, e.degree, true)};
    return cycle_simplify(c);
}

Correspondence phi(const MWClass& a)
{
    if (a.degree < 0)
        throw Error(ErrorCode::NegativeDegreeUnsupported, "negative degrees are Witt classes, not cycles to Gm^q");
    if (a.rep) return phi(*a.rep);
    if (a.degree == 0) {
        GW g{a.rank, a.witt};
        return cycle_simplify(Correspondence{a.F, 0, {CyclePoint{a.F, {}, g}}});
    }
    throw Error(ErrorCode::InvalidArgument, "phi needs a symbol representative");
}

MWClass theta(const Correspondence& c, bool with_rep)
{
    MWClass sum = mw_normalize(mw_zero(c.L, c.q));
    for (auto& p : c.points) {
        MWExpr x = mw_mul(gw_expr(p.E, p.coef), mw_symbol(p.E, p.coords));
        MWClass a = mw_normalize(x);
        if (!p.E->same(*c.L)) a = transfer_cohomological(p.E, c.L, a, with_rep);
        sum = mw_class_add(sum, a);
    }
    return sum;
}

Correspondence transfer_correspondence(const FieldPtr& E, const FieldPtr& L, const Correspondence& c)
{
    require_same(E, c.L, "transfer of a cycle");
    if (!E->has_subfield(*L))
        throw Error(ErrorCode::FieldMismatch, L->descriptor() + " is not below " + E->descriptor());
    Correspondence out{L, c.q, c.points};
    return cycle_simplify(out);
}

Correspondence family_evaluate(const ResiduePresentation& fam, const Elem& u)
{
    const FieldPtr& L = fam.L;
    const Field& B = *L;
    if (fam.F.size() < 2) throw Error(ErrorCode::InvalidArgument, "family must have positive degree in t");
    Poly top = fam.F.back(), c0 = fam.F.front();
    poly::trim(B, top);
    poly::trim(B, c0);
    if (poly::deg(top) != 0 || !B.is_one(top[0])) throw Error(ErrorCode::InvalidArgument, "family is not monic in t");
    if (poly::deg(c0) != 0) throw Error(ErrorCode::InvalidArgument, "constant term of the family is not a unit");
    auto vars = B.variables();
    if (std::find(vars.begin(), vars.end(), fam.var) != vars.end() || fam.var.empty())
        throw Error(ErrorCode::InvalidArgument, "family variable " + fam.var + " clashes with the base");
    Poly G;
    for (auto& k : fam.F) G.push_back(poly::eval(B, k, u));
    poly::trim(B, G);
    if (B.is_zero(G[0])) throw Error(ErrorCode::DegenerateSpecialization, "F(u,0) vanishes");
    if (poly::is_zero(fam.w)) throw Error(ErrorCode::InvalidArgument, "zero unit in the family");
    for (auto& g : fam.coords)
        if (poly::is_zero(g)) throw Error(ErrorCode::InvalidArgument, "zero coordinate function");

    FieldPtr K = Field::function_field(L, fam.var);
    int q = static_cast<int>(fam.coords.size());
    MWTerm t{1, K->from_poly(fam.w), 0, {K->from_poly(G)}};
    for (auto& g : fam.coords) t.entries.push_back(K->from_poly(g));
    MWExpr beta{K, q + 1, {t}};

    std::vector<Poly> places;
    auto note = [&](const Poly& g) {
        if (poly::deg(g) < 1) return;
        for (auto& [p, m] : factor(B, g).factors)
            if (std::none_of(places.begin(), places.end(), [&](const Poly& h) { return poly::eq(B, p, h); }))
                places.push_back(p);
    };
    note(G);
    note(fam.w);
    for (auto& g : fam.coords) note(g);
    std::sort(places.begin(), places.end(), [&](const Poly& x, const Poly& y) {
        if (poly::deg(x) != poly::deg(y)) return poly::deg(x) < poly::deg(y);
        return poly::cmp(B, x, y) < 0;
    });

    Correspondence out{L, q, {}};
    Poly tp = poly::x(B);
    for (auto& p : places) {
        if (poly::eq(B, p, tp)) continue;  // not on G_m
        PointValuation v = PointValuation::at_poly(K, p);
        const FieldPtr& R = v.residue;
        Elem dq = reduce_mod(*R, B, poly::deriv(B, p), p);
        MWExpr twist = mw_bracket(R, R->inv(dq));
        // unit coordinates factor out on the right: keep them even when 1
        std::vector<Elem> units;
        for (int j = 1; j <= q; ++j) {
            Valued val = valuation(v, beta.terms[0].entries[j]);
            if (val.order != 0) break;
            units.push_back(val.unit);
        }
        if (static_cast<int>(units.size()) == q) {
            MWExpr head{K, 1, {MWTerm{1, beta.terms[0].twist, 0, {beta.terms[0].entries[0]}}}};
            MWExpr r = mw_simplify(mw_mul(twist, residue_expr(v, head)));
            GW psi{0, {}};
            for (auto& t : r.terms) psi = gw_add(psi, term_gw(*R, t.coef, t.twist, t.entries));
            out.points.push_back(CyclePoint{R, units, psi});
            continue;
        }
        MWExpr r = mw_simplify(mw_mul(twist, residue_expr(v, beta)));
        auto pts = points_of(r, q, false);
        out.points.insert(out.points.end(), pts.begin(), pts.end());
    }
    return cycle_simplify(out);
}

std::string family_str(const ResiduePresentation& fam)
{
    const Field& B = *fam.L;
    std::string s = "F(u," + fam.var + ") = ";
    bool first = true;
    for (size_t k = fam.F.size(); k-- > 0;) {
        if (poly::is_zero(fam.F[k])) continue;
        s += (first ? "" : " + ") + std::string("(") + poly::str(B, fam.F[k], "u") + ")";
        if (k) s += "*" + fam.var + (k > 1 ? "^" + std::to_string(k) : "");
        first = false;
    }
    s += "; w = " + poly::str(B, fam.w, fam.var) + "; coords = (";
    for (size_t j = 0; j < fam.coords.size(); ++j) s += (j ? ", " : "") + poly::str(B, fam.coords[j], fam.var);
    return s + ")";
}

std::pair<Correspondence, ReductionTrace> reduce_degree(const Correspondence& c0)
{
    Correspondence cur = cycle_simplify(c0);
    ReductionTrace tr;
    const FieldPtr& L = cur.L;
    int d = 0;
    for (auto& p : cur.points)
        if (!p.E->same(*L)) d = std::max(d, point_degree(cur, p));
    if (d == 0) return {cur, tr};

    std::vector<CyclePoint> todo;
    for (auto& p : cur.points)
        if (!p.E->same(*L) && point_degree(cur, p) == d) todo.push_back(p);

    for (auto& P : todo) {
        const FieldPtr& E = P.E;
        const FieldPtr& B = E->base();
        const Field& Bf = *B;
        const Poly& p = E->minpoly();
        int dt = poly::deg(p);
        std::string pname = point_str(cur, P);
        if (dt == 1) {
            ReductionMove mv;
            mv.kind = "linear";
            mv.point = pname;
            mv.over = B->descriptor();
            mv.ev0 = Correspondence{L, cur.q, {P}};
            mv.ev1 = transfer_correspondence(B, L, map_linear(Correspondence{B, cur.q, {}}, P));
            mv.before = cur;
            cur = cycle_add(cur, cycle_add(mv.ev1, cycle_neg(mv.ev0)));
            mv.after = cur;
            tr.moves.push_back(mv);
            continue;
        }

        // F(u,t) = (1-u)p + u f with f = (t-1)^(d-1) (t - (-1)^d p(0))
        Elem lam = p[0];
        Poly f = poly::pow(Bf, Poly{Bf.from_int(-1), Bf.one()}, dt - 1);
        Elem root = dt % 2 ? Bf.neg(lam) : lam;
        f = poly::mul(Bf, f, Poly{Bf.neg(root), Bf.one()});
        std::vector<Poly> F;
        for (int k = 0; k <= dt; ++k) {
            Elem pk = k < static_cast<int>(p.size()) ? p[k] : Bf.zero();
            Elem fk = k < static_cast<int>(f.size()) ? f[k] : Bf.zero();
            Poly cu{pk, Bf.sub(fk, pk)};
            poly::trim(Bf, cu);
            F.push_back(cu);
        }
        std::vector<Poly> g;
        for (auto& a : P.coords) g.push_back(lift_poly(*E, Bf, a, p));
        Poly dp = poly::deriv(Bf, p);

        // psi = sum <c_k> + m h
        std::vector<std::pair<mpz_class, Elem>> parts;
        for (auto& x : P.coef.form) parts.push_back({1, x});
        mpz_class m = (P.coef.rank - static_cast<long>(P.coef.form.size())) / 2;
        if (m != 0) {
            parts.push_back({m, E->one()});
            parts.push_back({m, E->from_int(-1)});
        }
        for (auto& [mult, cval] : parts) {
            ReductionMove mv;
            mv.kind = "family";
            mv.point = pname;
            mv.over = B->descriptor();
            mv.family = ResiduePresentation{B, E->var(), F, poly::rem(Bf, poly::mul(Bf, dp, lift_poly(*E, Bf, cval, p)), p), g};
            mv.multiplicity = mult;
            mv.ev0 = transfer_correspondence(B, L, family_evaluate(mv.family, Bf.zero()));
            mv.ev1 = transfer_correspondence(B, L, family_evaluate(mv.family, Bf.one()));
            mv.before = cur;
            cur = cycle_add(cur, cycle_scale(cycle_add(mv.ev1, cycle_neg(mv.ev0)), mult));
            mv.after = cur;
            tr.moves.push_back(mv);
        }
    }
    for (auto& p : cur.points)
        if (!p.E->same(*L) && point_degree(cur, p) >= d)
            throw Error(ErrorCode::UnsupportedField,
                        "coefficient at " + point_str(cur, p) + " did not cancel; Witt equality undecided there");
    return {cur, tr};
}

bool replay(const ReductionTrace& tr, const Correspondence& input, const Correspondence& output)
{
    Correspondence cur = cycle_simplify(input);
    for (auto& mv : tr.moves) {
        if (cycle_identical(cur, mv.before) != Tri::Yes) return false;
        if (mv.kind == "family") {
            const FieldPtr& B = mv.family.L;
            Correspondence e0 = transfer_correspondence(B, cur.L, family_evaluate(mv.family, B->zero()));
            Correspondence e1 = transfer_correspondence(B, cur.L, family_evaluate(mv.family, B->one()));
            if (cycle_identical(e0, mv.ev0) != Tri::Yes || cycle_identical(e1, mv.ev1) != Tri::Yes) return false;
        }
        cur = cycle_add(cur, cycle_scale(cycle_add(mv.ev1, cycle_neg(mv.ev0)), mv.multiplicity));
        if (cycle_identical(cur, mv.after) != Tri::Yes) return false;
    }
    return cycle_identical(cur, output) == Tri::Yes;
}

MWClass normalize_to_kmw(const Correspondence& c0, ReductionTrace* trace)
{
    Correspondence c = cycle_simplify(c0);
    const FieldPtr& L = c.L;
    // every pass strictly lowers the top degree, or removes a linear step
    int guard = 0;
    for (auto& p : c.points) guard += p.E->height() + point_degree(c, p);
    for (int pass = 0;; ++pass) {
        bool rational = std::all_of(c.points.begin(), c.points.end(), [&](const CyclePoint& p) { return p.E->same(*L); });
        if (rational) break;
        if (pass > guard) throw Error(ErrorCode::DegreeCapExceeded, "degree reduction did not terminate");
        auto [next, tr] = reduce_degree(c);
        if (trace) trace->moves.insert(trace->moves.end(), tr.moves.begin(), tr.moves.end());
        c = next;
    }
    MWExpr sum = mw_zero(L, c.q);
    for (auto& p : c.points) sum = mw_add(sum, mw_mul(gw_expr(L, p.coef), mw_symbol(L, p.coords)));
    return mw_normalize(sum);
}

ResiduePresentation two_point_family(const FieldPtr& L, const Elem& a, const Elem& b)
{
    const Field& B = *L;
    Elem ab = B.mul(a, b);
    if (B.is_zero(ab)) throw Error(ErrorCode::InvalidArgument, "family needs nonzero a and b");
    Elem s = B.add(B.one(), ab);
    ResiduePresentation fam;
    fam.L = L;
    fam.var = fresh_var(B, "t");
    Poly lin{B.neg(s), B.sub(s, B.add(a, b))};
    poly::trim(B, lin);
    fam.F = {lift_u(B, ab), lin, lift_u(B, B.one())};
    fam.w = {B.one()};
    fam.coords = {poly::x(B)};
    return fam;
}

}  // namespace mwk
