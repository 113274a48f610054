#include "mwk/milnor_witt.hpp"

#include <algorithm>

#include "mwk/factor.hpp"

namespace mwk {

namespace {

void check_term(const MWExpr& e, const MWTerm& t)
{
    if (static_cast<int>(t.entries.size()) - t.eta != e.degree)
        throw Error(ErrorCode::NonHomogeneous, "term of degree " + std::to_string(t.entries.size() - t.eta) +
                                                   " in an expression of degree " + std::to_string(e.degree));
}

Elem canonical_twist(const Field& F, const Elem& b)
{
    try {
        SquareClass sc = square_class(F, b);
        if (sc.canonical) return sc.rep;
        if (is_square(F, b) == Tri::Yes) return F.one();
    } catch (const Error& err) {
        if (err.code() != ErrorCode::UnsupportedField && err.code() != ErrorCode::DegreeCapExceeded) throw;
    }
    return b;
}

int term_cmp(const Field& F, const MWTerm& a, const MWTerm& b)
{
    if (a.eta != b.eta) return a.eta < b.eta ? -1 : 1;
    if (a.entries.size() != b.entries.size()) return a.entries.size() < b.entries.size() ? -1 : 1;
    if (int c = F.cmp(a.twist, b.twist)) return c;
    for (size_t i = 0; i < a.entries.size(); ++i)
        if (int c = F.cmp(a.entries[i], b.entries[i])) return c;
    return 0;
}

// a + b<-1> in GW of the prime field
struct EpsInt {
    mpz_class a, b;
};

EpsInt eps_mul(const EpsInt& x, const EpsInt& y) { return {x.a * y.a + x.b * y.b, x.a * y.b + x.b * y.a}; }

EpsInt n_eps(long k)
{
    if (k >= 0) return {(k + 1) / 2, k / 2};
    long m = -k;
    return {-(m / 2), -((m + 1) / 2)};
}

Elem to_base(const Field& L, const Elem& e) { return e.num.empty() ? L.zero() : e.num[0]; }

MWExpr map_down(const FieldPtr& E, const MWExpr& a)
{
    const FieldPtr& L = E->base();
    MWExpr out{L, a.degree, {}};
    for (auto& t : a.terms) {
        MWTerm s{t.coef, to_base(*L, t.twist), t.eta, {}};
        for (auto& x : t.entries) s.entries.push_back(to_base(*L, x));
        out.terms.push_back(s);
    }
    return out;
}

Elem derivative_at_generator(const Field& E)
{
    Poly dp = poly::deriv(*E.base(), E.minpoly());
    return E.from_poly(dp);
}

MWExpr tau_step(const FieldPtr& E, const MWExpr& a0, bool cohomological, int perturb);

MWExpr lift_engine(const FieldPtr& E, const MWExpr& a, int perturb)
{
    const FieldPtr& L = E->base();
    const Poly& p = E->minpoly();
    FieldPtr K = Field::function_field(L, fresh_var(*L));
    Elem P = K->from_poly(p);
    auto lift = [&](const Elem& x, bool entry) {
        Poly g = x.num;
        if (entry && perturb) {
            Poly shifted = poly::add(*L, g, poly::scale(*L, p, L->from_int(perturb)));
            if (!poly::is_zero(shifted)) g = shifted;
        }
        return K->from_poly(g);
    };
    MWExpr beta{K, a.degree + 1, {}};
    std::vector<Poly> places;
    auto note = [&](const Elem& x) {
        if (poly::deg(x.num) < 1) return;
        for (auto& [q, m] : factor(*L, x.num).factors)
            if (!poly::eq(*L, q, p) &&
                std::none_of(places.begin(), places.end(), [&](const Poly& h) { return poly::eq(*L, q, h); }))
                places.push_back(q);
    };
    for (auto& t : a.terms) {
        MWTerm s{t.coef, lift(t.twist, false), t.eta, {P}};
        note(s.twist);
        for (auto& x : t.entries) {
            s.entries.push_back(lift(x, true));
            note(s.entries.back());
        }
        beta.terms.push_back(s);
    }
    std::sort(places.begin(), places.end(), [&](const Poly& x, const Poly& y) { return poly::cmp(*L, x, y) < 0; });
    MWExpr result = mw_neg(residue_expr(PointValuation::at_infinity(K), beta));
    for (auto& q : places) {
        PointValuation v = PointValuation::at_poly(K, q);
        MWExpr r = mw_simplify(residue_expr(v, beta));
        if (r.terms.empty()) continue;
        MWExpr down = poly::deg(q) == 1 ? r : tau_step(v.residue, r, false, 0);
        result = mw_sub(result, down);
    }
    return mw_simplify(result);
}

MWExpr tau_step(const FieldPtr& E, const MWExpr& a0, bool cohomological, int perturb)
{
    if (E->kind() != Field::Kind::SimpleExtension)
        throw Error(ErrorCode::NotFinite, "transfer from " + E->descriptor());
    MWExpr a = a0;
    if (cohomological) a = mw_mul(mw_bracket(E, derivative_at_generator(*E)), a);
    a = mw_simplify(a);
    if (E->degree() == 1) return map_down(E, a);
    return lift_engine(E, a, perturb);
}

std::vector<FieldPtr> tower_steps(const FieldPtr& E, const FieldPtr& L)
{
    std::vector<FieldPtr> steps;
    FieldPtr cur = E;
    while (!cur->same(*L)) {
        if (cur->kind() == Field::Kind::RationalFunction)
            throw Error(ErrorCode::NotFinite, E->descriptor() + " is not finite over " + L->descriptor());
        if (!cur->base()) throw Error(ErrorCode::FieldMismatch, L->descriptor() + " is not below " + E->descriptor());
        steps.push_back(cur);
        cur = cur->base();
    }
    return steps;
}

MWExpr transfer_expr(const FieldPtr& E, const FieldPtr& L, const MWExpr& e, bool cohomological)
{
    require_same(E, e.F, "transfer");
    MWExpr cur = e;
    for (auto& step : tower_steps(E, L)) cur = tau_step(step, cur, cohomological, 0);
    cur.F = L;
    return cur;
}

}  // namespace

MWExpr mw_zero(const FieldPtr& F, int degree) { return MWExpr{F, degree, {}}; }

MWExpr mw_one(const FieldPtr& F) { return MWExpr{F, 0, {MWTerm{1, F->one(), 0, {}}}}; }

MWExpr mw_symbol(const FieldPtr& F, const std::vector<Elem>& a)
{
    return MWExpr{F, static_cast<int>(a.size()), {MWTerm{1, F->one(), 0, a}}};
}

MWExpr mw_eta(const FieldPtr& F, int k) { return MWExpr{F, -k, {MWTerm{1, F->one(), k, {}}}}; }

MWExpr mw_bracket(const FieldPtr& F, const Elem& a)
{
    if (F->is_zero(a)) throw Error(ErrorCode::InvalidArgument, "<0> is not a form");
    return MWExpr{F, 0, {MWTerm{1, a, 0, {}}}};
}

MWExpr mw_hyperbolic(const FieldPtr& F)
{
    return MWExpr{F, 0, {MWTerm{2, F->one(), 0, {}}, MWTerm{1, F->one(), 1, {F->from_int(-1)}}}};
}

MWExpr mw_epsilon(const FieldPtr& F) { return MWExpr{F, 0, {MWTerm{-1, F->from_int(-1), 0, {}}}}; }

MWExpr mw_from_gw(const FieldPtr& F, const Form& f)
{
    MWExpr out{F, 0, {}};
    for (auto& a : f) out.terms.push_back(MWTerm{1, a, 0, {}});
    return out;
}

MWExpr mw_add(const MWExpr& a, const MWExpr& b)
{
    require_same(a.F, b.F, "K^MW sum");
    if (a.degree != b.degree)
        throw Error(ErrorCode::NonHomogeneous,
                    "sum of degrees " + std::to_string(a.degree) + " and " + std::to_string(b.degree));
    MWExpr r = a;
    r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
    return r;
}

MWExpr mw_scale(const MWExpr& a, const mpz_class& c)
{
    MWExpr r = a;
    for (auto& t : r.terms) t.coef *= c;
    return r;
}

MWExpr mw_neg(const MWExpr& a) { return mw_scale(a, -1); }

MWExpr mw_sub(const MWExpr& a, const MWExpr& b) { return mw_add(a, mw_neg(b)); }

MWExpr mw_mul(const MWExpr& a, const MWExpr& b)
{
    require_same(a.F, b.F, "K^MW product");
    const Field& F = *a.F;
    MWExpr r{a.F, a.degree + b.degree, {}};
    for (auto& x : a.terms)
        for (auto& y : b.terms) {
            MWTerm t{x.coef * y.coef, F.mul(x.twist, y.twist), x.eta + y.eta, x.entries};
            t.entries.insert(t.entries.end(), y.entries.begin(), y.entries.end());
            r.terms.push_back(t);
        }
    return r;
}

MWExpr mw_simplify(const MWExpr& e)
{
    const Field& F = *e.F;
    std::vector<MWTerm> ts;
    for (auto t : e.terms) {
        check_term(e, t);
        if (t.coef == 0) continue;
        if (F.is_zero(t.twist)) throw Error(ErrorCode::InvalidArgument, "twist <0>");
        bool one = false;
        for (auto& a : t.entries) {
            if (F.is_zero(a)) throw Error(ErrorCode::InvalidArgument, "symbol entry is zero");
            one = one || F.is_one(a);
        }
        if (one) continue;
        t.twist = canonical_twist(F, t.twist);
        // eta<-1> = -eta
        if (t.eta > 0 && F.eq(t.twist, F.from_int(-1))) {
            t.twist = F.one();
            t.coef = -t.coef;
        }
        ts.push_back(std::move(t));
    }
    std::sort(ts.begin(), ts.end(), [&](const MWTerm& a, const MWTerm& b) { return term_cmp(F, a, b) < 0; });
    MWExpr out{e.F, e.degree, {}};
    for (auto& t : ts) {
        if (!out.terms.empty() && term_cmp(F, out.terms.back(), t) == 0)
            out.terms.back().coef += t.coef;
        else
            out.terms.push_back(t);
    }
    out.terms.erase(std::remove_if(out.terms.begin(), out.terms.end(), [](const MWTerm& t) { return t.coef == 0; }),
                    out.terms.end());
    return out;
}

std::string mw_str(const MWExpr& e0)
{
    MWExpr e = mw_simplify(e0);
    const Field& F = *e.F;
    if (e.terms.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < e.terms.size(); ++i) {
        const MWTerm& t = e.terms[i];
        std::vector<std::string> parts;
        if (abs(t.coef) != 1) parts.push_back(mpz_class(abs(t.coef)).get_str());
        if (!F.is_one(t.twist)) parts.push_back("<" + F.str(t.twist) + ">");
        if (t.eta == 1) parts.push_back("eta");
        if (t.eta > 1) parts.push_back("eta^" + std::to_string(t.eta));
        if (!t.entries.empty()) {
            std::string s = "[";
            for (size_t j = 0; j < t.entries.size(); ++j) s += (j ? ", " : "") + F.str(t.entries[j]);
            parts.push_back(s + "]");
        }
        std::string body;
        for (size_t j = 0; j < parts.size(); ++j) body += (j ? "*" : "") + parts[j];
        if (body.empty()) body = "1";
        if (i == 0)
            out = (t.coef < 0 ? "-" : "") + body;
        else
            out += (t.coef < 0 ? " - " : " + ") + body;
    }
    return out;
}

MilnorExpr bridge_f(const MWExpr& e)
{
    MilnorExpr m{e.F, e.degree, {}};
    if (e.degree < 0) return m;
    for (auto& t : e.terms)
        if (t.eta == 0) m.terms.push_back(MSymbol{t.coef, t.entries});
    return mk_simplify(m);
}

MWExpr bridge_H(const MilnorExpr& m)
{
    if (m.degree < 0) throw Error(ErrorCode::NegativeDegreeUnsupported, "H on negative degree");
    const Field& F = *m.F;
    MWExpr out{m.F, m.degree, {}};
    for (auto& t : m.terms) {
        out.terms.push_back(MWTerm{2 * t.coef, F.one(), 0, t.entries});
        MWTerm s{t.coef, F.one(), 1, {F.from_int(-1)}};
        s.entries.insert(s.entries.end(), t.entries.begin(), t.entries.end());
        out.terms.push_back(s);
    }
    return out;
}

MWClass mw_normalize(const MWExpr& e0)
{
    MWExpr e = mw_simplify(e0);
    const Field& F = *e.F;
    MWClass c;
    c.F = e.F;
    c.degree = e.degree;
    c.milnor = MilnorExpr{e.F, std::max(e.degree, 0), {}};
    c.rank = 0;
    for (auto& t : e.terms) {
        if (steinberg_degenerate(F, t.entries)) continue;
        Form p = witt_multiple(F, witt_scale(F, pfister(F, t.entries), t.twist), t.coef);
        c.witt.insert(c.witt.end(), p.begin(), p.end());
        if (t.eta == 0) {
            if (e.degree >= 1) c.milnor.terms.push_back(MSymbol{t.coef, t.entries});
            if (e.degree == 0) c.rank += t.coef;
        }
    }
    c.milnor = mk_simplify(c.milnor);
    c.witt = witt_cancel(F, c.witt);
    c.rep = e;
    return c;
}

Tri mw_equal(const MWClass& a, const MWClass& b)
{
    require_same(a.F, b.F, "K^MW equality");
    if (a.degree != b.degree) return Tri::No;
    Tri first = Tri::Yes;
    if (a.degree >= 1) first = mk_equal(a.milnor, b.milnor);
    if (a.degree == 0) first = tri_of(a.rank == b.rank);
    if (first == Tri::No) return Tri::No;
    return tri_and(first, witt_equal(*a.F, a.witt, b.witt));
}

Tri mw_equal(const MWExpr& a, const MWExpr& b) { return mw_equal(mw_normalize(a), mw_normalize(b)); }

Tri mw_is_zero(const MWClass& a)
{
    MWClass z;
    z.F = a.F;
    z.degree = a.degree;
    z.milnor = MilnorExpr{a.F, std::max(a.degree, 0), {}};
    z.rank = 0;
    return mw_equal(a, z);
}

MWClass mw_class_add(const MWClass& a, const MWClass& b)
{
    require_same(a.F, b.F, "K^MW sum");
    if (a.degree != b.degree) throw Error(ErrorCode::NonHomogeneous, "sum of classes of different degrees");
    MWClass c = a;
    c.milnor = mk_simplify(mk_add(a.milnor, b.milnor));
    c.rank = a.rank + b.rank;
    c.witt.insert(c.witt.end(), b.witt.begin(), b.witt.end());
    try {
        c.witt = witt_cancel(*a.F, c.witt);
    } catch (const Error&) {
    }
    if (a.rep && b.rep)
        c.rep = mw_simplify(mw_add(*a.rep, *b.rep));
    else
        c.rep.reset();
    return c;
}

Tri fiber_compatible(const MWClass& a)
{
    const Field& F = *a.F;
    if (a.degree < 0) return Tri::Yes;
    if (a.degree == 0) {
        long s = static_cast<long>(a.witt.size());
        return tri_of((a.rank - s) % 2 == 0);
    }
    Tri in = in_fundamental_power(F, a.witt, a.degree);
    if (in == Tri::No) return Tri::No;
    return tri_and(in, sn_equal(F, s_n(a.milnor), a.witt, a.degree));
}

std::string mw_class_str(const MWClass& a)
{
    const Field& F = *a.F;
    if (a.rep) return mw_str(*a.rep);
    if (a.degree == 0) {
        mpz_class extra = a.rank - static_cast<long>(a.witt.size());
        MWExpr r = mw_from_gw(a.F, a.witt);
        r = mw_add(r, mw_scale(mw_hyperbolic(a.F), extra / 2));
        return mw_str(r);
    }
    if (a.degree < 0) {
        MWExpr r = mw_mul(mw_eta(a.F, -a.degree), mw_from_gw(a.F, a.witt));
        return mw_str(r);
    }
    return "(" + mk_str(a.milnor) + " | " + form_str(F, a.witt) + ")";
}

MWExpr residue_expr(const PointValuation& v, const MWExpr& e0)
{
    require_same(v.field, e0.F, "residue");
    const Field& K = *v.field;
    const Field& R = *v.residue;
    MWExpr e = mw_simplify(e0);
    // twists of odd valuation: <u pi> = <u> + <u> eta [pi]
    std::vector<MWTerm> work;
    for (auto& t : e.terms) {
        Valued b = valuation(v, t.twist);
        if (b.order % 2 == 0) {
            work.push_back(t);
            continue;
        }
        Elem u = K.div(t.twist, v.uniformizer);
        MWTerm a{t.coef, u, t.eta, t.entries};
        MWTerm c{t.coef, u, t.eta + 1, {v.uniformizer}};
        c.entries.insert(c.entries.end(), t.entries.begin(), t.entries.end());
        work.push_back(a);
        work.push_back(c);
    }
    MWExpr out{v.residue, e.degree - 1, {}};
    for (auto& t : work) {
        Elem ub = valuation(v, t.twist).unit;
        size_t n = t.entries.size();
        if (n >= 20) throw Error(ErrorCode::DegreeCapExceeded, "symbol of length " + std::to_string(n));
        std::vector<long> k(n);
        std::vector<Elem> u(n);
        for (size_t i = 0; i < n; ++i) {
            Valued val = valuation(v, t.entries[i]);
            k[i] = val.order;
            u[i] = val.unit;
        }
        for (unsigned long S = 1; S < (1ul << n); ++S) {
            EpsInt c{1, 0};
            Elem w = ub;
            int first = -1;
            bool dead = false;
            for (size_t i = 0; i < n && !dead; ++i)
                if (S >> i & 1) {
                    if (k[i] == 0) dead = true;
                    c = eps_mul(c, n_eps(k[i]));
                    w = R.mul(w, u[i]);
                    if (first < 0) first = static_cast<int>(i);
                }
            if (dead) continue;
            if (first % 2) c = EpsInt{-c.b, -c.a};
            std::vector<Elem> ys;
            for (size_t i = 0; i < n; ++i) {
                if (static_cast<int>(i) == first) continue;
                ys.push_back((S >> i & 1) ? R.from_int(-1) : u[i]);
            }
            if (c.a != 0) out.terms.push_back(MWTerm{t.coef * c.a, w, t.eta, ys});
            if (c.b != 0) out.terms.push_back(MWTerm{t.coef * c.b, R.neg(w), t.eta, ys});
        }
    }
    return mw_simplify(out);
}

TwistedMWClass residue(const PointValuation& v, const MWExpr& e)
{
    TwistedMWClass r{mw_normalize(residue_expr(v, e)), {}};
    r.twist.line = "(m/m^2)^dual at " + v.str() + ", pi = " + v.field->str(v.uniformizer);
    r.twist.generator = v.residue->one();
    return r;
}

MWExpr specialize_expr(const PointValuation& v, const MWExpr& e)
{
    MWExpr pe = e;
    for (auto& t : pe.terms) t.entries.insert(t.entries.begin(), v.uniformizer);
    pe.degree += 1;
    return residue_expr(v, pe);
}

MWClass specialize(const PointValuation& v, const MWExpr& e) { return mw_normalize(specialize_expr(v, e)); }

MWExpr transfer_geometric_expr(const FieldPtr& E, const FieldPtr& L, const MWExpr& e)
{
    return transfer_expr(E, L, e, false);
}

MWExpr transfer_cohomological_expr(const FieldPtr& E, const FieldPtr& L, const MWExpr& e)
{
    return transfer_expr(E, L, e, true);
}

MWExpr transfer_geometric_perturbed(const FieldPtr& E, const MWExpr& e, int shift)
{
    return tau_step(E, e, false, shift);
}

MilnorExpr mk_transfer(const FieldPtr& E, const FieldPtr& L, const MilnorExpr& e)
{
    require_same(E, e.F, "norm");
    int d = E->degree_over(*L);
    MilnorExpr out{L, e.degree, {}};
    if (e.degree == 0) {
        for (auto& t : e.terms) out.terms.push_back(MSymbol{t.coef * d, {}});
        return mk_simplify(out);
    }
    if (e.degree == 1) {
        Elem n = norm(*E, *L, k1_value(e));
        if (!L->is_one(n)) out.terms.push_back(MSymbol{1, {n}});
        return out;
    }
    MWExpr lifted{E, e.degree, {}};
    for (auto& t : e.terms) lifted.terms.push_back(MWTerm{t.coef, E->one(), 0, t.entries});
    return bridge_f(transfer_geometric_expr(E, L, lifted));
}

namespace {

MWClass pair_transfer(const FieldPtr& E, const FieldPtr& L, const MWClass& a, bool with_rep, bool cohomological)
{
    require_same(E, a.F, "transfer");
    tower_steps(E, L);
    MWClass out;
    out.F = L;
    out.degree = a.degree;
    out.milnor = MilnorExpr{L, std::max(a.degree, 0), {}};
    out.rank = a.rank * E->degree_over(*L);
    if (a.degree >= 1) out.milnor = mk_simplify(mk_transfer(E, L, a.milnor));
    Functional f = cohomological ? trace_functional(E, L) : scharlau_functional(E, L);
    out.witt = witt_cancel(*L, scharlau_transfer(f, a.witt));
    if (with_rep && a.rep) out.rep = transfer_expr(E, L, *a.rep, cohomological);
    return out;
}

}  // namespace

MWClass transfer_geometric(const FieldPtr& E, const FieldPtr& L, const MWClass& a, bool with_rep)
{
    return pair_transfer(E, L, a, with_rep, false);
}

MWClass transfer_cohomological(const FieldPtr& E, const FieldPtr& L, const MWClass& a, bool with_rep)
{
    return pair_transfer(E, L, a, with_rep, true);
}

MWExpr mw_extend(const FieldPtr& E, const MWExpr& e)
{
    MWExpr out{E, e.degree, {}};
    for (auto& t : e.terms) {
        MWTerm s{t.coef, E->embed_from(*e.F, t.twist), t.eta, {}};
        for (auto& x : t.entries) s.entries.push_back(E->embed_from(*e.F, x));
        out.terms.push_back(s);
    }
    return out;
}

std::vector<PointValuation> unramified_check(const MWExpr& e0, bool gm)
{
    const FieldPtr& K = e0.F;
    if (K->kind() != Field::Kind::RationalFunction)
        throw Error(ErrorCode::InvalidArgument, "unramified_check needs a rational function field");
    const Field& B = *K->base();
    MWExpr e = mw_simplify(e0);
    std::vector<Poly> places;
    auto note = [&](const Poly& g) {
        if (poly::deg(g) < 1) return;
        for (auto& [q, m] : factor(B, g).factors)
            if (std::none_of(places.begin(), places.end(), [&](const Poly& h) { return poly::eq(B, q, h); }))
                places.push_back(q);
    };
    for (auto& t : e.terms) {
        note(t.twist.num);
        note(t.twist.den);
        for (auto& x : t.entries) {
            note(x.num);
            note(x.den);
        }
    }
    std::sort(places.begin(), places.end(), [&](const Poly& x, const Poly& y) { return poly::cmp(B, x, y) < 0; });
    std::vector<PointValuation> out;
    Poly t_poly = poly::x(B);
    for (auto& q : places) {
        if (gm && poly::eq(B, q, t_poly)) continue;
        PointValuation v = PointValuation::at_poly(K, q);
        if (mw_is_zero(mw_normalize(residue_expr(v, e))) != Tri::Yes) out.push_back(v);
    }
    PointValuation inf = PointValuation::at_infinity(K);
    if (mw_is_zero(mw_normalize(residue_expr(inf, e))) != Tri::Yes) out.push_back(inf);
    return out;
}

}  // namespace mwk
