#include "mwk/milnor_k.hpp"

#include <algorithm>
#include <map>

#include "mwk/factor.hpp"

namespace mwk {

namespace {

bool entries_less(const Field& F, const std::vector<Elem>& a, const std::vector<Elem>& b)
{
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = 0; i < a.size(); ++i) {
        int c = F.cmp(a[i], b[i]);
        if (c) return c < 0;
    }
    return false;
}

bool entries_eq(const Field& F, const std::vector<Elem>& a, const std::vector<Elem>& b)
{
    return !entries_less(F, a, b) && !entries_less(F, b, a);
}

Tri tri_all(const std::vector<Tri>& ts)
{
    Tri acc = Tri::Yes;
    for (Tri t : ts) acc = tri_and(acc, t);
    return acc;
}

// monic irreducible places of F(t) met by the entries
std::vector<Poly> support_places(const Field& Ft, const std::vector<std::vector<Elem>>& entry_lists)
{
    const Field& B = *Ft.base();
    std::vector<Poly> out;
    auto add = [&](const Poly& p) {
        if (poly::deg(p) < 1) return;
        for (auto& [g, m] : factor(B, p).factors)
            if (std::none_of(out.begin(), out.end(), [&](const Poly& h) { return poly::eq(B, g, h); }))
                out.push_back(g);
    };
    for (auto& es : entry_lists)
        for (auto& e : es) {
            add(e.num);
            add(e.den);
        }
    std::sort(out.begin(), out.end(), [&](const Poly& a, const Poly& b) { return poly::cmp(B, a, b) < 0; });
    return out;
}

}  // namespace

bool steinberg_degenerate(const Field& F, const std::vector<Elem>& a)
{
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a.size(); ++j)
            if (i != j && (F.eq(F.add(a[i], a[j]), F.one()) || F.is_zero(F.add(a[i], a[j])))) return true;
    return false;
}

MilnorExpr mk_simplify(const MilnorExpr& e)
{
    const Field& F = *e.F;
    std::vector<MSymbol> ts;
    for (auto& t : e.terms) {
        if (t.coef == 0) continue;
        if (std::any_of(t.entries.begin(), t.entries.end(), [&](const Elem& a) { return F.is_one(a); })) continue;
        for (auto& a : t.entries)
            if (F.is_zero(a)) throw Error(ErrorCode::InvalidArgument, "symbol entry is zero");
        if (steinberg_degenerate(F, t.entries)) continue;
        ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end(), [&](const MSymbol& a, const MSymbol& b) { return entries_less(F, a.entries, b.entries); });
    MilnorExpr out{e.F, e.degree, {}};
    for (auto& t : ts) {
        if (!out.terms.empty() && entries_eq(F, out.terms.back().entries, t.entries))
            out.terms.back().coef += t.coef;
        else
            out.terms.push_back(t);
    }
    out.terms.erase(std::remove_if(out.terms.begin(), out.terms.end(), [](const MSymbol& t) { return t.coef == 0; }),
                    out.terms.end());
    return out;
}

MilnorExpr mk_add(const MilnorExpr& a, const MilnorExpr& b)
{
    require_same(a.F, b.F, "K^M sum");
    if (a.degree != b.degree) throw Error(ErrorCode::NonHomogeneous, "K^M sum of different degrees");
    MilnorExpr r = a;
    r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
    return r;
}

MilnorExpr mk_scale(const MilnorExpr& a, const mpz_class& c)
{
    MilnorExpr r = a;
    for (auto& t : r.terms) t.coef *= c;
    return r;
}

MilnorExpr mk_neg(const MilnorExpr& a) { return mk_scale(a, -1); }

MilnorExpr mk_mul(const MilnorExpr& a, const MilnorExpr& b)
{
    require_same(a.F, b.F, "K^M product");
    MilnorExpr r{a.F, a.degree + b.degree, {}};
    for (auto& x : a.terms)
        for (auto& y : b.terms) {
            MSymbol s{x.coef * y.coef, x.entries};
            s.entries.insert(s.entries.end(), y.entries.begin(), y.entries.end());
            r.terms.push_back(s);
        }
    return r;
}

Elem k1_value(const MilnorExpr& e)
{
    const Field& F = *e.F;
    Elem v = F.one();
    for (auto& t : e.terms) v = F.mul(v, F.pow(t.entries.at(0), t.coef));
    return v;
}

MilnorExpr mk_residue(const PointValuation& v, const MilnorExpr& e)
{
    require_same(v.field, e.F, "tame residue");
    if (e.degree < 1) throw Error(ErrorCode::InvalidArgument, "residue of a degree-0 class");
    const Field& R = *v.residue;
    MilnorExpr out{v.residue, e.degree - 1, {}};
    for (auto& t : e.terms) {
        size_t n = t.entries.size();
        std::vector<long> k(n);
        std::vector<Elem> u(n);
        for (size_t i = 0; i < n; ++i) {
            Valued val = valuation(v, t.entries[i]);
            k[i] = val.order;
            u[i] = val.unit;
        }
        for (unsigned long S = 1; S < (1ul << n); ++S) {
            mpz_class c = t.coef;
            int first = -1;
            for (size_t i = 0; i < n; ++i)
                if (S >> i & 1) {
                    c *= k[i];
                    if (first < 0) first = static_cast<int>(i);
                }
            if (c == 0) continue;
            if (first % 2) c = -c;
            MSymbol s{c, {}};
            for (size_t i = 0; i < n; ++i) {
                if (static_cast<int>(i) == first) continue;
                s.entries.push_back((S >> i & 1) ? R.from_int(-1) : u[i]);
            }
            out.terms.push_back(s);
        }
    }
    return mk_simplify(out);
}

MilnorExpr mk_specialize(const PointValuation& v, const MilnorExpr& e)
{
    MilnorExpr pe = e;
    for (auto& t : pe.terms) t.entries.insert(t.entries.begin(), v.uniformizer);
    pe.degree += 1;
    return mk_residue(v, pe);
}

namespace {

struct QRecord {
    std::map<mpz_class, mpz_class> tame;  // p -> value in [1, p)
    int h2 = 1;
};

QRecord q_degree2(const MilnorExpr& e)
{
    const FieldPtr& Q = e.F;
    std::vector<mpz_class> primes;
    for (auto& t : e.terms)
        for (auto& a : t.entries)
            for (auto& p : relevant_primes({a}))
                if (p != 2 && std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);
    std::sort(primes.begin(), primes.end());
    QRecord r;
    for (auto& p : primes) {
        PointValuation v = PointValuation::at_prime(Q, p);
        Elem val = k1_value(mk_residue(v, e));
        if (!v.residue->is_one(val)) r.tame[p] = val.q.get_num();
    }
    for (auto& t : e.terms) {
        int h = hilbert_symbol(t.entries[0].q, t.entries[1].q, 2);
        if (h == -1 && t.coef % 2 != 0) r.h2 = -r.h2;
    }
    return r;
}

int q_real_bit(const MilnorExpr& e)
{
    mpz_class s = 0;
    for (auto& t : e.terms)
        if (std::all_of(t.entries.begin(), t.entries.end(), [](const Elem& a) { return a.q < 0; })) s += t.coef;
    return s % 2 == 0 ? 0 : 1;
}

}  // namespace

Tri mk_is_zero(const MilnorExpr& e0)
{
    MilnorExpr e = mk_simplify(e0);
    const Field& F = *e.F;
    if (e.terms.empty()) return Tri::Yes;
    if (e.degree == 0) {
        mpz_class s = 0;
        for (auto& t : e.terms) s += t.coef;
        return tri_of(s == 0);
    }
    if (e.degree == 1) return tri_of(F.is_one(k1_value(e)));
    if (F.is_finite()) return Tri::Yes;
    if (F.kind() == Field::Kind::Rationals) {
        if (e.degree == 2) {
            QRecord r = q_degree2(e);
            return tri_of(r.tame.empty() && r.h2 == 1);
        }
        return tri_of(q_real_bit(e) == 0);
    }
    if (F.kind() == Field::Kind::RationalFunction) {
        try {
            std::vector<std::vector<Elem>> lists;
            for (auto& t : e.terms) lists.push_back(t.entries);
            std::vector<Tri> parts;
            for (auto& P : support_places(F, lists)) {
                Tri t = mk_is_zero(mk_residue(PointValuation::at_poly(e.F, P), e));
                if (t == Tri::No) return Tri::No;
                parts.push_back(t);
            }
            Tri c = mk_is_zero(mk_specialize(PointValuation::at_infinity(e.F), e));
            if (c == Tri::No) return Tri::No;
            parts.push_back(c);
            return tri_all(parts);
        } catch (const Error& err) {
            if (err.code() != ErrorCode::UnsupportedField && err.code() != ErrorCode::DegreeCapExceeded) throw;
            return Tri::Unknown;
        }
    }
    return Tri::Unknown;
}

Tri mk_equal(const MilnorExpr& a, const MilnorExpr& b)
{
    require_same(a.F, b.F, "K^M equality");
    if (a.degree != b.degree) return Tri::No;
    return mk_is_zero(mk_add(a, mk_neg(b)));
}

MilnorNormal mk_normalize(const MilnorExpr& e0)
{
    MilnorExpr e = mk_simplify(e0);
    const Field& F = *e.F;
    MilnorNormal n;
    n.degree = e.degree;
    n.decided = Tri::Yes;
    if (e.degree == 0) {
        mpz_class s = 0;
        for (auto& t : e.terms) s += t.coef;
        n.record = s.get_str();
        return n;
    }
    if (e.degree == 1) {
        n.record = F.str(k1_value(e));
        return n;
    }
    if (F.is_finite()) {
        n.record = "0";
        return n;
    }
    if (F.kind() == Field::Kind::Rationals) {
        if (e.degree == 2) {
            QRecord r = q_degree2(e);
            n.record = "tame{";
            bool first = true;
            for (auto& [p, v] : r.tame) {
                n.record += (first ? "" : ",") + p.get_str() + ":" + v.get_str();
                first = false;
            }
            n.record += "} h2=" + std::to_string(r.h2);
        } else {
            n.record = "real=" + std::to_string(q_real_bit(e));
        }
        return n;
    }
    if (F.kind() == Field::Kind::RationalFunction) {
        try {
            std::vector<std::vector<Elem>> lists;
            for (auto& t : e.terms) lists.push_back(t.entries);
            n.record = "res{";
            bool first = true;
            for (auto& P : support_places(F, lists)) {
                MilnorNormal sub = mk_normalize(mk_residue(PointValuation::at_poly(e.F, P), e));
                n.decided = tri_and(n.decided, sub.decided);
                if (sub.record == "0" || (sub.degree == 1 && sub.record == "1")) continue;
                n.record += (first ? "" : ",") + poly::str(*F.base(), P, F.var()) + ":" + sub.record;
                first = false;
            }
            MilnorNormal inf = mk_normalize(mk_specialize(PointValuation::at_infinity(e.F), e));
            n.decided = tri_and(n.decided, inf.decided);
            n.record += "} const=" + inf.record;
            return n;
        } catch (const Error& err) {
            if (err.code() != ErrorCode::UnsupportedField && err.code() != ErrorCode::DegreeCapExceeded) throw;
        }
    }
    n.decided = mk_is_zero(e) == Tri::Yes ? Tri::Yes : Tri::Unknown;
    n.record = n.decided == Tri::Yes ? "0" : mk_str(e);
    return n;
}

Form s_n(const MilnorExpr& e)
{
    const Field& F = *e.F;
    Form out;
    for (auto& t : e.terms) {
        Form p = witt_multiple(F, pfister(F, t.entries), t.coef);
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

Tri sn_equal(const Field& F, const Form& a, const Form& b, int n)
{
    return in_fundamental_power(F, witt_add(a, witt_neg(F, b)), n + 1);
}

std::string mk_str(const MilnorExpr& e0)
{
    MilnorExpr e = mk_simplify(e0);
    const Field& F = *e.F;
    if (e.terms.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < e.terms.size(); ++i) {
        const MSymbol& t = e.terms[i];
        mpz_class c = t.coef;
        std::string sym;
        if (t.entries.empty()) {
            sym = mpz_class(abs(c)).get_str();
        } else {
            sym = "{";
            for (size_t j = 0; j < t.entries.size(); ++j) sym += (j ? "," : "") + F.str(t.entries[j]);
            sym += "}";
            if (abs(c) != 1) sym = mpz_class(abs(c)).get_str() + "*" + sym;
        }
        if (i == 0)
            out = (c < 0 ? "-" : "") + sym;
        else
            out += (c < 0 ? " - " : " + ") + sym;
    }
    return out;
}

}  // namespace mwk
