#include "mwk/tower.hpp"

#include <algorithm>

#include "mwk/factor.hpp"

namespace mwk {

PointValuation PointValuation::at_prime(const FieldPtr& Q, const mpz_class& p)
{
    if (Q->kind() != Field::Kind::Rationals)
        throw Error(ErrorCode::UnsupportedField, "prime valuations are defined on Q only");
    if (p == 2) throw Error(ErrorCode::InvalidArgument, "the residue field at 2 has characteristic 2");
    PointValuation v;
    v.field = Q;
    v.kind = Kind::RationalPrime;
    v.prime = p;
    v.residue = Field::prime(p);
    v.uniformizer = Q->from_mpz(p);
    return v;
}

PointValuation PointValuation::at_poly(const FieldPtr& Ft, const Poly& q0)
{
    if (Ft->kind() != Field::Kind::RationalFunction)
        throw Error(ErrorCode::UnsupportedField, "polynomial valuations need a rational function field");
    const Field& B = *Ft->base();
    Poly q = q0;
    poly::trim(B, q);
    if (poly::deg(q) < 1) throw Error(ErrorCode::InvalidArgument, "valuation polynomial must be nonconstant");
    q = poly::monic(B, q);
    if (is_irreducible(B, q) == Tri::No)
        throw Error(ErrorCode::InvalidArgument, poly::str(B, q, Ft->var()) + " is reducible");
    PointValuation v;
    v.field = Ft;
    v.kind = Kind::MonicIrreducible;
    v.poly = q;
    v.residue = residue_field(Ft->base(), q, Ft->var());
    v.uniformizer.num = q;
    v.uniformizer.den = {B.one()};
    return v;
}

PointValuation PointValuation::at_infinity(const FieldPtr& Ft)
{
    if (Ft->kind() != Field::Kind::RationalFunction)
        throw Error(ErrorCode::UnsupportedField, "the infinite place needs a rational function field");
    const Field& B = *Ft->base();
    PointValuation v;
    v.field = Ft;
    v.kind = Kind::Infinity;
    v.residue = Ft->base();
    v.uniformizer.num = {B.from_int(-1)};
    v.uniformizer.den = {B.zero(), B.one()};
    return v;
}

std::string PointValuation::str() const
{
    switch (kind) {
    case Kind::RationalPrime: return prime.get_str();
    case Kind::MonicIrreducible: return poly::str(*field->base(), poly, field->var());
    case Kind::Infinity: return "inf";
    }
    return "?";
}

FieldPtr residue_field(const FieldPtr& base, const Poly& q, const std::string& t)
{
    if (poly::deg(q) == 1) return base;
    return Field::extension_trusted(base, q, t);
}

Elem reduce_mod(const Field&, const Field& base, const Poly& g, const Poly& q)
{
    if (poly::deg(q) == 1) return poly::eval(base, g, base.neg(base.div(q[0], q[1])));
    Elem e;
    e.num = poly::rem(base, g, q);
    poly::trim(base, e.num);
    return e;
}

Poly lift_poly(const Field&, const Field& base, const Elem& e, const Poly& q)
{
    if (poly::deg(q) == 1) return poly::constant(base, e);
    return e.num;
}

std::string fresh_var(const Field& F, const std::string& hint)
{
    auto vars = F.variables();
    auto taken = [&](const std::string& s) { return std::find(vars.begin(), vars.end(), s) != vars.end(); };
    if (!taken(hint)) return hint;
    for (int i = 1;; ++i)
        if (!taken(hint + std::to_string(i))) return hint + std::to_string(i);
}

Valued valuation(const PointValuation& v, const Elem& a)
{
    const Field& F = *v.field;
    if (F.is_zero(a)) throw Error(ErrorCode::InvalidArgument, "valuation of zero");
    Valued out{0, {}};
    switch (v.kind) {
    case PointValuation::Kind::RationalPrime: {
        mpz_class n = a.q.get_num(), d = a.q.get_den();
        long k = 0;
        while (n % v.prime == 0) {
            n /= v.prime;
            ++k;
        }
        while (d % v.prime == 0) {
            d /= v.prime;
            --k;
        }
        out.order = k;
        out.unit = v.residue->from_rational(mpq_class(n, d));
        return out;
    }
    case PointValuation::Kind::MonicIrreducible: {
        const Field& B = *F.base();
        Poly n = a.num, d = a.den;
        long k = 0;
        for (;;) {
            Poly q, r;
            poly::divmod(B, n, v.poly, q, r);
            if (!poly::is_zero(r)) break;
            n = q;
            ++k;
        }
        for (;;) {
            Poly q, r;
            poly::divmod(B, d, v.poly, q, r);
            if (!poly::is_zero(r)) break;
            d = q;
            --k;
        }
        const Field& R = *v.residue;
        out.order = k;
        out.unit = R.div(reduce_mod(R, B, n, v.poly), reduce_mod(R, B, d, v.poly));
        return out;
    }
    case PointValuation::Kind::Infinity: {
        const Field& B = *F.base();
        out.order = poly::deg(a.den) - poly::deg(a.num);
        Elem u = B.div(poly::lc(a.num), poly::lc(a.den));
        if (out.order % 2) u = B.neg(u);
        out.unit = u;
        return out;
    }
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Gaussian elimination; returns false if singular.
bool solve(const Field& L, std::vector<std::vector<Elem>> A, std::vector<Elem> b, std::vector<Elem>& x)
{
    size_t n = A.size();
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && L.is_zero(A[piv][c])) ++piv;
        if (piv == n) return false;
        std::swap(A[piv], A[c]);
        std::swap(b[piv], b[c]);
        Elem inv = L.inv(A[c][c]);
        for (size_t r = 0; r < n; ++r) {
            if (r == c || L.is_zero(A[r][c])) continue;
            Elem f = L.mul(A[r][c], inv);
            for (size_t k = c; k < n; ++k) A[r][k] = L.sub(A[r][k], L.mul(f, A[c][k]));
            b[r] = L.sub(b[r], L.mul(f, b[c]));
        }
    }
    x.resize(n);
    for (size_t i = 0; i < n; ++i) x[i] = L.div(b[i], A[i][i]);
    return true;
}

Elem det(const Field& L, std::vector<std::vector<Elem>> A)
{
    size_t n = A.size();
    Elem d = L.one();
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && L.is_zero(A[piv][c])) ++piv;
        if (piv == n) return L.zero();
        if (piv != c) {
            std::swap(A[piv], A[c]);
            d = L.neg(d);
        }
        d = L.mul(d, A[c][c]);
        Elem inv = L.inv(A[c][c]);
        for (size_t r = c + 1; r < n; ++r) {
            if (L.is_zero(A[r][c])) continue;
            Elem f = L.mul(A[r][c], inv);
            for (size_t k = c; k < n; ++k) A[r][k] = L.sub(A[r][k], L.mul(f, A[c][k]));
        }
    }
    return d;
}

}  // namespace

std::vector<Elem> tower_basis(const Field& E, const Field& L)
{
    if (E.same(L)) return {E.one()};
    if (E.kind() != Field::Kind::SimpleExtension || !E.base())
        throw Error(ErrorCode::NotFinite, E.descriptor() + " is not finite over " + L.descriptor());
    std::vector<Elem> below = tower_basis(*E.base(), L);
    std::vector<Elem> out;
    Elem x = E.generator(), xp = E.one();
    for (int j = 0; j < E.degree(); ++j) {
        for (auto& b : below) out.push_back(E.mul(E.embed(b), xp));
        xp = E.mul(xp, x);
    }
    return out;
}

std::vector<Elem> tower_coords(const Field& E, const Field& L, const Elem& e)
{
    if (E.same(L)) return {e};
    if (E.kind() != Field::Kind::SimpleExtension || !E.base())
        throw Error(ErrorCode::NotFinite, E.descriptor() + " is not finite over " + L.descriptor());
    const Field& B = *E.base();
    std::vector<Elem> out;
    for (int j = 0; j < E.degree(); ++j) {
        Elem c = j < static_cast<int>(e.num.size()) ? e.num[j] : B.zero();
        auto sub = tower_coords(B, L, c);
        out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
}

Elem Functional::operator()(const Elem& e) const
{
    auto c = tower_coords(*E, *L, e);
    Elem r = L->zero();
    for (size_t i = 0; i < c.size(); ++i) r = L->add(r, L->mul(c[i], values[i]));
    return r;
}

std::vector<std::vector<Elem>> mult_matrix(const Field& E, const Field& L, const Elem& e)
{
    auto basis = tower_basis(E, L);
    size_t n = basis.size();
    std::vector<std::vector<Elem>> M(n, std::vector<Elem>(n));
    for (size_t j = 0; j < n; ++j) {
        auto c = tower_coords(E, L, E.mul(e, basis[j]));
        for (size_t i = 0; i < n; ++i) M[i][j] = c[i];
    }
    return M;
}

Functional trace_functional(const FieldPtr& E, const FieldPtr& L)
{
    Functional f{E, L, {}};
    for (auto& b : tower_basis(*E, *L)) {
        auto M = mult_matrix(*E, *L, b);
        Elem t = L->zero();
        for (size_t i = 0; i < M.size(); ++i) t = L->add(t, M[i][i]);
        f.values.push_back(t);
    }
    return f;
}

Functional scharlau_functional(const FieldPtr& E, const FieldPtr& L)
{
    if (E->same(*L)) return Functional{E, L, {L->one()}};
    if (E->kind() != Field::Kind::SimpleExtension)
        throw Error(ErrorCode::NotMonogenic, E->descriptor() + " is not a simple extension");
    Functional below = scharlau_functional(E->base(), L);
    Functional f{E, L, {}};
    int n = E->degree();
    for (int j = 0; j < n; ++j)
        for (auto& v : below.values) f.values.push_back(j == n - 1 ? v : L->zero());
    return f;
}

Elem norm(const Field& E, const Field& L, const Elem& e) { return det(L, mult_matrix(E, L, e)); }

Elem functional_change_unit(const Functional& f, const Functional& g)
{
    const Field& E = *f.E;
    const Field& L = *f.L;
    auto basis = tower_basis(E, L);
    size_t n = basis.size();
    std::vector<std::vector<Elem>> A(n, std::vector<Elem>(n));
    std::vector<Elem> rhs(n);
    for (size_t i = 0; i < n; ++i) {
        rhs[i] = g(basis[i]);
        for (size_t k = 0; k < n; ++k) A[i][k] = f(E.mul(basis[k], basis[i]));
    }
    std::vector<Elem> beta;
    if (!solve(L, A, rhs, beta)) throw Error(ErrorCode::InvalidArgument, "degenerate functional");
    Elem b = E.zero();
    for (size_t k = 0; k < n; ++k) b = E.add(b, E.mul(E.embed_from(L, beta[k]), basis[k]));
    return b;
}

}  // namespace mwk
