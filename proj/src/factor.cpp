#include "mwk/factor.hpp"

#include <algorithm>
#include <functional>

#include "mwk/tower.hpp"

namespace mwk {

FactorCaps& factor_caps()
{
    static FactorCaps caps;
    return caps;
}

namespace {

using Factors = std::vector<std::pair<Poly, int>>;

void sort_factors(const Field& F, Factors& fs)
{
    std::sort(fs.begin(), fs.end(), [&](const auto& a, const auto& b) {
        int c = poly::cmp(F, a.first, b.first);
        return c ? c < 0 : a.second < b.second;
    });
}

// merge equal factors
void merge(const Field& F, Factors& fs)
{
    sort_factors(F, fs);
    Factors out;
    for (auto& f : fs) {
        if (!out.empty() && poly::eq(F, out.back().first, f.first))
            out.back().second += f.second;
        else
            out.push_back(f);
    }
    fs = std::move(out);
}

Poly pth_root(const Field& F, const Poly& f)
{
    const mpz_class& p = F.characteristic();
    mpz_class e = F.size() / p;
    Poly r;
    unsigned long pu = p.get_ui();
    for (size_t i = 0; i < f.size(); i += pu) r.push_back(F.pow(f[i], e));
    poly::trim(F, r);
    return r;
}

// ---- finite fields --------------------------------------------------------

Factors ddf(const Field& F, Poly f)
{
    Factors out;
    const mpz_class& q = F.size();
    Poly X = poly::x(F);
    Poly h = X;
    for (int i = 1; 2 * i <= poly::deg(f); ++i) {
        h = poly::powmod(F, h, q, f);
        Poly g = poly::gcd(F, poly::sub(F, h, X), f);
        if (poly::deg(g) > 0) {
            out.push_back({g, i});
            f = poly::quo(F, f, g);
            h = poly::rem(F, h, f);
        }
    }
    if (poly::deg(f) > 0) out.push_back({f, poly::deg(f)});
    return out;
}

void edf(const Field& F, const Poly& g, int d, std::mt19937_64& rng, std::vector<Poly>& out)
{
    int n = poly::deg(g);
    if (n == d) {
        out.push_back(g);
        return;
    }
    mpz_class qd;
    mpz_pow_ui(qd.get_mpz_t(), F.size().get_mpz_t(), d);
    mpz_class e = (qd - 1) / 2;
    for (;;) {
        Poly a;
        for (int i = 0; i < n; ++i) a.push_back(F.random(rng));
        poly::trim(F, a);
        if (poly::deg(a) < 1) continue;
        Poly b = poly::sub(F, poly::powmod(F, a, e, g), poly::constant(F, F.one()));
        Poly h = poly::gcd(F, b, g);
        if (poly::deg(h) > 0 && poly::deg(h) < n) {
            edf(F, h, d, rng, out);
            edf(F, poly::quo(F, g, h), d, rng, out);
            return;
        }
    }
}

Factors squarefree_finite(const Field& F, const Poly& f0)
{
    Factors out;
    Poly f = poly::monic(F, f0);
    if (poly::deg(f) < 1) return out;
    Poly c = poly::gcd(F, f, poly::deriv(F, f));
    Poly w = poly::quo(F, f, c);
    int i = 1;
    while (poly::deg(w) > 0) {
        Poly y = poly::gcd(F, w, c);
        Poly z = poly::quo(F, w, y);
        if (poly::deg(z) > 0) out.push_back({z, i});
        ++i;
        w = y;
        c = poly::quo(F, c, y);
    }
    if (poly::deg(c) > 0) {
        int p = static_cast<int>(F.characteristic().get_ui());
        for (auto& [g, m] : squarefree_finite(F, pth_root(F, c))) out.push_back({g, m * p});
    }
    return out;
}

Factors factor_finite(const Field& F, const Poly& f)
{
    std::mt19937_64 rng(0x5eed);
    Factors out;
    for (auto& [g, m] : squarefree_finite(F, f)) {
        for (auto& [h, d] : ddf(F, g)) {
            std::vector<Poly> parts;
            edf(F, h, d, rng, parts);
            for (auto& p : parts) out.push_back({p, m});
        }
    }
    return out;
}

// ---- characteristic zero --------------------------------------------------

Factors squarefree_char0(const Field& F, const Poly& f0)
{
    Factors out;
    Poly f = poly::monic(F, f0);
    if (poly::deg(f) < 1) return out;
    Poly a = f, b = poly::deriv(F, f);
    Poly c = poly::gcd(F, a, b);
    Poly w = poly::quo(F, a, c);
    int i = 1;
    while (poly::deg(w) > 0) {
        Poly y = poly::gcd(F, w, c);
        Poly z = poly::quo(F, w, y);
        if (poly::deg(z) > 0) out.push_back({z, i});
        ++i;
        w = y;
        c = poly::quo(F, c, y);
    }
    return out;
}

// Integer coefficient vector of a primitive multiple of a rational polynomial.
std::vector<mpz_class> primitive_integer(const Poly& f)
{
    mpz_class l = 1;
    for (auto& c : f) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.q.get_den_mpz_t());
    std::vector<mpz_class> v;
    mpz_class g = 0;
    for (auto& c : f) {
        mpz_class n = c.q.get_num() * (l / c.q.get_den());
        v.push_back(n);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    }
    if (g != 0)
        for (auto& n : v) n /= g;
    if (!v.empty() && v.back() < 0)
        for (auto& n : v) n = -n;
    return v;
}

Poly from_integers(const Field& F, const std::vector<mpz_class>& v)
{
    Poly p;
    for (auto& n : v) p.push_back(F.from_mpz(n));
    poly::trim(F, p);
    return p;
}

mpz_class symmetric(const mpz_class& a, const mpz_class& P)
{
    mpz_class r = a % P;
    if (r < 0) r += P;
    if (2 * r > P) r -= P;
    return r;
}

// Factor a squarefree primitive integer polynomial of degree >= 2.
std::vector<Poly> zassenhaus(const Field& Q, const std::vector<mpz_class>& G)
{
    int n = static_cast<int>(G.size()) - 1;
    mpz_class maxc = 0;
    for (auto& c : G) maxc = std::max(maxc, mpz_class(abs(c)));
    mpz_class lc = G.back();
    mpz_class bound = maxc * abs(lc) * (mpz_class(1) << n);
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), mpz_class(n + 1).get_mpz_t());
    bound *= (s + 1);
    mpz_class P = 2 * bound + 1;
    FieldPtr Fp;
    Poly gp;
    for (;;) {
        mpz_nextprime(P.get_mpz_t(), P.get_mpz_t());
        if (lc % P == 0) continue;
        Fp = Field::prime(P);
        gp.clear();
        for (auto& c : G) gp.push_back(Fp->from_mpz(c));
        poly::trim(*Fp, gp);
        if (poly::deg(poly::gcd(*Fp, gp, poly::deriv(*Fp, gp))) == 0) break;
    }
    std::vector<Poly> modular;
    for (auto& [f, m] : factor_finite(*Fp, gp)) modular.push_back(f);

    std::vector<Poly> out;
    Poly rest = from_integers(Q, G);
    mpz_class rest_lc = lc;
    std::vector<bool> used(modular.size(), false);
    size_t remaining = modular.size();
    for (size_t k = 1; 2 * k <= remaining; ++k) {
        bool again = true;
        while (again && 2 * k <= remaining) {
            again = false;
            std::vector<size_t> idx;
            for (size_t i = 0; i < modular.size(); ++i)
                if (!used[i]) idx.push_back(i);
            std::vector<bool> pick(idx.size(), false);
            std::fill(pick.end() - static_cast<long>(k), pick.end(), true);
            do {
                Poly prod = poly::constant(*Fp, Fp->from_mpz(rest_lc));
                for (size_t j = 0; j < idx.size(); ++j)
                    if (pick[j]) prod = poly::mul(*Fp, prod, modular[idx[j]]);
                std::vector<mpz_class> cand;
                for (auto& c : prod) cand.push_back(symmetric(c.q.get_num(), P));
                Poly cq = from_integers(Q, cand);
                cq = from_integers(Q, primitive_integer(cq));
                if (poly::is_zero(poly::rem(Q, rest, cq))) {
                    out.push_back(poly::monic(Q, cq));
                    rest = poly::quo(Q, rest, cq);
                    std::vector<mpz_class> ri = primitive_integer(rest);
                    rest = from_integers(Q, ri);
                    rest_lc = ri.back();
                    for (size_t j = 0; j < idx.size(); ++j)
                        if (pick[j]) used[idx[j]] = true;
                    remaining -= k;
                    again = true;
                    break;
                }
            } while (std::next_permutation(pick.begin(), pick.end()));
        }
    }
    if (poly::deg(rest) > 0) out.push_back(poly::monic(Q, rest));
    return out;
}

Factors factor_rationals(const Field& Q, const Poly& f)
{
    Factors out;
    for (auto& [g, m] : squarefree_char0(Q, f)) {
        if (poly::deg(g) == 1) {
            out.push_back({g, m});
            continue;
        }
        for (auto& h : zassenhaus(Q, primitive_integer(g))) out.push_back({h, m});
    }
    return out;
}

Factors factor_any(const Field& F, const Poly& f);

Elem conjugate(const Field& K, const Elem& e)
{
    const Field& B = *K.base();
    const Poly& m = K.minpoly();
    Elem c0 = e.num.size() > 0 ? e.num[0] : B.zero();
    Elem c1 = e.num.size() > 1 ? e.num[1] : B.zero();
    Elem r;
    r.num = {B.sub(c0, B.mul(m[1], c1)), B.neg(c1)};
    poly::trim(B, r.num);
    return r;
}

// N_{K/B}(g) by interpolation through integer points.
Poly norm_poly(const Field& K, const Poly& g)
{
    const Field& B = *K.base();
    int D = K.degree() * poly::deg(g);
    std::vector<Elem> xs, ys;
    for (int i = 0; i <= D; ++i) {
        xs.push_back(B.from_int(i));
        ys.push_back(norm(K, B, poly::eval(K, g, K.embed(xs.back()))));
    }
    // Newton divided differences
    std::vector<Elem> c = ys;
    for (int j = 1; j <= D; ++j)
        for (int i = D; i >= j; --i) c[i] = B.div(B.sub(c[i], c[i - 1]), B.sub(xs[i], xs[i - j]));
    Poly out{c[D]};
    for (int i = D - 1; i >= 0; --i) {
        out = poly::mul(B, out, Poly{B.neg(xs[i]), B.one()});
        out = poly::add(B, out, Poly{c[i]});
    }
    poly::trim(B, out);
    return out;
}

// Norm descent for a simple step K = B(alpha).
Factors factor_simple_step(const Field& K, const Poly& f)
{
    const Field& B = *K.base();
    Factors out;
    for (auto& [g, m] : squarefree_char0(K, f)) {
        if (poly::deg(g) == 1) {
            out.push_back({g, m});
            continue;
        }
        Elem alpha = K.generator();
        for (long s = 0;; s = s > 0 ? -s : 1 - s) {
            Poly shift{K.mul(K.from_int(-s), alpha), K.one()};  // x - s*alpha
            poly::trim(K, shift);
            Poly gs = poly::compose(K, g, shift);
            Poly nb;
            if (K.degree() == 2) {
                Poly gc;
                for (auto& c : gs) gc.push_back(conjugate(K, c));
                Poly nk = poly::mul(K, gs, gc);
                bool ok = true;
                for (auto& c : nk) {
                    if (c.num.size() > 1) ok = false;
                    nb.push_back(c.num.empty() ? B.zero() : c.num[0]);
                }
                if (!ok) throw Error(ErrorCode::UnsupportedField, "norm did not descend");
                poly::trim(B, nb);
            } else {
                nb = norm_poly(K, gs);
            }
            if (poly::deg(poly::gcd(B, nb, poly::deriv(B, nb))) > 0) continue;
            Factors nf = factor_any(B, nb);
            Poly back{K.mul(K.from_int(s), alpha), K.one()};  // x + s*alpha
            poly::trim(K, back);
            for (auto& [h, mh] : nf) {
                Poly hk = poly::embed(K, B, h);
                Poly gi = poly::gcd(K, gs, hk);
                if (poly::deg(gi) > 0) out.push_back({poly::monic(K, poly::compose(K, gi, back)), m});
            }
            break;
        }
    }
    return out;
}

Factors factor_small(const Field& F, const Poly& f)
{
    // degree <= 2 by the quadratic formula
    Factors out;
    Poly g = poly::monic(F, f);
    if (poly::deg(g) == 1) return {{g, 1}};
    Elem b = g[1], c = g[0];
    Elem disc = F.sub(F.mul(b, b), F.mul(F.from_int(4), c));
    auto r = sqrt(F, disc);
    if (!r) return {{g, 1}};
    Elem half = F.inv(F.from_int(2));
    Elem r1 = F.mul(F.sub(F.neg(b), *r), half), r2 = F.mul(F.add(F.neg(b), *r), half);
    out.push_back({Poly{F.neg(r1), F.one()}, 1});
    out.push_back({Poly{F.neg(r2), F.one()}, 1});
    merge(F, out);
    return out;
}

Factors factor_any(const Field& F, const Poly& f)
{
    int d = poly::deg(f);
    if (d < 1) return {};
    if (d == 1) return {{poly::monic(F, f), 1}};
    if (F.is_finite()) return factor_finite(F, f);
    if (F.kind() == Field::Kind::Rationals) return factor_rationals(F, f);
    if (F.kind() == Field::Kind::SimpleExtension && F.characteristic() == 0) return factor_simple_step(F, f);
    if (d == 2) return factor_small(F, f);
    throw Error(ErrorCode::UnsupportedField, "no factorization of degree " + std::to_string(d) + " over " +
                                                 F.descriptor());
}

int cap_for(const Field& F)
{
    if (F.is_finite()) return factor_caps().finite;
    if (F.kind() == Field::Kind::Rationals) return factor_caps().rationals;
    return factor_caps().other;
}

}  // namespace

std::vector<std::pair<Poly, int>> squarefree(const Field& F, const Poly& p)
{
    if (F.characteristic() == 0) return squarefree_char0(F, p);
    if (F.is_finite()) return squarefree_finite(F, p);
    Poly f = poly::monic(F, p);
    if (poly::deg(f) < 1) return {};
    Poly d = poly::deriv(F, f);
    if (!poly::is_zero(d) && poly::deg(poly::gcd(F, f, d)) == 0) return {{f, 1}};
    throw Error(ErrorCode::UnsupportedField, "square-free decomposition over " + F.descriptor());
}

Factorization factor(const Field& F, const Poly& p0)
{
    Poly p = p0;
    poly::trim(F, p);
    if (p.empty()) throw Error(ErrorCode::InvalidArgument, "factor of the zero polynomial");
    int d = poly::deg(p);
    if (d > cap_for(F))
        throw Error(ErrorCode::DegreeCapExceeded,
                    "degree " + std::to_string(d) + " over " + F.descriptor() + " exceeds the cap");
    Factorization out;
    out.unit = poly::lc(p);
    out.factors = factor_any(F, p);
    merge(F, out.factors);
    return out;
}

Poly expand(const Field& F, const Factorization& f)
{
    Poly r = poly::constant(F, f.unit);
    for (auto& [g, m] : f.factors) r = poly::mul(F, r, poly::pow(F, g, static_cast<unsigned>(m)));
    return r;
}

Tri is_irreducible(const Field& F, const Poly& p)
{
    int d = poly::deg(p);
    if (d < 1) return Tri::No;
    if (d == 1) return Tri::Yes;
    try {
        Factorization f = factor(F, p);
        return tri_of(f.factors.size() == 1 && f.factors[0].second == 1);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::UnsupportedField || e.code() == ErrorCode::DegreeCapExceeded) return Tri::Unknown;
        throw;
    }
}

std::vector<Elem> roots(const Field& F, const Poly& p)
{
    std::vector<Elem> out;
    for (auto& [g, m] : factor(F, p).factors)
        if (poly::deg(g) == 1) out.push_back(F.neg(g[0]));
    return out;
}

namespace {

std::optional<Elem> sqrt_finite(const Field& F, const Elem& a)
{
    if (F.is_zero(a)) return F.zero();
    mpz_class e = (F.size() - 1) / 2;
    if (!F.is_one(F.pow(a, e))) return std::nullopt;
    std::mt19937_64 rng(0xabcdef);
    Poly g{F.neg(a), F.zero(), F.one()};
    for (;;) {
        Poly r{F.random(rng), F.one()};
        Poly b = poly::sub(F, poly::powmod(F, r, e, g), poly::constant(F, F.one()));
        Poly h = poly::gcd(F, b, g);
        if (poly::deg(h) == 1) {
            Elem x = F.neg(h[0]);
            // canonical choice: the root with the smaller enumeration index
            Elem y = F.neg(x);
            return F.cmp(x, y) <= 0 ? x : y;
        }
    }
}

std::optional<Poly> sqrt_poly(const Field& B, const Poly& g)
{
    if (g.empty()) return Poly{};
    int d = poly::deg(g);
    if (d % 2) return std::nullopt;
    auto c = sqrt(B, poly::lc(g));
    if (!c) return std::nullopt;
    Poly m = poly::monic(B, g);
    int k = d / 2;
    // h monic of degree k with h^2 = m, coefficients from the top down
    Poly h(k + 1, B.zero());
    h[k] = B.one();
    Elem half = B.inv(B.from_int(2));
    for (int i = k - 1; i >= 0; --i) {
        // coefficient of x^(k+i) in h^2 is 2 h_i + sum_{j>i, l>i, j+l=k+i} h_j h_l
        Elem s = B.zero();
        for (int j = i + 1; j <= k; ++j) {
            int l = k + i - j;
            if (l > i && l <= k) s = B.add(s, B.mul(h[j], h[l]));
        }
        h[i] = B.mul(B.sub(m[k + i], s), half);
    }
    if (!poly::eq(B, poly::mul(B, h, h), m)) return std::nullopt;
    return poly::scale(B, h, *c);
}

}  // namespace

std::optional<Elem> sqrt(const Field& F, const Elem& a)
{
    if (F.is_zero(a)) return F.zero();
    switch (F.kind()) {
    case Field::Kind::Rationals: {
        mpz_class n = a.q.get_num(), d = a.q.get_den();
        if (n < 0 || !mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
        return F.from_rational(mpq_class(rn, rd));
    }
    case Field::Kind::PrimeFinite: return sqrt_finite(F, a);
    case Field::Kind::SimpleExtension: {
        if (F.is_finite()) return sqrt_finite(F, a);
        // a square has a square norm; cheap rejection before factoring
        if (is_square(*F.base(), norm(F, *F.base(), a)) == Tri::No) return std::nullopt;
        if (F.characteristic() != 0) {
            // elements of the base with a root there; nothing else is decided
            if (a.num.size() <= 1) {
                auto r = sqrt(*F.base(), a.num.empty() ? F.base()->zero() : a.num[0]);
                if (r) return F.embed(*r);
            }
            throw Error(ErrorCode::UnsupportedField, "square roots in " + F.descriptor());
        }
        Poly g{F.neg(a), F.zero(), F.one()};
        Factors fs = factor_simple_step(F, g);
        for (auto& [h, m] : fs)
            if (poly::deg(h) == 1) {
                Elem x = F.neg(h[0]), y = h[0];
                return F.cmp(x, y) <= 0 ? x : y;
            }
        return std::nullopt;
    }
    case Field::Kind::RationalFunction: {
        const Field& B = *F.base();
        auto n = sqrt_poly(B, a.num);
        if (!n) return std::nullopt;
        auto d = sqrt_poly(B, a.den);
        if (!d) return std::nullopt;
        Elem r;
        r.num = *n;
        r.den = *d;
        return F.mul(r, F.one());  // re-normalize
    }
    }
    return std::nullopt;
}

Tri is_square(const Field& F, const Elem& a)
{
    try {
        return tri_of(sqrt(F, a).has_value());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::UnsupportedField || e.code() == ErrorCode::DegreeCapExceeded) return Tri::Unknown;
        throw;
    }
}

namespace {

Elem smallest_nonresidue(const Field& F)
{
    for (mpz_class i = 1;; ++i) {
        Elem e = F.element_at(i);
        if (!F.is_zero(e) && !sqrt_finite(F, e)) return e;
    }
}

}  // namespace

SquareClass square_class(const Field& F, const Elem& a)
{
    if (F.is_zero(a)) throw Error(ErrorCode::InvalidArgument, "square class of zero");
    SquareClass sc;
    if (F.kind() == Field::Kind::Rationals) {
        mpz_class nd = a.q.get_num() * a.q.get_den();
        mpz_class r = integer::squarefree_part(nd);
        sc.rep = F.from_mpz(r);
        sc.witness = sqrt(F, F.div(a, sc.rep));
        return sc;
    }
    if (F.is_finite()) {
        auto s = sqrt_finite(F, a);
        if (s) {
            sc.rep = F.one();
            sc.witness = s;
        } else {
            sc.rep = smallest_nonresidue(F);
            sc.witness = sqrt_finite(F, F.div(a, sc.rep));
        }
        return sc;
    }
    if (F.kind() == Field::Kind::RationalFunction) {
        const Field& B = *F.base();
        try {
            Elem c = B.div(poly::lc(a.num), poly::lc(a.den));
            SquareClass cb = square_class(B, c);
            Poly rep = poly::constant(B, cb.rep);
            for (const Poly* part : {&a.num, &a.den})
                for (auto& [g, m] : factor(B, *part).factors)
                    if (m % 2) rep = poly::mul(B, rep, g);
            Elem r;
            r.num = rep;
            r.den = {B.one()};
            sc.rep = r;
            sc.canonical = cb.canonical;
            sc.witness = sqrt(F, F.div(a, r));
            return sc;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::UnsupportedField && e.code() != ErrorCode::DegreeCapExceeded) throw;
        }
    }
    std::optional<Elem> s;
    try {
        s = sqrt(F, a);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::UnsupportedField && e.code() != ErrorCode::DegreeCapExceeded) throw;
    }
    sc.canonical = false;
    if (s) {
        sc.rep = F.one();
        sc.witness = s;
    } else {
        sc.rep = a;
        sc.witness = F.one();
    }
    return sc;
}

std::pair<Poly, int> separable_decompose(const Field& F, const Poly& p)
{
    if (F.characteristic() == 0) return {p, 0};
    unsigned long l = F.characteristic().get_ui();
    Poly cur = p;
    int m = 0;
    for (;;) {
        if (poly::deg(cur) < 1) break;
        bool all = true;
        for (size_t i = 0; i < cur.size(); ++i)
            if (i % l && !F.is_zero(cur[i])) all = false;
        if (!all) break;
        Poly next;
        for (size_t i = 0; i < cur.size(); i += l) next.push_back(cur[i]);
        cur = next;
        ++m;
    }
    return {cur, m};
}

}  // namespace mwk
