#include "mwk/quadratic.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "mwk/factor.hpp"

namespace mwk {

namespace {

mpz_class as_integer(const mpq_class& a) { return a.get_num() * a.get_den(); }

long strip(mpz_class& u, const mpz_class& p)
{
    long k = 0;
    while (u % p == 0) {
        u /= p;
        ++k;
    }
    return k;
}

int legendre(const mpz_class& a, const mpz_class& p) { return mpz_legendre(a.get_mpz_t(), p.get_mpz_t()); }

int mod8(const mpz_class& u)
{
    mpz_class r = u % 8;
    if (r < 0) r += 8;
    return static_cast<int>(r.get_si());
}

bool is_quadratic_over_q(const Field& F)
{
    return F.kind() == Field::Kind::SimpleExtension && F.degree() == 2 && F.base()->kind() == Field::Kind::Rationals;
}

mpq_class quadratic_disc(const Field& F)
{
    const Poly& m = F.minpoly();
    return m[1].q * m[1].q - 4 * m[0].q;
}

}  // namespace

int hilbert_symbol(const mpq_class& a0, const mpq_class& b0, const mpz_class& p)
{
    mpz_class a = as_integer(a0), b = as_integer(b0);
    if (a == 0 || b == 0) throw Error(ErrorCode::InvalidArgument, "Hilbert symbol of zero");
    if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
    mpz_class u = a, v = b;
    long al = strip(u, p), be = strip(v, p);
    if (p == 2) {
        int uu = mod8(u), vv = mod8(v);
        int eu = ((uu - 1) / 2) % 2, ev = ((vv - 1) / 2) % 2;
        int wu = ((uu * uu - 1) / 8) % 2, wv = ((vv * vv - 1) / 8) % 2;
        long e = eu * ev + al * wv + be * wu;
        return e % 2 ? -1 : 1;
    }
    int s = 1;
    mpz_class half = (p - 1) / 2;
    if ((al * be) % 2 && half % 2 == 1) s = -s;
    if (be % 2 && legendre(u, p) == -1) s = -s;
    if (al % 2 && legendre(v, p) == -1) s = -s;
    return s;
}

int hasse_invariant(const Form& f, const mpz_class& p)
{
    int s = 1;
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = i + 1; j < f.size(); ++j) s *= hilbert_symbol(f[i].q, f[j].q, p);
    return s;
}

std::vector<mpz_class> relevant_primes(const Form& f)
{
    std::set<mpz_class> ps{2};
    for (auto& e : f) {
        mpz_class n = as_integer(e.q);
        for (auto& [p, k] : integer::factor(n)) ps.insert(p);
    }
    return {ps.begin(), ps.end()};
}

int real_places(const Field& F)
{
    if (F.kind() == Field::Kind::Rationals) return 1;
    if (is_quadratic_over_q(F) && quadratic_disc(F) > 0) return 2;
    return 0;
}

int real_sign(const Field& F, const Elem& a, int place)
{
    if (F.kind() == Field::Kind::Rationals) return sgn(a.q);
    // a = c0 + c1*x with x = (-b +- sqrt(D))/2, so a = A + B sqrt(D)
    const Poly& m = F.minpoly();
    mpq_class c0 = a.num.size() > 0 ? a.num[0].q : mpq_class(0);
    mpq_class c1 = a.num.size() > 1 ? a.num[1].q : mpq_class(0);
    mpq_class D = quadratic_disc(F);
    mpq_class A = c0 - c1 * m[1].q / 2;
    mpq_class B = (place == 0 ? -c1 : c1) / 2;
    int sa = sgn(A), sb = sgn(B);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    mpq_class lhs = A * A, rhs = B * B * D;
    return lhs > rhs ? sa : sb;
}

InvariantRecord invariants(const Field& F, const Form& f)
{
    InvariantRecord r;
    r.rank = static_cast<long>(f.size());
    Elem d = F.one();
    for (auto& e : f) {
        if (F.is_zero(e)) throw Error(ErrorCode::InvalidArgument, "zero diagonal entry");
        d = F.mul(d, e);
    }
    SquareClass sc = square_class(F, d);
    r.det = sc.rep;
    r.det_canonical = sc.canonical;
    int places = real_places(F);
    for (int pl = 0; pl < places; ++pl) {
        long s = 0;
        for (auto& e : f) s += real_sign(F, e, pl);
        r.signatures.push_back(s);
    }
    if (F.kind() == Field::Kind::Rationals)
        for (auto& p : relevant_primes(f)) r.hasse.push_back({p, hasse_invariant(f, p)});
    return r;
}

std::string InvariantRecord::str(const Field& F) const
{
    std::string s = "rank=" + std::to_string(rank) + " det=" + F.str(det);
    if (!det_canonical) s += "(noncanonical)";
    if (!signatures.empty()) {
        s += " signature=";
        for (size_t i = 0; i < signatures.size(); ++i) s += (i ? "," : "") + std::to_string(signatures[i]);
    }
    if (!hasse.empty()) {
        s += " hasse=";
        for (size_t i = 0; i < hasse.size(); ++i)
            s += (i ? "," : "") + hasse[i].first.get_str() + ":" + std::to_string(hasse[i].second);
    }
    return s;
}

Form witt_neg(const Field& F, const Form& f)
{
    Form r;
    for (auto& e : f) r.push_back(F.neg(e));
    return r;
}

Form witt_add(const Form& a, const Form& b)
{
    Form r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

Form witt_mul(const Field& F, const Form& a, const Form& b)
{
    Form r;
    for (auto& x : a)
        for (auto& y : b) r.push_back(F.mul(x, y));
    return r;
}

Form witt_scale(const Field& F, const Form& f, const Elem& c)
{
    Form r;
    for (auto& x : f) r.push_back(F.mul(x, c));
    return r;
}

Form witt_multiple(const Field& F, const Form& f, const mpz_class& c)
{
    Form base = c < 0 ? witt_neg(F, f) : f;
    Form r;
    for (mpz_class i = 0; i < abs(c); ++i) r.insert(r.end(), base.begin(), base.end());
    return r;
}

Form witt_cancel(const Field& F, const Form& f)
{
    Form reps;
    bool canonical = true;
    for (auto& e : f) {
        SquareClass sc = square_class(F, e);
        canonical = canonical && sc.canonical;
        reps.push_back(sc.rep);
    }
    Form out;
    if (canonical) {
        for (auto& x : reps) {
            Elem nx = square_class(F, F.neg(x)).rep;
            auto it = std::find_if(out.begin(), out.end(), [&](const Elem& y) { return F.eq(y, nx); });
            if (it != out.end())
                out.erase(it);
            else
                out.push_back(x);
        }
    } else {
        for (auto& x : reps) {
            auto it = std::find_if(out.begin(), out.end(),
                                   [&](const Elem& y) { return is_square(F, F.neg(F.mul(x, y))) == Tri::Yes; });
            if (it != out.end())
                out.erase(it);
            else
                out.push_back(x);
        }
    }
    std::sort(out.begin(), out.end(), [&](const Elem& a, const Elem& b) { return F.cmp(a, b) < 0; });
    return out;
}

namespace {

// squarefree part of a*b for squarefree a, b
mpz_class sqf_mul(const mpz_class& a, const mpz_class& b)
{
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return (a / g) * (b / g);
}

Tri witt_zero_q(const Form& f0)
{
    // entries become squarefree integers, so the discriminant never needs a big factorization
    Form f = witt_cancel(*Field::rationals(), f0);
    if (f.empty()) return Tri::Yes;
    long r = static_cast<long>(f.size());
    long s = 0;
    for (auto& e : f) s += sgn(e.q);
    if (s != 0) return Tri::No;
    mpz_class d = (r / 2) % 2 ? -1 : 1;
    for (auto& e : f) d = sqf_mul(d, integer::squarefree_part(as_integer(e.q)));
    if (d != 1) return Tri::No;
    Form h;
    for (long i = 0; i < r / 2; ++i) {
        h.push_back(Field::rationals()->from_int(1));
        h.push_back(Field::rationals()->from_int(-1));
    }
    for (auto& p : relevant_primes(f))
        if (hasse_invariant(f, p) != hasse_invariant(h, p)) return Tri::No;
    return Tri::Yes;
}

Tri witt_zero_finite(const Field& F, const Form& f)
{
    Elem d = F.one();
    for (auto& e : f) d = F.mul(d, e);
    if ((f.size() / 2) % 2) d = F.neg(d);
    return tri_of(is_square(F, d) == Tri::Yes);
}

Tri witt_zero_function_field(const Field& F, const Form& f)
{
    const Field& B = *F.base();
    std::vector<Poly> places;
    auto add_places = [&](const Poly& p) {
        for (auto& [g, m] : factor(B, p).factors)
            if (std::none_of(places.begin(), places.end(), [&](const Poly& h) { return poly::eq(B, g, h); }))
                places.push_back(g);
    };
    for (auto& e : f) {
        add_places(e.num);
        add_places(e.den);
    }
    FieldPtr Fp = F.self();
    Tri acc = Tri::Yes;
    for (auto& P : places) {
        PointValuation v = PointValuation::at_poly(Fp, P);
        Form second;
        for (auto& e : f) {
            Valued val = valuation(v, e);
            if (val.order % 2) second.push_back(val.unit);
        }
        Tri t = witt_zero(*v.residue, second);
        if (t == Tri::No) return Tri::No;
        acc = tri_and(acc, t);
    }
    PointValuation inf = PointValuation::at_infinity(Fp);
    Form first;
    for (auto& e : f) {
        Valued val = valuation(inf, e);
        if (val.order % 2 == 0) first.push_back(val.unit);
    }
    if (acc == Tri::Unknown) return Tri::Unknown;
    return witt_zero(B, first);
}

Tri witt_zero_quadratic(const Field& F, const Form& f)
{
    Elem d = F.one();
    for (auto& e : f) d = F.mul(d, e);
    if ((f.size() / 2) % 2) d = F.neg(d);
    Tri sq = is_square(F, d);
    if (sq == Tri::No) return Tri::No;
    for (int pl = 0; pl < real_places(F); ++pl) {
        long s = 0;
        for (auto& e : f) s += real_sign(F, e, pl);
        if (s != 0) return Tri::No;
    }
    return Tri::Unknown;
}

}  // namespace

Tri witt_zero(const Field& F, const Form& f0)
{
    if (f0.empty()) return Tri::Yes;
    Form f;
    try {
        f = witt_cancel(F, f0);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::UnsupportedField && e.code() != ErrorCode::DegreeCapExceeded) throw;
        f = f0;
    }
    if (f.empty()) return Tri::Yes;
    if (f.size() % 2) return Tri::No;
    try {
        if (F.kind() == Field::Kind::Rationals) return witt_zero_q(f);
        if (F.is_finite()) return witt_zero_finite(F, f);
        if (F.kind() == Field::Kind::RationalFunction) return witt_zero_function_field(F, f);
        if (is_quadratic_over_q(F)) return witt_zero_quadratic(F, f);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::UnsupportedField && e.code() != ErrorCode::DegreeCapExceeded) throw;
    }
    return Tri::Unknown;
}

Tri witt_equal(const Field& F, const Form& a, const Form& b) { return witt_zero(F, witt_add(a, witt_neg(F, b))); }

GW gw_of(const Form& f) { return GW{mpz_class(static_cast<long>(f.size())), f}; }

GW gw_add(const GW& a, const GW& b) { return GW{a.rank + b.rank, witt_add(a.form, b.form)}; }

GW gw_neg(const Field& F, const GW& a) { return GW{-a.rank, witt_neg(F, a.form)}; }

GW gw_mul(const Field& F, const GW& a, const GW& b) { return GW{a.rank * b.rank, witt_mul(F, a.form, b.form)}; }

Tri gw_equal(const Field& F, const GW& a, const GW& b)
{
    if (a.rank != b.rank) return Tri::No;
    return witt_equal(F, a.form, b.form);
}

// ---------------------------------------------------------------------------

namespace {

Form decompose_finite(const Field& F, const Form& f)
{
    Form c = witt_cancel(F, f);
    Elem d = F.one();
    for (auto& e : c) d = F.mul(d, e);
    if (c.size() % 2) return {square_class(F, d).rep};
    Elem signed_d = (c.size() / 2) % 2 ? F.neg(d) : d;
    if (is_square(F, signed_d) == Tri::Yes) return {};
    Form out{F.one(), square_class(F, F.neg(signed_d)).rep};
    std::sort(out.begin(), out.end(), [&](const Elem& a, const Elem& b) { return F.cmp(a, b) < 0; });
    return out;
}

std::vector<mpz_class> squarefree_lattice(const std::vector<mpz_class>& primes)
{
    std::vector<mpz_class> pos{1};
    for (auto& p : primes) {
        size_t n = pos.size();
        for (size_t i = 0; i < n; ++i) pos.push_back(pos[i] * p);
    }
    std::sort(pos.begin(), pos.end());
    std::vector<mpz_class> out;
    for (auto& x : pos) {
        out.push_back(x);
        out.push_back(-x);
    }
    return out;
}

// target is Witt-cancelled, so its entries are squarefree integers whose primes lie in `primes`
std::optional<Form> search_q(const Form& target, long m, const std::vector<mpz_class>& S,
                             const std::vector<mpz_class>& primes)
{
    const FieldPtr& Q = Field::rationals();
    long r = static_cast<long>(target.size());
    long s = 0;
    mpz_class dsq = 1;
    for (auto& e : target) {
        s += sgn(e.q);
        dsq = sqf_mul(dsq, integer::squarefree_part(as_integer(e.q)));
    }
    if (std::abs(s) > m || (m - s) % 2) return std::nullopt;
    mpq_class dt(dsq);
    if ((r - m) / 2 % 2) dsq = -dsq;
    if (m == 0) return witt_zero_q(target) == Tri::Yes ? std::optional<Form>(Form{}) : std::nullopt;
    // target + (-cand) is Witt-zero iff signature, discriminant and every Hasse invariant match
    // the hyperbolic form; c(f + g) = c(f) c(g) (det f, det g)
    std::vector<int> ct;
    Form hyp;
    for (long i = 0; i < (r + m) / 2; ++i) {
        hyp.push_back(Q->from_int(1));
        hyp.push_back(Q->from_int(-1));
    }
    std::vector<int> ch;
    for (auto& p : primes) {
        ct.push_back(hasse_invariant(target, p));
        ch.push_back(hasse_invariant(hyp, p));
    }
    std::vector<size_t> idx(m - 1, 0);
    // large supports make the search hopeless; the caller keeps its input
    long budget = 20000;
    for (;; --budget) {
        if (budget == 0) return std::nullopt;
        mpz_class last = dsq;
        Form cand;
        for (auto i : idx) {
            last = sqf_mul(last, S[i]);
            cand.push_back(Q->from_mpz(S[i]));
        }
        cand.push_back(Q->from_mpz(last));
        long cs = 0;
        for (auto& e : cand) cs += sgn(e.q);
        bool hit = cs == s;
        if (hit) {
            Form neg = witt_neg(*Q, cand);
            mpq_class dn = 1;
            for (auto& e : neg) dn *= e.q;
            for (size_t k = 0; k < primes.size() && hit; ++k)
                hit = ct[k] * hasse_invariant(neg, primes[k]) * hilbert_symbol(dt, dn, primes[k]) == ch[k];
        }
        if (hit) {
            std::sort(cand.begin(), cand.end(), [](const Elem& a, const Elem& b) { return a.q < b.q; });
            return cand;
        }
        // next nondecreasing index tuple
        int k = static_cast<int>(idx.size()) - 1;
        while (k >= 0 && idx[k] + 1 >= S.size()) --k;
        if (k < 0) return std::nullopt;
        ++idx[k];
        for (size_t j = k + 1; j < idx.size(); ++j) idx[j] = idx[k];
    }
}

Form decompose_q(const Form& f)
{
    const FieldPtr& Q = Field::rationals();
    Form c = witt_cancel(*Q, f);
    if (c.empty()) return {};
    long s = 0;
    for (auto& e : c) s += sgn(e.q);
    Form prefix, rest = c;
    if (std::abs(s) > 4) {
        long k = std::abs(s) - 4;
        Elem u = Q->from_int(s > 0 ? 1 : -1);
        for (long i = 0; i < k; ++i) {
            prefix.push_back(u);
            rest.push_back(Q->neg(u));
        }
        rest = witt_cancel(*Q, rest);
    }
    std::vector<mpz_class> support;
    for (auto& p : relevant_primes(rest)) support.push_back(p);
    // the lattice has 2^|support| elements
    if (support.size() > 12) return c;
    std::vector<mpz_class> extra{3, 5, 7, 11, 13};
    long parity = static_cast<long>(rest.size()) % 2;
    for (size_t round = 0; round <= extra.size(); ++round) {
        auto S = squarefree_lattice(support);
        for (long m = parity; m <= std::min<long>(4, static_cast<long>(rest.size())); m += 2) {
            auto hit = search_q(rest, m, S, support);
            if (hit) {
                Form out = prefix;
                out.insert(out.end(), hit->begin(), hit->end());
                std::sort(out.begin(), out.end(), [](const Elem& a, const Elem& b) { return a.q < b.q; });
                return out;
            }
        }
        if (round < extra.size() && std::find(support.begin(), support.end(), extra[round]) == support.end())
            support.push_back(extra[round]);
    }
    return c;  // unreachable in practice; still a valid representative
}

}  // namespace

WittDecomposition witt_decompose(const Field& F, const Form& f)
{
    Form an;
    if (F.kind() == Field::Kind::Rationals)
        an = decompose_q(f);
    else if (F.is_finite())
        an = decompose_finite(F, f);
    else
        throw Error(ErrorCode::UnsupportedField, "Witt decomposition over " + F.descriptor());
    return WittDecomposition{(static_cast<long>(f.size()) - static_cast<long>(an.size())) / 2, an};
}

std::string form_str(const Field& F, const Form& f)
{
    std::string s = "<";
    for (size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + F.str(f[i]);
    return s + ">";
}

std::string gw_str(const Field& F, const GW& g)
{
    Form an;
    bool decided = F.kind() == Field::Kind::Rationals || F.is_finite();
    if (decided)
        an = witt_decompose(F, g.form).anisotropic;
    else {
        try {
            an = witt_cancel(F, g.form);
        } catch (const Error&) {
            an = g.form;
        }
    }
    mpz_class k = (g.rank - static_cast<long>(an.size())) / 2;
    std::vector<std::string> terms;
    for (auto& e : an) terms.push_back("<" + F.str(e) + ">");
    if (k == 1)
        terms.push_back("h");
    else if (k == -1)
        terms.push_back("-h");
    else if (k != 0)
        terms.push_back(k.get_str() + "*h");
    if (terms.empty()) return "0";
    std::string out = terms[0];
    for (size_t i = 1; i < terms.size(); ++i)
        out += terms[i][0] == '-' ? " - " + terms[i].substr(1) : " + " + terms[i];
    return out;
}

Tri in_fundamental_power(const Field& F, const Form& f0, int n)
{
    if (n <= 0) return Tri::Yes;
    Form f;
    try {
        f = witt_cancel(F, f0);
    } catch (const Error&) {
        f = f0;
    }
    if (f.size() % 2) return Tri::No;
    if (n == 1 || f.empty()) return Tri::Yes;
    Elem d = F.one();
    for (auto& e : f) d = F.mul(d, e);
    if ((f.size() / 2) % 2) d = F.neg(d);
    Tri disc = is_square(F, d);
    if (disc != Tri::Yes || n == 2) return disc;
    if (F.is_finite()) return witt_zero(F, f);
    if (F.kind() == Field::Kind::Rationals) {
        Form h;
        for (size_t i = 0; i < f.size() / 2; ++i) {
            h.push_back(F.from_int(1));
            h.push_back(F.from_int(-1));
        }
        for (auto& p : relevant_primes(f))
            if (hasse_invariant(f, p) != hasse_invariant(h, p)) return Tri::No;
        long s = 0;
        for (auto& e : f) s += sgn(e.q);
        mpz_class mod = mpz_class(1) << n;
        return tri_of(mpz_class(s) % mod == 0);
    }
    return witt_zero(F, f) == Tri::Yes ? Tri::Yes : Tri::Unknown;
}

Form pfister(const Field& F, const std::vector<Elem>& a)
{
    Form cur{F.one()};
    for (auto& x : a) {
        Form next;
        for (auto& y : cur) {
            next.push_back(F.mul(y, x));
            next.push_back(F.neg(y));
        }
        cur = std::move(next);
    }
    return cur;
}

Form diagonalize(const Field& L, std::vector<std::vector<Elem>> G)
{
    Form out;
    size_t n = G.size();
    std::vector<bool> done(n, false);
    for (size_t step = 0; step < n; ++step) {
        long piv = -1;
        for (size_t i = 0; i < n && piv < 0; ++i)
            if (!done[i] && !L.is_zero(G[i][i])) piv = static_cast<long>(i);
        if (piv < 0) {
            // all remaining diagonal entries vanish: e_i <- e_i + e_j
            long pi = -1, pj = -1;
            for (size_t i = 0; i < n && pi < 0; ++i)
                for (size_t j = 0; j < n; ++j)
                    if (!done[i] && !done[j] && i != j && !L.is_zero(G[i][j])) {
                        pi = static_cast<long>(i);
                        pj = static_cast<long>(j);
                        break;
                    }
            if (pi < 0) throw Error(ErrorCode::InvalidArgument, "degenerate bilinear form");
            for (size_t k = 0; k < n; ++k) G[pi][k] = L.add(G[pi][k], G[pj][k]);
            for (size_t k = 0; k < n; ++k) G[k][pi] = L.add(G[k][pi], G[k][pj]);
            piv = pi;
        }
        size_t p = static_cast<size_t>(piv);
        Elem a = G[p][p];
        out.push_back(a);
        done[p] = true;
        Elem ia = L.inv(a);
        for (size_t k = 0; k < n; ++k) {
            if (done[k] || L.is_zero(G[k][p])) continue;
            Elem f = L.mul(G[k][p], ia);
            for (size_t l = 0; l < n; ++l)
                if (!done[l]) G[k][l] = L.sub(G[k][l], L.mul(f, G[p][l]));
        }
        for (size_t k = 0; k < n; ++k)
            if (!done[k]) G[p][k] = G[k][p] = L.zero();
    }
    return out;
}

Form scharlau_transfer(const Functional& f, const Form& q)
{
    const Field& E = *f.E;
    const Field& L = *f.L;
    auto basis = tower_basis(E, L);
    size_t n = basis.size();
    Form out;
    for (auto& c : q) {
        std::vector<std::vector<Elem>> G(n, std::vector<Elem>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i; j < n; ++j) G[i][j] = G[j][i] = f(E.mul(c, E.mul(basis[i], basis[j])));
        Form d = diagonalize(L, G);
        out.insert(out.end(), d.begin(), d.end());
    }
    return out;
}

GW scharlau_transfer(const Functional& f, const GW& q)
{
    long d = static_cast<long>(tower_basis(*f.E, *f.L).size());
    return GW{q.rank * d, scharlau_transfer(f, q.form)};
}

std::string Orientation::str(const Field& F) const { return line + " generated by " + F.str(generator); }

Orientation canonical_orientation(const FieldPtr& E, const FieldPtr& L)
{
    E->degree_over(*L);  // throws unless E/L is finite
    if (E->characteristic() != 0) {
        for (const Field* f = E.get(); f && !f->same(*L); f = f->base().get()) {
            auto [p0, m] = separable_decompose(*f->base(), f->minpoly());
            if (m > 0) throw Error(ErrorCode::InseparableUnsupported, "inseparable step " + f->descriptor());
        }
    }
    return Orientation{"omega(" + E->descriptor() + "/" + L->descriptor() + ")", E->one()};
}

}  // namespace mwk
