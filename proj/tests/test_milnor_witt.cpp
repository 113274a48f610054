#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mwk/factor.hpp"
#include "mwk/milnor_witt.hpp"
#include "mwk/parse.hpp"
#include "oracle_bridge.hpp"

using namespace mwk;

namespace {

MWExpr sym(const FieldPtr& F, std::initializer_list<const char*> xs)
{
    std::vector<Elem> a;
    for (auto x : xs) a.push_back(parse_elem(*F, x));
    return mw_symbol(F, a);
}

MWExpr br(const FieldPtr& F, const char* x) { return mw_bracket(F, parse_elem(*F, x)); }

Elem small(const Field& F, std::mt19937_64& rng)
{
    static const long pool[] = {-1, 2, -2, 3, -3, 5, 6, -7, 10, 11, -15, 4, 9, -12};
    for (;;) {
        Elem e = F.kind() == Field::Kind::Rationals ? F.from_int(pool[rng() % 14]) : F.random(rng);
        if (!F.is_zero(e)) return e;
    }
}

}  // namespace

TEST_CASE("defining relations")
{
    FieldPtr Q = Field::rationals();
    CHECK(mw_is_zero(mw_normalize(mw_mul(mw_eta(Q), mw_hyperbolic(Q)))) == Tri::Yes);
    CHECK(mw_is_zero(mw_normalize(sym(Q, {"2", "-1"}))) == Tri::Yes);
    MWExpr rhs = mw_add(mw_add(sym(Q, {"2"}), sym(Q, {"3"})), mw_mul(mw_eta(Q), sym(Q, {"2", "3"})));
    CHECK(mw_equal(sym(Q, {"6"}), rhs) == Tri::Yes);
    CHECK(mw_equal(sym(Q, {"6"}), mw_add(sym(Q, {"2"}), sym(Q, {"3"}))) == Tri::No);
    CHECK(mw_is_zero(mw_normalize(mw_eta(Q))) == Tri::No);
    CHECK(mw_is_zero(mw_normalize(mw_hyperbolic(Q))) == Tri::No);
}

TEST_CASE("bridges")
{
    FieldPtr Q = Field::rationals();
    CHECK(bridge_f(mw_mul(mw_eta(Q), sym(Q, {"2", "5"}))).terms.empty());
    MWExpr h2 = bridge_H(MilnorExpr{Q, 1, {MSymbol{1, {Q->from_int(2)}}}});
    CHECK(mw_equal(h2, mw_mul(mw_hyperbolic(Q), sym(Q, {"2"}))) == Tri::Yes);
    MilnorExpr m{Q, 2, {MSymbol{1, {Q->from_int(2), Q->from_int(3)}}}};
    CHECK(mk_equal(bridge_f(bridge_H(m)), mk_scale(m, 2)) == Tri::Yes);
    std::mt19937_64 rng(21);
    for (int i = 0; i < 30; ++i) {
        int n = 1 + static_cast<int>(rng() % 3);
        MilnorExpr e{Q, n, {}};
        MSymbol s{1, {}};
        for (int k = 0; k < n; ++k) s.entries.push_back(small(*Q, rng));
        e.terms.push_back(s);
        CHECK(mk_equal(bridge_f(bridge_H(e)), mk_scale(e, 2)) == Tri::Yes);
    }
}

TEST_CASE("GW-module laws and commutation")
{
    std::mt19937_64 rng(22);
    for (const char* fd : {"Q", "F5", "F7"}) {
        FieldPtr F = parse_field(fd);
        for (int i = 0; i < 15; ++i) {
            Elem a = small(*F, rng), b = small(*F, rng);
            CHECK(mw_equal(mw_mul(mw_bracket(F, a), mw_bracket(F, b)), mw_bracket(F, F->mul(a, b))) == Tri::Yes);
            CHECK(mw_equal(mw_bracket(F, F->mul(a, a)), mw_one(F)) == Tri::Yes);
            CHECK(mw_is_zero(mw_normalize(mw_mul(mw_eta(F), mw_hyperbolic(F)))) == Tri::Yes);
            // [a][a] = [a][-1]
            CHECK(mw_equal(mw_symbol(F, {a, a}), mw_symbol(F, {a, F->from_int(-1)})) == Tri::Yes);
            // [a][b] = eps [b][a], i.e. [a][b] + <-1>[b][a] = 0
            MWExpr swapped = mw_mul(mw_epsilon(F), mw_symbol(F, {b, a}));
            CHECK(mw_equal(mw_symbol(F, {a, b}), swapped) == Tri::Yes);
            // <a>[a] = <-1>[a]... follows from [a][a] = [a][-1]
            CHECK(mw_equal(mw_mul(mw_bracket(F, a), mw_symbol(F, {a})), mw_mul(mw_bracket(F, F->from_int(-1)), mw_symbol(F, {a}))) ==
                  Tri::Yes);
            // eta eps = eta
            CHECK(mw_equal(mw_mul(mw_eta(F), mw_epsilon(F)), mw_eta(F)) == Tri::Yes);
        }
    }
    // the twist is needed: [2][7] = <-1>[7][2] fails over Q
    FieldPtr Q = Field::rationals();
    CHECK(mw_equal(sym(Q, {"2", "7"}), mw_mul(br(Q, "-1"), sym(Q, {"7", "2"}))) == Tri::No);
}

TEST_CASE("fiber condition holds on random expressions")
{
    std::mt19937_64 rng(23);
    for (const char* fd : {"Q", "F5"}) {
        FieldPtr F = parse_field(fd);
        for (int i = 0; i < 30; ++i) {
            int n = static_cast<int>(rng() % 5) - 1;
            MWExpr e = mw_zero(F, n);
            for (int k = 0; k < 3; ++k) {
                int s = static_cast<int>(rng() % 3);
                if (n + s < 0) s = -n;
                MWTerm t{static_cast<long>(rng() % 5) - 2, small(*F, rng), s, {}};
                for (int j = 0; j < n + s; ++j) t.entries.push_back(small(*F, rng));
                e.terms.push_back(t);
            }
            MWClass c = mw_normalize(e);
            CHECK(fiber_compatible(c) == Tri::Yes);
        }
    }
}

TEST_CASE("residue examples")
{
    FieldPtr Q = Field::rationals();
    auto v3 = PointValuation::at_prime(Q, 3);
    const FieldPtr& F3 = v3.residue;
    CHECK(mw_equal(residue_expr(v3, sym(Q, {"3", "2"})), mw_symbol(F3, {F3->from_int(2)})) == Tri::Yes);
    CHECK(mw_simplify(residue_expr(v3, sym(Q, {"2", "5"}))).terms.empty());
    CHECK(mw_equal(residue_expr(v3, mw_mul(mw_eta(Q), sym(Q, {"3"}))), mw_eta(F3)) == Tri::Yes);
    auto tw = residue(v3, sym(Q, {"3", "2"}));
    CHECK(tw.twist.line.find("m/m^2") != std::string::npos);
    // specializations
    CHECK(mw_equal(specialize(v3, sym(Q, {"2"})), mw_normalize(mw_symbol(F3, {F3->from_int(2)}))) == Tri::Yes);
    CHECK(mw_equal(specialize(v3, mw_one(Q)), mw_normalize(mw_one(F3))) == Tri::Yes);
    CHECK(mw_equal(specialize(v3, mw_eta(Q)), mw_normalize(mw_eta(F3))) == Tri::Yes);
    // d([pi^2 u]) = 2_eps <u>
    auto r = residue_expr(v3, sym(Q, {"18"}));
    CHECK(mw_equal(r, mw_mul(mw_bracket(F3, F3->from_int(2)), mw_hyperbolic(F3))) == Tri::Yes);
}

TEST_CASE("residues commute with eta and with f")
{
    std::mt19937_64 rng(24);
    FieldPtr Q = Field::rationals();
    FieldPtr Qt = parse_field("Q(t)");
    std::vector<PointValuation> vals{PointValuation::at_prime(Q, 3), PointValuation::at_prime(Q, 5),
                                     PointValuation::at_poly(Qt, parse_poly(*Q, "t", "t")),
                                     PointValuation::at_poly(Qt, parse_poly(*Q, "t^2 + 1", "t")),
                                     PointValuation::at_infinity(Qt)};
    auto rnd = [&](const Field& F) {
        if (F.kind() == Field::Kind::Rationals) {
            static const long pool[] = {3, -3, 5, 10, -45, 2, 7, 9, 25, -1, 75, 6};
            return F.from_int(pool[rng() % 12]);
        }
        static const char* pool[] = {"t", "-t", "t^2 + 1", "2*t", "t + 1", "(t^2 + 1)^2", "3", "t*(t^2 + 1)", "-1", "1/t"};
        return parse_elem(F, pool[rng() % 10]);
    };
    int count = 0;
    for (auto& v : vals)
        for (int i = 0; i < 20; ++i, ++count) {
            const FieldPtr& K = v.field;
            int n = 1 + static_cast<int>(rng() % 2);
            MWExpr e = mw_zero(K, n);
            for (int k = 0; k < 2; ++k) {
                MWTerm t{static_cast<long>(rng() % 3) + 1, rng() % 3 ? K->one() : rnd(*K), 0, {}};
                for (int j = 0; j < n; ++j) t.entries.push_back(rnd(*K));
                e.terms.push_back(t);
            }
            MWExpr a = residue_expr(v, mw_mul(mw_eta(K), e));
            MWExpr b = mw_mul(mw_eta(v.residue), residue_expr(v, e));
            CHECK(mw_equal(a, b) == Tri::Yes);
            CHECK(mk_equal(bridge_f(residue_expr(v, e)), mk_residue(v, bridge_f(e))) == Tri::Yes);
            // d(<u> a) = <u bar> d(a) for a unit u
            Elem u = K->kind() == Field::Kind::Rationals ? K->from_int(2) : parse_elem(*K, "(t + 2)/(t + 3)");
            MWExpr c = residue_expr(v, mw_mul(mw_bracket(K, u), e));
            MWExpr d = mw_mul(mw_bracket(v.residue, valuation(v, u).unit), residue_expr(v, e));
            CHECK(mw_equal(c, d) == Tri::Yes);
        }
    CHECK(count == 100);
}

TEST_CASE("geometric and cohomological transfers")
{
    FieldPtr Q = Field::rationals();
    FieldPtr K = parse_field("Q[a]/(a^2 - 2)");
    FieldPtr G = parse_field("Q[i]/(i^2 + 1)");
    CHECK(mw_equal(transfer_geometric_expr(Q, Q, sym(Q, {"3", "5"})), sym(Q, {"3", "5"})) == Tri::Yes);
    MWExpr hyp = mw_from_gw(Q, {Q->one(), Q->from_int(-1)});
    CHECK(mw_equal(transfer_geometric_expr(K, Q, mw_one(K)), hyp) == Tri::Yes);
    CHECK(mw_equal(transfer_geometric_expr(G, Q, mw_one(G)), hyp) == Tri::Yes);
    CHECK(mw_equal(transfer_cohomological_expr(K, Q, mw_one(K)), mw_from_gw(Q, {Q->from_int(2), Q->one()})) == Tri::Yes);
    MWExpr x = mw_mul(br(K, "a"), sym(K, {"1 - a"}));
    MWExpr target = mw_mul(br(Q, "2"), sym(Q, {"-1"}));
    CHECK(mw_equal(transfer_cohomological_expr(K, Q, x), target) == Tri::Yes);
    CHECK(mw_equal(transfer_cohomological(K, Q, mw_normalize(x)), mw_normalize(target)) == Tri::Yes);
}

TEST_CASE("pair transfers agree with the lift engine")
{
    std::mt19937_64 rng(25);
    FieldPtr Q = Field::rationals();
    for (const char* fd : {"Q[a]/(a^2 - 2)", "Q[a]/(a^2 + 3)", "Q[a]/(a^3 - 2)", "F5[w]/(w^2 - 2)"}) {
        FieldPtr E = parse_field(fd);
        FieldPtr L = E->base();
        for (int i = 0; i < 8; ++i) {
            int n = static_cast<int>(rng() % 4) - 1;
            MWExpr e = mw_zero(E, n);
            int s = n < 0 ? -n : static_cast<int>(rng() % 2);
            MWTerm t{1, rng() % 2 ? E->one() : small(*E, rng), s, {}};
            for (int j = 0; j < n + s; ++j) {
                Elem x;
                do x = E->random(rng); while (E->is_zero(x));
                if (L->kind() == Field::Kind::Rationals) {
                    // keep coefficients small so factoring stays cheap
                    Poly p;
                    for (int k = 0; k < E->degree(); ++k) p.push_back(L->from_int(static_cast<long>(rng() % 7) - 3));
                    poly::trim(*L, p);
                    if (poly::is_zero(p)) p = {L->one()};
                    x = E->from_poly(p);
                }
                t.entries.push_back(x);
            }
            e.terms.push_back(t);
            for (bool coh : {false, true}) {
                MWExpr engine = coh ? transfer_cohomological_expr(E, L, e) : transfer_geometric_expr(E, L, e);
                MWClass pair = coh ? transfer_cohomological(E, L, mw_normalize(e), false)
                                   : transfer_geometric(E, L, mw_normalize(e), false);
                INFO(fd << " " << mw_str(e) << " coh=" << coh);
                CHECK(mw_equal(mw_normalize(engine), pair) == Tri::Yes);
                CHECK(fiber_compatible(pair) == Tri::Yes);
            }
            if (E->degree() >= 2)
                CHECK(mw_equal(transfer_geometric_perturbed(E, e, 1 + static_cast<int>(rng() % 3)),
                               transfer_geometric_expr(E, L, e)) == Tri::Yes);
        }
    }
}

TEST_CASE("transfers along towers")
{
    FieldPtr Q = Field::rationals();
    FieldPtr A = parse_field("Q[a]/(a^2 - 2)[b]/(b^2 - 3)");
    FieldPtr B = parse_field("Q[b]/(b^2 - 3)[a]/(a^2 - 2)");
    std::mt19937_64 rng(26);
    for (int i = 0; i < 6; ++i) {
        long u = static_cast<long>(rng() % 5) + 1, w = static_cast<long>(rng() % 5) - 2;
        std::string ea = std::to_string(u) + " + a*b*" + std::to_string(w);
        MWExpr xa = mw_bracket(A, parse_elem(*A, ea));
        MWExpr xb = mw_bracket(B, parse_elem(*B, ea));
        MWClass ta = transfer_cohomological(A, Q, mw_normalize(xa), false);
        MWClass tb = transfer_cohomological(B, Q, mw_normalize(xb), false);
        CHECK(mw_equal(ta, tb) == Tri::Yes);
        MWExpr sa = mw_symbol(A, {parse_elem(*A, ea)});
        MWExpr sb = mw_symbol(B, {parse_elem(*B, ea)});
        CHECK(mw_equal(transfer_cohomological(A, Q, mw_normalize(sa), false),
                       transfer_cohomological(B, Q, mw_normalize(sb), false)) == Tri::Yes);
    }
    CHECK(mw_equal(transfer_cohomological(A, Q, mw_normalize(mw_one(A)), false),
                   transfer_cohomological(B, Q, mw_normalize(mw_one(B)), false)) == Tri::Yes);
}

TEST_CASE("projection formula")
{
    FieldPtr Q = Field::rationals();
    FieldPtr K = parse_field("Q[a]/(a^2 - 5)");
    std::mt19937_64 rng(27);
    for (int i = 0; i < 10; ++i) {
        Elem b = small(*Q, rng);
        Elem x = K->from_poly({Q->from_int(static_cast<long>(rng() % 5) - 2), Q->from_int(static_cast<long>(rng() % 3) + 1)});
        MWExpr alpha = mw_symbol(K, {x});
        MWExpr beta = mw_symbol(Q, {b});
        MWExpr lhs = transfer_cohomological_expr(K, Q, mw_mul(mw_extend(K, beta), alpha));
        MWExpr rhs = mw_mul(beta, transfer_cohomological_expr(K, Q, alpha));
        CHECK(mw_equal(lhs, rhs) == Tri::Yes);
    }
}

TEST_CASE("unramified check")
{
    FieldPtr Qt = parse_field("Q(t)");
    auto r = unramified_check(sym(Qt, {"t"}));
    REQUIRE(r.size() == 2);
    CHECK(r[1].kind == PointValuation::Kind::Infinity);
    auto g = unramified_check(sym(Qt, {"t"}), true);
    REQUIRE(g.size() == 1);
    CHECK(g[0].kind == PointValuation::Kind::Infinity);
    CHECK(unramified_check(sym(Qt, {"5"})).empty());
    auto q = unramified_check(sym(Qt, {"t^2 - 2"}));
    REQUIRE(q.size() == 2);
    CHECK(q[0].kind == PointValuation::Kind::MonicIrreducible);
    CHECK(poly::deg(q[0].poly) == 2);
}

TEST_CASE("consequences of the relations agree with the rewriting oracle")
{
    std::mt19937_64 rng(28);
    struct Setup {
        FieldPtr F;
        oracle::Model m;
        std::vector<long> pool;
    };
    std::vector<Setup> setups{{Field::rationals(), oracle::q_model(), {-1, 2, -2, 3, -3, 4, 6}},
                              {Field::prime(5), oracle::f5_model(), oracle::f5_sample()}};
    for (auto& st : setups) {
        const FieldPtr& F = st.F;
        oracle::RewriteOracle orc1(st.m, {1, 4, false}, st.pool);
        oracle::RewriteOracle orc2(st.m, {2, 4, false}, st.pool);
        int decided = 0;
        for (int i = 0; i < 40; ++i) {
            int n = 1 + static_cast<int>(rng() % 2);
            // random relation instance times random words
            MWExpr rel = mw_zero(F, 0);
            Elem a = oracle::pick(*F, st.pool, rng), b = oracle::pick(*F, st.pool, rng);
            switch (rng() % 3) {
            case 0: {
                Elem c = F->sub(F->one(), a);
                if (F->is_zero(c) || !st.m.split(*oracle::small_int(*F, c))) c = F->from_int(-1), a = F->from_int(2);
                rel = mw_symbol(F, {a, c});
                break;
            }
            case 1:
                rel = mw_sub(mw_symbol(F, {F->mul(a, b)}),
                             mw_add(mw_add(mw_symbol(F, {a}), mw_symbol(F, {b})), mw_mul(mw_eta(F), mw_symbol(F, {a, b}))));
                break;
            default: rel = mw_mul(mw_eta(F), mw_hyperbolic(F)); break;
            }
            int need = n - rel.degree;
            MWExpr left = mw_one(F), right = mw_one(F);
            if (need < 0) left = mw_eta(F, -need);
            for (int k = 0; k < need; ++k) {
                MWExpr g = mw_symbol(F, {oracle::pick(*F, st.pool, rng)});
                if (rng() % 2)
                    left = mw_mul(left, g);
                else
                    right = mw_mul(g, right);
            }
            MWExpr cons = mw_mul(left, mw_mul(rel, right));
            if (cons.degree != n) continue;
            MWExpr noise = mw_zero(F, n);
            noise.terms.push_back(oracle::random_term(*F, st.pool, n, 1, rng, false));
            MWExpr x = mw_add(noise, mw_scale(cons, static_cast<long>(rng() % 3) + 1));
            INFO(mw_str(x) << " vs " << mw_str(noise));
            CHECK(mw_equal(x, noise) == Tri::Yes);
            auto w = oracle::to_words(st.m, mw_sub(x, noise));
            REQUIRE(w);
            auto z = (n == 1 ? orc1 : orc2).is_zero(*w);
            if (!z) continue;
            ++decided;
            CHECK(*z);
        }
        CHECK(decided >= 30);
    }
}
