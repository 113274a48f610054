#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>

#include "mwk/correspondences.hpp"
#include "mwk/factor.hpp"
#include "mwk/parse.hpp"

using namespace mwk;

namespace {

Elem el(const FieldPtr& F, const char* s) { return parse_elem(*F, s); }

CyclePoint pt(const FieldPtr& E, std::vector<Elem> x, Form f) { return CyclePoint{E, std::move(x), gw_of(f)}; }

MWExpr sym(const FieldPtr& F, std::initializer_list<const char*> xs)
{
    std::vector<Elem> a;
    for (auto x : xs) a.push_back(parse_elem(*F, x));
    return mw_symbol(F, a);
}

Elem nonzero(const Field& F, std::mt19937_64& rng)
{
    static const long pool[] = {-1, 2, -2, 3, -3, 5, 6, -7, 10, 11, -15, 4, 9, -12, 7};
    for (;;) {
        Elem e = F.kind() == Field::Kind::Rationals ? F.from_int(pool[rng() % 15]) : F.random(rng);
        if (!F.is_zero(e)) return e;
    }
}

MWExpr random_expr(const FieldPtr& F, int n, std::mt19937_64& rng)
{
    MWExpr e = mw_zero(F, n);
    int terms = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < terms; ++k) {
        int s = static_cast<int>(rng() % 2);
        MWTerm t{static_cast<long>(rng() % 5) - 2, F->one(), s, {}};
        if (t.coef == 0) t.coef = 1;
        if (rng() % 2) t.twist = nonzero(*F, rng);
        for (int i = 0; i < n + s; ++i) t.entries.push_back(nonzero(*F, rng));
        e.terms.push_back(t);
    }
    return e;
}

/* Monic irreducible of degree d over Q with small coefficients. */
Poly random_irreducible(const Field& Q, int d, std::mt19937_64& rng)
{
    for (;;) {
        Poly p;
        for (int i = 0; i < d; ++i) p.push_back(Q.from_int(static_cast<long>(rng() % 7) - 3));
        p.push_back(Q.one());
        if (Q.is_zero(p[0])) continue;
        if (is_irreducible(Q, p) == Tri::Yes) return p;
    }
}

Elem random_in(const Field& E, std::mt19937_64& rng)
{
    for (;;) {
        Poly c;
        for (int i = 0; i < E.degree(); ++i) c.push_back(E.base()->from_int(static_cast<long>(rng() % 5) - 2));
        poly::trim(*E.base(), c);
        if (poly::is_zero(c)) continue;
        return E.from_poly(c);
    }
}

}  // namespace

TEST_CASE("phi examples")
{
    FieldPtr Q = Field::rationals();
    Correspondence c = phi(sym(Q, {"2", "3"}));
    REQUIRE(c.points.size() == 1);
    CHECK(c.q == 2);
    CHECK(cycle_identical(c, Correspondence{Q, 2, {pt(Q, {Q->from_int(2), Q->from_int(3)}, {Q->one()})}}) == Tri::Yes);
    CHECK(phi(sym(Q, {"1"})).points.empty());
    Correspondence g = phi(mw_bracket(Q, Q->from_int(2)));
    CHECK(g.q == 0);
    CHECK(cycle_identical(g, Correspondence{Q, 0, {pt(Q, {}, {Q->from_int(2)})}}) == Tri::Yes);
    CHECK_THROWS_AS(phi(mw_eta(Q)), Error);
    // eta terms carry Pfister coefficients: eta[2,3] in degree 1 is <<3>> at 2
    Correspondence e = phi(mw_mul(mw_eta(Q), sym(Q, {"2", "3"})));
    REQUIRE(e.points.size() == 1);
    CHECK(gw_equal(*Q, e.points[0].coef, GW{0, {Q->from_int(3), Q->from_int(-1)}}) == Tri::Yes);
}

TEST_CASE("theta inverts phi")
{
    FieldPtr Q = Field::rationals();
    MWExpr x = mw_mul(mw_eta(Q), sym(Q, {"2", "3", "5"}));
    CHECK(mw_equal(theta(phi(x)), mw_normalize(x)) == Tri::Yes);
    CHECK(mw_str(*theta(phi(sym(Q, {"2", "3"})), true).rep) == "[2, 3]");
    std::mt19937_64 rng(5);
    std::vector<FieldPtr> fields{Q, Field::prime(5), parse_field("F5(t)")};
    for (auto& F : fields)
        for (int i = 0; i < 20; ++i) {
            int n = 1 + static_cast<int>(rng() % 3);
            MWExpr e = random_expr(F, n, rng);
            CHECK(mw_equal(theta(phi(e)), mw_normalize(e)) == Tri::Yes);
        }
}

TEST_CASE("theta on a quadratic point")
{
    FieldPtr Q = Field::rationals();
    FieldPtr E = parse_field("Q[r]/(r^2 - 2)");
    Correspondence over_E{E, 1, {pt(E, {E->generator()}, {E->one()})}};
    Correspondence c = transfer_correspondence(E, Q, over_E);
    CHECK(point_str(c, c.points[0]) == "point([r]/(r^2 - 2); r; <1>)");
    MWExpr direct = transfer_cohomological_expr(E, Q, mw_symbol(E, {E->generator()}));
    CHECK(mw_equal(theta(c), mw_normalize(direct)) == Tri::Yes);
    CHECK(mw_equal(normalize_to_kmw(c), mw_normalize(direct)) == Tri::Yes);
    CHECK(cycle_identical(transfer_correspondence(E, E, over_E), over_E) == Tri::Yes);
}

TEST_CASE("transfer then theta is theta then transfer")
{
    FieldPtr Q = Field::rationals();
    FieldPtr E = parse_field("Q[r]/(r^2 - 3)");
    FieldPtr M = parse_field("Q[r]/(r^2 - 3)[s]/(s^2 - r - 1)");
    std::mt19937_64 rng(11);
    for (int i = 0; i < 6; ++i) {
        Correspondence c{E, 1, {}};
        c.points.push_back(pt(E, {random_in(*E, rng)}, {random_in(*E, rng)}));
        c.points.push_back(pt(M, {M->embed_from(*E, random_in(*E, rng))}, {M->generator()}));
        c.points.push_back(pt(M, {M->add(M->generator(), M->one())}, {M->one()}));
        MWClass lhs = theta(transfer_correspondence(E, Q, c));
        MWClass rhs = transfer_cohomological(E, Q, theta(c), false);
        CHECK(mw_equal(lhs, rhs) == Tri::Yes);
    }
}

TEST_CASE("two-point family")
{
    FieldPtr Q = Field::rationals();
    auto at = [&](long a, long b, long u) {
        return family_evaluate(two_point_family(Q, Q->from_int(a), Q->from_int(b)), Q->from_int(u));
    };
    auto single = [&](long x, long form) { return pt(Q, {Q->from_int(x)}, {Q->from_int(form)}); };
    CHECK(cycle_identical(at(2, 3, 1), Correspondence{Q, 1, {single(2, -1), single(3, 1)}}) == Tri::Yes);
    CHECK(cycle_identical(at(2, 3, 0), Correspondence{Q, 1, {single(1, -5), single(6, 5)}}) == Tri::Yes);
    // a = b: <1,-1> at a
    CHECK(cycle_identical(at(5, 5, 1), Correspondence{Q, 1, {pt(Q, {Q->from_int(5)}, {Q->one(), Q->from_int(-1)})}}) ==
          Tri::Yes);
    // theta agrees at both ends
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
        long a = static_cast<long>(rng() % 21) - 10, b = static_cast<long>(rng() % 21) - 10;
        if (a == 0 || b == 0) continue;
        CHECK(mw_equal(theta(at(a, b, 0)), theta(at(a, b, 1))) == Tri::Yes);
    }
}

TEST_CASE("family checks")
{
    FieldPtr Q = Field::rationals();
    ResiduePresentation fam = two_point_family(Q, Q->from_int(2), Q->from_int(3));
    // u-constant family
    ResiduePresentation flat = fam;
    for (auto& c : flat.F) c.resize(std::min<size_t>(c.size(), 1));
    CHECK(cycle_identical(family_evaluate(flat, Q->zero()), family_evaluate(flat, Q->one())) == Tri::Yes);
    ResiduePresentation bad = fam;
    bad.F.back() = {Q->from_int(2)};
    CHECK_THROWS_AS(family_evaluate(bad, Q->zero()), Error);
    bad = fam;
    bad.F.front() = {Q->one(), Q->one()};
    CHECK_THROWS_AS(family_evaluate(bad, Q->zero()), Error);
    bad = fam;
    bad.var = "";
    CHECK_THROWS_AS(family_evaluate(bad, Q->zero()), Error);
}

TEST_CASE("family support is accounted for")
{
    FieldPtr Q = Field::rationals();
    std::mt19937_64 rng(8);
    for (int i = 0; i < 8; ++i) {
        long a = static_cast<long>(rng() % 15) - 7, b = static_cast<long>(rng() % 15) - 7;
        if (a == 0 || b == 0) continue;
        ResiduePresentation fam = two_point_family(Q, Q->from_int(a), Q->from_int(b));
        for (long u : {0L, 1L}) {
            Correspondence ev = family_evaluate(fam, Q->from_int(u));
            FieldPtr K = Field::function_field(Q, fam.var);
            Poly G;
            for (auto& k : fam.F) G.push_back(poly::eval(*Q, k, Q->from_int(u)));
            MWExpr beta{K, 2, {MWTerm{1, K->one(), 0, {K->from_poly(G), K->generator()}}}};
            for (auto& v : unramified_check(beta, true)) {
                if (v.kind == PointValuation::Kind::Infinity) continue;
                Elem x = Q->neg(v.poly[0]);
                bool found = std::any_of(ev.points.begin(), ev.points.end(),
                                         [&](const CyclePoint& p) { return Q->eq(p.coords[0], x); });
                CHECK(found);
            }
        }
    }
}

TEST_CASE("quadratic point reduction")
{
    FieldPtr Q = Field::rationals();
    FieldPtr E = parse_field("Q[y]/(y^2 - 2*y - 1)");
    // y = 1 - sqrt2 with coefficient <sqrt2> = <1 - y>
    Elem y = E->generator();
    Correspondence c{Q, 1, {pt(E, {y}, {E->sub(E->one(), y)})}};
    auto [r, tr] = reduce_degree(c);
    CHECK(max_degree(r) == 1);
    CHECK(replay(tr, c, r));
    for (auto& p : r.points) {
        bool pm1 = Q->eq(p.coords[0], Q->one()) || Q->eq(p.coords[0], Q->from_int(-1));
        CHECK(pm1);
    }
    MWExpr expected = mw_mul(mw_bracket(Q, Q->from_int(2)), sym(Q, {"-1"}));
    CHECK(mw_equal(theta(c), mw_normalize(expected)) == Tri::Yes);
    CHECK(mw_equal(theta(r), mw_normalize(expected)) == Tri::Yes);
    CHECK(mw_equal(normalize_to_kmw(c), mw_normalize(expected)) == Tri::Yes);
    // degree one input is left alone
    Correspondence lin = phi(sym(Q, {"2"}));
    auto [same, empty] = reduce_degree(lin);
    CHECK(empty.moves.empty());
    CHECK(cycle_identical(same, lin) == Tri::Yes);
}

TEST_CASE("cubic point reduction")
{
    FieldPtr Q = Field::rationals();
    FieldPtr E = parse_field("Q[y]/(y^3 - 2)");
    Correspondence c{Q, 1, {pt(E, {E->generator()}, {E->one()})}};
    auto [r, tr] = reduce_degree(c);
    REQUIRE(tr.moves.size() == 1);
    const auto& mv = tr.moves[0];
    CHECK(family_str(mv.family) == "F(u,y) = (1)*y^3 + (-4*u)*y^2 + (5*u)*y + (-2); w = 3*y^2; coords = (y)");
    CHECK(mw_equal(theta(mv.ev0), theta(mv.ev1)) == Tri::Yes);
    CHECK(max_degree(r) < 3);
    CHECK(replay(tr, c, r));
    CHECK(mw_equal(theta(c), theta(r)) == Tri::Yes);
    CHECK(mw_equal(normalize_to_kmw(c), theta(c)) == Tri::Yes);
}

TEST_CASE("random monogenic cycles")
{
    FieldPtr Q = Field::rationals();
    std::mt19937_64 rng(17);
    for (int i = 0; i < 9; ++i) {
        int d = 2 + i % 3;
        int q = 1 + static_cast<int>(rng() % 2);
        FieldPtr E = Field::extension_trusted(Q, random_irreducible(*Q, d, rng), "y");
        std::vector<Elem> x{E->generator()};
        while (static_cast<int>(x.size()) < q) x.push_back(random_in(*E, rng));
        Correspondence c{Q, q, {pt(E, x, {random_in(*E, rng)})}};
        auto [r, tr] = reduce_degree(c);
        CHECK(max_degree(r) < d);
        CHECK(replay(tr, c, r));
        CHECK(mw_equal(theta(c), theta(r)) == Tri::Yes);
        // full normalization with a constant coefficient keeps heights small
        std::vector<Elem> y{E->generator()};
        if (q == 2) y.push_back(E->add(E->generator(), E->from_int(1 + static_cast<long>(rng() % 3))));
        Correspondence c2{Q, q, {pt(E, y, {E->from_int(i % 2 ? -2 : 3)})}};
        CHECK(mw_equal(normalize_to_kmw(c2), theta(c2)) == Tri::Yes);
    }
}

TEST_CASE("non-monogenic towers")
{
    FieldPtr Q = Field::rationals();
    FieldPtr M = parse_field("Q[r]/(r^2 - 2)[s]/(s^2 - 3)");
    Elem r = M->embed_from(*parse_field("Q[r]/(r^2 - 2)"), parse_elem(*parse_field("Q[r]/(r^2 - 2)"), "r"));
    Correspondence c{Q, 2, {pt(M, {r, M->generator()}, {M->one()})}};
    CHECK(mw_equal(normalize_to_kmw(c), theta(c)) == Tri::Yes);
}

TEST_CASE("cycle-level Steinberg")
{
    FieldPtr Q = Field::rationals();
    std::mt19937_64 rng(23);
    for (int i = 0; i < 8; ++i) {
        Elem a = Q->from_rational(mpq_class(static_cast<long>(rng() % 40) - 20, 1 + static_cast<long>(rng() % 6)));
        if (Q->is_zero(a) || Q->is_one(a)) continue;
        Correspondence st = cycle_product(phi(mw_symbol(Q, {a})), phi(mw_symbol(Q, {Q->sub(Q->one(), a)})));
        CHECK(mw_is_zero(normalize_to_kmw(st)) == Tri::Yes);
        Correspondence hyp = cycle_act(gw_of({Q->one(), Q->from_int(-1)}), st);
        CHECK(mw_is_zero(normalize_to_kmw(hyp)) == Tri::Yes);
    }
}

TEST_CASE("GW action commutes with theta")
{
    FieldPtr Q = Field::rationals();
    FieldPtr E = parse_field("Q[y]/(y^2 + 1)");
    Correspondence c{Q, 1, {pt(E, {E->add(E->generator(), E->one())}, {E->one()}), pt(Q, {Q->from_int(3)}, {Q->from_int(2)})}};
    GW beta = gw_of({Q->from_int(3), Q->from_int(-5)});
    MWClass lhs = theta(cycle_act(beta, c));
    MWClass rhs = mw_normalize(mw_mul(mw_from_gw(Q, beta.form), *theta(c, true).rep));
    CHECK(mw_equal(lhs, rhs) == Tri::Yes);
}
