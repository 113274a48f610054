#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>

#include "mwk/factor.hpp"
#include "mwk/parse.hpp"

using namespace mwk;

namespace {

// brute-force roots over a prime field, independent of the factoring code
std::vector<long> brute_roots(long p, const std::vector<long>& coeffs)
{
    std::vector<long> out;
    for (long x = 0; x < p; ++x) {
        long v = 0;
        for (size_t i = coeffs.size(); i-- > 0;) v = ((v * x + coeffs[i]) % p + p) % p;
        if (v == 0) out.push_back(x);
    }
    return out;
}

Poly P(const FieldPtr& F, const std::string& s) { return parse_poly(*F, s, "t"); }

}  // namespace

TEST_CASE("field syntax round trips")
{
    for (std::string s : {"Q", "F7", "Q[a]/(a^2 - 2)", "Q(t)", "F5(t)", "Q[a]/(a^2 - 2)[b]/(b^2 - 3)",
                          "F3[w]/(w^2 + 1)", "Q[x]/(x^3 - x - 1)"}) {
        FieldPtr F = parse_field(s);
        CHECK(F->descriptor() == s);
        CHECK(parse_field(F->descriptor())->same(*F));
    }
    CHECK(parse_field("F<7>")->descriptor() == "F7");
    CHECK_THROWS_AS(parse_field("F4"), Error);
    CHECK_THROWS_AS(parse_field("F2"), Error);
    CHECK_THROWS_AS(parse_field("Q[a]/(a^2 - 4)"), Error);
    CHECK_THROWS_AS(parse_field("Q[a]/(a^2 - 2"), Error);
}

TEST_CASE("element printing round trips")
{
    std::mt19937_64 rng(7);
    for (std::string s : {"Q", "F11", "Q[a]/(a^2 - 2)", "Q(t)", "F5(t)", "Q[a]/(a^2 - 2)[b]/(b^2 - 3)", "F3[w]/(w^2 + 1)"}) {
        FieldPtr F = parse_field(s);
        for (int i = 0; i < 40; ++i) {
            Elem a = F->random(rng), b = F->random(rng);
            Elem c = F->is_zero(b) ? a : F->div(a, b);
            CHECK(F->eq(parse_elem(*F, F->str(c)), c));
        }
    }
}

TEST_CASE("field axioms on random elements")
{
    std::mt19937_64 rng(11);
    for (std::string s : {"Q", "F7", "Q[a]/(a^2 - 2)", "Q(t)", "F5(t)", "F3[w]/(w^2 + 1)", "Q[x]/(x^3 - x - 1)"}) {
        FieldPtr F = parse_field(s);
        for (int i = 0; i < 50; ++i) {
            Elem a = F->random(rng), b = F->random(rng), c = F->random(rng);
            CHECK(F->eq(F->mul(a, F->add(b, c)), F->add(F->mul(a, b), F->mul(a, c))));
            CHECK(F->eq(F->add(a, F->neg(a)), F->zero()));
            if (!F->is_zero(a)) CHECK(F->is_one(F->mul(a, F->inv(a))));
        }
    }
}

TEST_CASE("factor examples")
{
    FieldPtr F7 = Field::prime(7);
    auto f = factor(*F7, P(F7, "t^2 - 2"));
    REQUIRE(f.factors.size() == 2);
    auto br = brute_roots(7, {-2, 0, 1});
    REQUIRE(br.size() == 2);
    for (long r : br) {
        Poly lin = P(F7, "t - " + std::to_string(r));
        CHECK(std::any_of(f.factors.begin(), f.factors.end(), [&](auto& g) { return poly::eq(*F7, g.first, lin); }));
    }

    FieldPtr Q = Field::rationals();
    // rational root test: +-1, +-2 are not roots, and a quadratic without roots is irreducible
    for (long r : {1, -1, 2, -2}) CHECK(r * r - 2 != 0);
    CHECK(is_irreducible(*Q, P(Q, "t^2 - 2")) == Tri::Yes);
    auto g = factor(*Q, P(Q, "t^2 - 1"));
    REQUIRE(g.factors.size() == 2);
    CHECK(poly::eq(*Q, g.factors[0].first, P(Q, "t - 1")));
    CHECK(poly::eq(*Q, g.factors[1].first, P(Q, "t + 1")));
}

TEST_CASE("factor reassembles exactly")
{
    std::mt19937_64 rng(3);
    std::vector<std::string> fields = {"F7", "F3", "Q", "Q[a]/(a^2 - 2)", "F3[w]/(w^2 + 1)", "Q[i]/(i^2 + 1)"};
    for (auto& s : fields) {
        FieldPtr F = parse_field(s);
        for (int k = 0; k < 12; ++k) {
            Poly p = poly::constant(*F, F->one());
            int pieces = 1 + static_cast<int>(rng() % 3);
            for (int j = 0; j < pieces; ++j) {
                Poly q;
                int d = 1 + static_cast<int>(rng() % 2);
                for (int i = 0; i <= d; ++i) q.push_back(F->random(rng));
                poly::trim(*F, q);
                if (poly::deg(q) >= 1) p = poly::mul(*F, p, q);
            }
            if (poly::deg(p) < 1) continue;
            auto f = factor(*F, p);
            CHECK(poly::eq(*F, expand(*F, f), p));
            for (auto& [g, m] : f.factors) {
                CHECK(m >= 1);
                CHECK(F->is_one(poly::lc(g)));
                // every root-free quadratic is irreducible; linear ones trivially
                if (poly::deg(g) == 2) CHECK(roots(*F, g).empty());
            }
        }
    }
}

TEST_CASE("factor over Q with known decomposition")
{
    FieldPtr Q = Field::rationals();
    Poly p = P(Q, "(t^2 + 1)*(t^3 - 2)*(t - 5)^2*(2*t + 3)");
    auto f = factor(*Q, p);
    CHECK(f.factors.size() == 4);
    CHECK(poly::eq(*Q, expand(*Q, f), p));
    Poly swinnerton = P(Q, "t^4 - 10*t^2 + 1");  // irreducible over Q, splits mod every prime
    CHECK(is_irreducible(*Q, swinnerton) == Tri::Yes);
    FieldPtr K = parse_field("Q[a]/(a^2 - 2)");
    auto g = factor(*K, parse_poly(*K, "t^4 - 10*t^2 + 1", "t"));
    CHECK(g.factors.size() == 2);
}

TEST_CASE("integer factoring against known products")
{
    const long primes[] = {2, 3, 7, 9973, 10007, 1000003, 998244353, 2147483647};
    std::mt19937_64 rng(12);
    for (int i = 0; i < 40; ++i) {
        mpz_class n = 1, sqf = 1;
        std::map<long, int> want;
        for (int k = 0; k < 4; ++k) {
            long p = primes[rng() % 8];
            int e = 1 + static_cast<int>(rng() % 3);
            want[p] += e;
            for (int j = 0; j < e; ++j) n *= p;
        }
        for (auto& [p, e] : want)
            if (e % 2) sqf *= p;
        auto got = integer::factor(n);
        REQUIRE(got.size() == want.size());
        for (auto& [p, e] : got) CHECK(want[p.get_si()] == e);
        CHECK(integer::squarefree_part(-n) == -sqf);
    }
    mpz_class big = mpz_class("1000000007") * mpz_class("1000000009");
    CHECK(integer::squarefree_part(big * big * 6) == 6);
}

TEST_CASE("square classes")
{
    FieldPtr Q = Field::rationals();
    auto s = square_class(*Q, Q->from_int(8));
    CHECK(Q->eq(s.rep, Q->from_int(2)));
    CHECK(Q->eq(*s.witness, Q->from_int(2)));
    FieldPtr F7 = Field::prime(7);
    auto s2 = square_class(*F7, F7->from_int(2));
    CHECK(F7->is_one(s2.rep));
    // squares mod 7 enumerated directly
    std::vector<long> sq;
    for (long x = 1; x < 7; ++x) sq.push_back(x * x % 7);
    CHECK(std::find(sq.begin(), sq.end(), 2) != sq.end());
    CHECK(std::find(sq.begin(), sq.end(), 3) == sq.end());
    CHECK(F7->eq(F7->mul(*s2.witness, *s2.witness), F7->from_int(2)));
    CHECK(F7->eq(square_class(*F7, F7->from_int(3)).rep, F7->from_int(3)));
}

TEST_CASE("square class is invariant under squares")
{
    std::mt19937_64 rng(5);
    for (std::string s : {"Q", "F7", "F3[w]/(w^2 + 1)", "Q(t)", "F5(t)"}) {
        FieldPtr F = parse_field(s);
        for (int i = 0; i < 30; ++i) {
            Elem a = F->random(rng), b = F->random(rng);
            if (F->is_zero(a) || F->is_zero(b)) continue;
            auto c1 = square_class(*F, a);
            auto c2 = square_class(*F, F->mul(a, F->mul(b, b)));
            CHECK(F->eq(c1.rep, c2.rep));
            REQUIRE(c1.witness);
            CHECK(F->eq(a, F->mul(c1.rep, F->mul(*c1.witness, *c1.witness))));
        }
    }
}

TEST_CASE("separable decomposition")
{
    FieldPtr F3 = Field::prime(3);
    auto [p0, m] = separable_decompose(*F3, P(F3, "t^3 - 2"));
    CHECK(m == 1);
    CHECK(poly::eq(*F3, p0, P(F3, "t - 2")));
    FieldPtr Q = Field::rationals();
    auto [q0, mq] = separable_decompose(*Q, P(Q, "t^2 - 2"));
    CHECK(mq == 0);
    CHECK(poly::eq(*Q, q0, P(Q, "t^2 - 2")));
    FieldPtr F5 = Field::prime(5);
    auto [r0, mr] = separable_decompose(*F5, P(F5, "t^2 - 2"));
    CHECK(mr == 0);
    CHECK(poly::eq(*F5, r0, P(F5, "t^2 - 2")));
    // substitution check p(t) = p0(t^(l^m))
    Poly sub = poly::compose(*F3, p0, P(F3, "t^3"));
    CHECK(poly::eq(*F3, sub, P(F3, "t^3 - 2")));
    CHECK(poly::deg(poly::gcd(*F3, p0, poly::deriv(*F3, p0))) == 0);
}
