#pragma once
// Test-side reference computations. Nothing here calls the decision
// procedures under test.

#include <cstdlib>
#include <numeric>
#include <vector>

namespace oracle {

inline long vp(long a, long p)
{
    long k = 0;
    while (a % p == 0) {
        a /= p;
        ++k;
    }
    return k;
}

inline long ipow(long b, long e)
{
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

/* Hilbert symbol (a,b)_p by searching a primitive solution of
 * z^2 = a x^2 + b y^2 modulo p^k, k large enough for Hensel lifting.
 * Small squarefree-ish inputs only. p == 0 means the real place. */
inline int hilbert(long a, long b, long p)
{
    if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
    long k = (p == 2 ? 3 : 1) + 2 * std::max(vp(std::labs(a), p), vp(std::labs(b), p));
    long m = ipow(p, k);
    auto mod = [&](long v) { return ((v % m) + m) % m; };
    long am = mod(a), bm = mod(b);
    std::vector<long> sq(m);
    std::vector<char> any(m, 0), unit(m, 0);
    for (long x = 0; x < m; ++x) {
        sq[x] = x * x % m;
        any[sq[x]] = 1;
        if (x % p) unit[sq[x]] = 1;
    }
    for (long x = 0; x < m; ++x)
        for (long y = 0; y < m; ++y) {
            long rhs = (am * sq[x] + bm * sq[y]) % m;
            bool primitive_xy = x % p || y % p;
            if (primitive_xy ? any[rhs] : unit[rhs]) return 1;
        }
    return -1;
}

/* Number of x in F_p^n with q(x) = c, for a diagonal form. */
inline std::vector<long> representation_counts(const std::vector<long>& diag, long p)
{
    std::vector<long> cnt(p, 0);
    size_t n = diag.size();
    std::vector<long> x(n, 0);
    for (;;) {
        long v = 0;
        for (size_t i = 0; i < n; ++i) v = (v + diag[i] * x[i] % p * x[i]) % p;
        cnt[(v + p) % p]++;
        size_t i = 0;
        while (i < n && ++x[i] == p) x[i++] = 0;
        if (i == n) break;
    }
    return cnt;
}

}  // namespace oracle
