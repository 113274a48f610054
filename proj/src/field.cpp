#include "mwk/field.hpp"

#include <algorithm>
#include <map>
#include <cctype>
#include <sstream>

#include "mwk/factor.hpp"

namespace mwk {

const char* error_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnsupportedField: return "UnsupportedField";
    case ErrorCode::DegreeCapExceeded: return "DegreeCapExceeded";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::NonHomogeneous: return "NonHomogeneous";
    case ErrorCode::NotMonogenic: return "NotMonogenic";
    case ErrorCode::NotFinite: return "NotFinite";
    case ErrorCode::InseparableUnsupported: return "InseparableUnsupported";
    case ErrorCode::DegenerateSpecialization: return "DegenerateSpecialization";
    case ErrorCode::NegativeDegreeUnsupported: return "NegativeDegreeUnsupported";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
    }
    return "Error";
}

const char* tri_name(Tri t)
{
    switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    default: return "unknown";
    }
}

Field::Field(Kind k, FieldPtr base, Poly minpoly, std::string var, mpz_class ch)
    : kind_(k), base_(std::move(base)), minpoly_(std::move(minpoly)), var_(std::move(var)), char_(std::move(ch))
{
    switch (kind_) {
    case Kind::Rationals: break;
    case Kind::PrimeFinite: finite_ = true; size_ = char_; break;
    case Kind::SimpleExtension:
        finite_ = base_->is_finite();
        if (finite_) mpz_pow_ui(size_.get_mpz_t(), base_->size().get_mpz_t(), poly::deg(minpoly_));
        break;
    case Kind::RationalFunction: break;
    }
}

FieldPtr Field::rationals()
{
    static const FieldPtr q = std::make_shared<Field>(Kind::Rationals, nullptr, Poly{}, "", mpz_class(0));
    return q;
}

FieldPtr Field::prime(const mpz_class& p)
{
    if (p <= 2 || !integer::is_prime(p))
        throw Error(ErrorCode::InvalidArgument, "characteristic must be an odd prime, got " + p.get_str());
    return std::make_shared<Field>(Kind::PrimeFinite, nullptr, Poly{}, "", p);
}

FieldPtr Field::extension_trusted(const FieldPtr& base, Poly minpoly, const std::string& var)
{
    poly::trim(*base, minpoly);
    if (poly::deg(minpoly) < 1)
        throw Error(ErrorCode::InvalidArgument, "minimal polynomial must be nonconstant");
    minpoly = poly::monic(*base, minpoly);
    return std::make_shared<Field>(Kind::SimpleExtension, base, std::move(minpoly), var, base->characteristic());
}

FieldPtr Field::extension(const FieldPtr& base, Poly minpoly, const std::string& var)
{
    FieldPtr E = extension_trusted(base, std::move(minpoly), var);
    const Poly& m = E->minpoly();
    Poly d = poly::deriv(*base, m);
    if (poly::is_zero(d) || poly::deg(poly::gcd(*base, m, d)) > 0)
        throw Error(ErrorCode::InseparableUnsupported,
                    "minimal polynomial " + poly::str(*base, m, var) + " is not separable");
    if (is_irreducible(*base, m) == Tri::No)
        throw Error(ErrorCode::InvalidArgument,
                    "minimal polynomial " + poly::str(*base, m, var) + " is reducible");
    return E;
}

FieldPtr Field::function_field(const FieldPtr& base, const std::string& var)
{
    return std::make_shared<Field>(Kind::RationalFunction, base, Poly{}, var, base->characteristic());
}

int Field::degree() const
{
    switch (kind_) {
    case Kind::SimpleExtension: return poly::deg(minpoly_);
    case Kind::RationalFunction: return 0;
    default: return 1;
    }
}

int Field::height() const { return base_ ? base_->height() + 1 : 0; }

bool Field::has_subfield(const Field& sub) const
{
    for (const Field* f = this; f; f = f->base_.get())
        if (f->same(sub)) return true;
    return false;
}

int Field::degree_over(const Field& sub) const
{
    int d = 1;
    for (const Field* f = this; f; f = f->base_.get()) {
        if (f->same(sub)) return d;
        if (f->kind_ == Kind::RationalFunction)
            throw Error(ErrorCode::NotFinite, descriptor() + " is not finite over " + sub.descriptor());
        d *= f->degree();
    }
    throw Error(ErrorCode::FieldMismatch, sub.descriptor() + " is not a subfield of " + descriptor());
}

Elem Field::zero() const
{
    Elem e;
    if (kind_ == Kind::RationalFunction) e.den.push_back(base_->one());
    return e;
}

Elem Field::one() const { return from_int(1); }

Elem Field::from_int(long v) const { return from_mpz(mpz_class(v)); }

Elem Field::from_mpz(const mpz_class& v) const { return from_rational(mpq_class(v)); }

Elem Field::from_rational(const mpq_class& v) const
{
    Elem e;
    switch (kind_) {
    case Kind::Rationals: e.q = v; break;
    case Kind::PrimeFinite: {
        mpz_class n = v.get_num() % char_, d = v.get_den() % char_;
        if (d == 0) throw Error(ErrorCode::InvalidArgument, "denominator divisible by the characteristic");
        mpz_class di;
        mpz_invert(di.get_mpz_t(), d.get_mpz_t(), char_.get_mpz_t());
        n = (n * di) % char_;
        if (n < 0) n += char_;
        e.q = n;
        break;
    }
    case Kind::SimpleExtension:
        if (v != 0) e.num.push_back(base_->from_rational(v));
        break;
    case Kind::RationalFunction:
        if (v != 0) e.num.push_back(base_->from_rational(v));
        e.den.push_back(base_->one());
        break;
    }
    return e;
}

Elem Field::generator() const
{
    Elem e;
    switch (kind_) {
    case Kind::SimpleExtension:
        if (poly::deg(minpoly_) == 1) return embed(base_->neg(minpoly_.size() > 1 ? minpoly_[0] : base_->zero()));
        e.num = {base_->zero(), base_->one()};
        return e;
    case Kind::RationalFunction:
        e.num = {base_->zero(), base_->one()};
        e.den = {base_->one()};
        return e;
    default: throw Error(ErrorCode::InvalidArgument, "prime fields have no generator");
    }
}

Elem Field::embed_from(const Field& sub, const Elem& e) const
{
    if (same(sub)) return e;
    if (!base_) throw Error(ErrorCode::FieldMismatch, sub.descriptor() + " is not below " + descriptor());
    Elem b = base_->embed_from(sub, e);
    Elem r;
    if (kind_ == Kind::SimpleExtension) {
        if (!base_->is_zero(b)) r.num.push_back(std::move(b));
    } else {
        if (!base_->is_zero(b)) r.num.push_back(std::move(b));
        r.den.push_back(base_->one());
    }
    return r;
}

bool Field::is_zero(const Elem& a) const
{
    if (is_prime_field()) return a.q == 0;
    return a.num.empty();
}

int Field::cmp(const Elem& a, const Elem& b) const
{
    switch (kind_) {
    case Kind::Rationals:
    case Kind::PrimeFinite: return ::cmp(a.q, b.q) < 0 ? -1 : (::cmp(a.q, b.q) > 0 ? 1 : 0);
    case Kind::SimpleExtension: return poly::cmp(*base_, a.num, b.num);
    case Kind::RationalFunction: {
        int c = poly::cmp(*base_, a.num, b.num);
        return c ? c : poly::cmp(*base_, a.den, b.den);
    }
    }
    return 0;
}

namespace {

Elem make_ratfn(const Field& F, Poly n, Poly d)
{
    const Field& B = *F.base();
    poly::trim(B, n);
    poly::trim(B, d);
    if (poly::is_zero(d)) throw Error(ErrorCode::InvalidArgument, "division by zero");
    Elem e;
    if (poly::is_zero(n)) {
        e.den.push_back(B.one());
        return e;
    }
    Poly g = poly::gcd(B, n, d);
    if (poly::deg(g) > 0) {
        n = poly::quo(B, n, g);
        d = poly::quo(B, d, g);
    }
    Elem l = B.inv(poly::lc(d));
    e.num = poly::scale(B, n, l);
    e.den = poly::scale(B, d, l);
    return e;
}

}  // namespace

Elem Field::from_poly(const Poly& n, const Poly& d) const
{
    Poly den = d.empty() ? Poly{base_->one()} : d;
    if (kind_ == Kind::RationalFunction) return make_ratfn(*this, n, den);
    if (kind_ != Kind::SimpleExtension) throw Error(ErrorCode::InvalidArgument, "from_poly on a prime field");
    Elem x = generator();
    auto ev = [&](const Poly& p) {
        Elem r = zero();
        for (size_t i = p.size(); i-- > 0;) r = add(mul(r, x), embed(p[i]));
        return r;
    };
    return div(ev(n), ev(den));
}

Elem Field::add(const Elem& a, const Elem& b) const
{
    Elem e;
    switch (kind_) {
    case Kind::Rationals: e.q = a.q + b.q; break;
    case Kind::PrimeFinite:
        e.q = a.q + b.q;
        if (e.q >= char_) e.q -= char_;
        break;
    case Kind::SimpleExtension: e.num = poly::add(*base_, a.num, b.num); break;
    case Kind::RationalFunction:
        if (poly::eq(*base_, a.den, b.den)) return make_ratfn(*this, poly::add(*base_, a.num, b.num), a.den);
        return make_ratfn(*this,
                          poly::add(*base_, poly::mul(*base_, a.num, b.den), poly::mul(*base_, b.num, a.den)),
                          poly::mul(*base_, a.den, b.den));
    }
    return e;
}

Elem Field::neg(const Elem& a) const
{
    Elem e;
    switch (kind_) {
    case Kind::Rationals: e.q = -a.q; break;
    case Kind::PrimeFinite: e.q = a.q == 0 ? mpq_class(0) : mpq_class(char_ - a.q.get_num()); break;
    case Kind::SimpleExtension: e.num = poly::neg(*base_, a.num); break;
    case Kind::RationalFunction:
        e.num = poly::neg(*base_, a.num);
        e.den = a.den;
        break;
    }
    return e;
}

Elem Field::sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

Elem Field::mul(const Elem& a, const Elem& b) const
{
    Elem e;
    switch (kind_) {
    case Kind::Rationals: e.q = a.q * b.q; break;
    case Kind::PrimeFinite: {
        mpz_class r = a.q.get_num() * b.q.get_num();
        r %= char_;
        e.q = r;
        break;
    }
    case Kind::SimpleExtension: e.num = poly::rem(*base_, poly::mul(*base_, a.num, b.num), minpoly_); break;
    case Kind::RationalFunction:
        if (is_zero(a) || is_zero(b)) return zero();
        return make_ratfn(*this, poly::mul(*base_, a.num, b.num), poly::mul(*base_, a.den, b.den));
    }
    return e;
}

Elem Field::inv(const Elem& a) const
{
    if (is_zero(a)) throw Error(ErrorCode::InvalidArgument, "inverse of zero in " + descriptor());
    Elem e;
    switch (kind_) {
    case Kind::Rationals: e.q = 1 / a.q; break;
    case Kind::PrimeFinite: {
        mpz_class r;
        mpz_invert(r.get_mpz_t(), a.q.get_num_mpz_t(), char_.get_mpz_t());
        e.q = r;
        break;
    }
    case Kind::SimpleExtension: {
        Poly s, t;
        Poly g = poly::xgcd(*base_, a.num, minpoly_, s, t);
        if (poly::deg(g) != 0)
            throw Error(ErrorCode::InvalidArgument, "minimal polynomial of " + descriptor() + " is reducible");
        e.num = poly::rem(*base_, s, minpoly_);
        break;
    }
    case Kind::RationalFunction: return make_ratfn(*this, a.den, a.num);
    }
    return e;
}

Elem Field::pow(const Elem& a, long k) const
{
    if (k < 0) return pow(inv(a), -k);
    return pow(a, mpz_class(k));
}

Elem Field::pow(const Elem& a, const mpz_class& k) const
{
    if (k < 0) return pow(inv(a), mpz_class(-k));
    Elem r = one(), b = a;
    size_t bits = mpz_sizeinbase(k.get_mpz_t(), 2);
    for (size_t i = 0; i < bits; ++i) {
        if (mpz_tstbit(k.get_mpz_t(), i)) r = mul(r, b);
        if (i + 1 < bits) b = mul(b, b);
    }
    return r;
}

bool Field::is_prime_constant(const Elem& a) const
{
    switch (kind_) {
    case Kind::Rationals:
    case Kind::PrimeFinite: return true;
    case Kind::SimpleExtension: return a.num.empty() || (a.num.size() == 1 && base_->is_prime_constant(a.num[0]));
    case Kind::RationalFunction:
        return a.den.size() == 1 && (a.num.empty() || (a.num.size() == 1 && base_->is_prime_constant(a.num[0])));
    }
    return false;
}

std::string Field::str(const Elem& a) const
{
    switch (kind_) {
    case Kind::Rationals:
    case Kind::PrimeFinite: return a.q.get_str();
    case Kind::SimpleExtension: return poly::str(*base_, a.num, var_);
    case Kind::RationalFunction: {
        std::string n = poly::str(*base_, a.num, var_);
        if (poly::deg(a.den) == 0) return n;
        return "(" + n + ")/(" + poly::str(*base_, a.den, var_) + ")";
    }
    }
    return "?";
}

std::string Field::descriptor() const
{
    switch (kind_) {
    case Kind::Rationals: return "Q";
    case Kind::PrimeFinite: return "F" + char_.get_str();
    case Kind::SimpleExtension:
        return base_->descriptor() + "[" + var_ + "]/(" + poly::str(*base_, minpoly_, var_) + ")";
    case Kind::RationalFunction: return base_->descriptor() + "(" + var_ + ")";
    }
    return "?";
}

bool Field::same(const Field& o) const
{
    if (this == &o) return true;
    if (kind_ != o.kind_ || char_ != o.char_) return false;
    if (kind_ == Kind::Rationals || kind_ == Kind::PrimeFinite) return true;
    if (var_ != o.var_ || !base_->same(*o.base_)) return false;
    if (kind_ == Kind::SimpleExtension) return poly::eq(*base_, minpoly_, o.minpoly_);
    return true;
}

Elem Field::element_at(mpz_class index) const
{
    if (!finite_) throw Error(ErrorCode::NotFinite, descriptor() + " is infinite");
    if (kind_ == Kind::PrimeFinite) {
        Elem e;
        e.q = mpz_class(index % char_);
        return e;
    }
    Elem e;
    const mpz_class& bs = base_->size();
    int d = degree();
    for (int i = 0; i < d; ++i) {
        e.num.push_back(base_->element_at(mpz_class(index % bs)));
        index /= bs;
    }
    poly::trim(*base_, e.num);
    return e;
}

Elem Field::random(std::mt19937_64& rng) const
{
    if (finite_) {
        mpz_class r = 0;
        size_t bits = mpz_sizeinbase(size_.get_mpz_t(), 2) + 64;
        for (size_t b = 0; b < bits; b += 32) {
            r <<= 32;
            r += static_cast<unsigned long>(rng() & 0xffffffffu);
        }
        return element_at(mpz_class(r % size_));
    }
    std::uniform_int_distribution<long> d(-9, 9);
    switch (kind_) {
    case Kind::Rationals: return from_int(d(rng));
    case Kind::SimpleExtension: {
        Elem e;
        for (int i = 0; i < degree(); ++i) e.num.push_back(base_->random(rng));
        poly::trim(*base_, e.num);
        return e;
    }
    case Kind::RationalFunction: {
        Poly n{base_->random(rng), base_->random(rng)};
        return make_ratfn(*this, n, {base_->one()});
    }
    default: return zero();
    }
}

std::vector<std::string> Field::variables() const
{
    std::vector<std::string> v = base_ ? base_->variables() : std::vector<std::string>{};
    if (!var_.empty()) v.push_back(var_);
    return v;
}

bool same_field(const FieldPtr& a, const FieldPtr& b) { return a && b && a->same(*b); }

void require_same(const FieldPtr& a, const FieldPtr& b, const char* where)
{
    if (!same_field(a, b))
        throw Error(ErrorCode::FieldMismatch,
                    std::string(where) + ": " + (a ? a->descriptor() : "?") + " vs " + (b ? b->descriptor() : "?"));
}

// ---------------------------------------------------------------------------

namespace integer {

bool is_prime(const mpz_class& n)
{
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

namespace {

// Brent's variant, gcds batched over 128 steps
mpz_class rho(const mpz_class& n)
{
    if (n % 2 == 0) return 2;
    for (unsigned long c = 1;; ++c) {
        auto f = [&](const mpz_class& v) { return mpz_class((v * v + c) % n); };
        mpz_class y = 2, x, ys, q = 1, d = 1;
        for (unsigned long r = 1; d == 1; r *= 2) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = f(y);
            for (unsigned long k = 0; k < r && d == 1; k += 128) {
                ys = y;
                for (unsigned long i = 0; i < std::min(128UL, r - k); ++i) {
                    y = f(y);
                    q = q * abs(x - y) % n;
                }
                mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (d == n) {
            // the batch overshot; step back one at a time
            do {
                ys = f(ys);
                mpz_class diff = abs(x - ys);
                mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (d == 1);
        }
        if (d != n) return d;
    }
}

void split(const mpz_class& n, std::vector<mpz_class>& out)
{
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    mpz_class d = rho(n);
    split(d, out);
    split(n / d, out);
}

}  // namespace

std::vector<std::pair<mpz_class, int>> factor(const mpz_class& n0)
{
    if (n0 == 0) throw Error(ErrorCode::InvalidArgument, "factor(0)");
    mpz_class n = abs(n0);
    // reduction passes factor the same large norms many times
    static std::map<mpz_class, std::vector<std::pair<mpz_class, int>>> memo;
    bool big = n > 1000000;
    if (big) {
        auto it = memo.find(n);
        if (it != memo.end()) return it->second;
    }
    mpz_class key = n;
    std::vector<mpz_class> primes;
    mpz_class root = sqrt(n);
    for (unsigned long p = 2; p < 10000 && root >= p; p += p == 2 ? 1 : 2) {
        if (!mpz_divisible_ui_p(n.get_mpz_t(), p)) continue;
        do {
            primes.push_back(p);
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        } while (mpz_divisible_ui_p(n.get_mpz_t(), p));
        root = sqrt(n);
    }
    if (n > 1 && root * root == n && is_prime(root)) {
        primes.push_back(root);
        primes.push_back(root);
    } else {
        split(n, primes);
    }
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<mpz_class, int>> out;
    for (auto& p : primes) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.push_back({p, 1});
    }
    if (big) {
        if (memo.size() > 4096) memo.clear();
        memo.emplace(key, out);
    }
    return out;
}

mpz_class squarefree_part(const mpz_class& n)
{
    mpz_class r = n < 0 ? -1 : 1;
    for (auto& [p, e] : factor(n))
        if (e % 2) r *= p;
    return r;
}

}  // namespace integer

// ---------------------------------------------------------------------------

namespace poly {

void trim(const Field& F, Poly& p)
{
    while (!p.empty() && F.is_zero(p.back())) p.pop_back();
}

int deg(const Poly& p) { return static_cast<int>(p.size()) - 1; }

bool is_zero(const Poly& p) { return p.empty(); }

const Elem& lc(const Poly& p) { return p.back(); }

Poly constant(const Field& F, const Elem& c)
{
    if (F.is_zero(c)) return {};
    return {c};
}

Poly monomial(const Field& F, const Elem& c, int k)
{
    if (F.is_zero(c)) return {};
    Poly p(k + 1, F.zero());
    p[k] = c;
    return p;
}

Poly x(const Field& F) { return {F.zero(), F.one()}; }

Poly add(const Field& F, const Poly& a, const Poly& b)
{
    Poly r(std::max(a.size(), b.size()), F.zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
    trim(F, r);
    return r;
}

Poly neg(const Field& F, const Poly& a)
{
    Poly r;
    r.reserve(a.size());
    for (auto& c : a) r.push_back(F.neg(c));
    return r;
}

Poly sub(const Field& F, const Poly& a, const Poly& b) { return add(F, a, neg(F, b)); }

Poly mul(const Field& F, const Poly& a, const Poly& b)
{
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, F.zero());
    for (size_t i = 0; i < a.size(); ++i) {
        if (F.is_zero(a[i])) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    trim(F, r);
    return r;
}

Poly scale(const Field& F, const Poly& a, const Elem& c)
{
    if (F.is_zero(c)) return {};
    Poly r;
    r.reserve(a.size());
    for (auto& x : a) r.push_back(F.mul(x, c));
    trim(F, r);
    return r;
}

void divmod(const Field& F, const Poly& a, const Poly& b, Poly& q, Poly& r)
{
    if (b.empty()) throw Error(ErrorCode::InvalidArgument, "polynomial division by zero");
    r = a;
    trim(F, r);
    int db = deg(b);
    if (deg(r) < db) {
        q.clear();
        return;
    }
    q.assign(deg(r) - db + 1, F.zero());
    Elem il = F.inv(lc(b));
    while (!r.empty() && deg(r) >= db) {
        int k = deg(r) - db;
        Elem c = F.mul(lc(r), il);
        q[k] = c;
        for (int i = 0; i <= db; ++i) r[i + k] = F.sub(r[i + k], F.mul(c, b[i]));
        trim(F, r);
    }
    trim(F, q);
}

Poly rem(const Field& F, const Poly& a, const Poly& b)
{
    Poly q, r;
    divmod(F, a, b, q, r);
    return r;
}

Poly quo(const Field& F, const Poly& a, const Poly& b)
{
    Poly q, r;
    divmod(F, a, b, q, r);
    return q;
}

Poly monic(const Field& F, const Poly& a)
{
    if (a.empty()) return a;
    return scale(F, a, F.inv(lc(a)));
}

Poly gcd(const Field& F, Poly a, Poly b)
{
    trim(F, a);
    trim(F, b);
    while (!b.empty()) {
        Poly r = rem(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(F, a);
}

Poly xgcd(const Field& F, const Poly& a, const Poly& b, Poly& s, Poly& t)
{
    Poly r0 = a, r1 = b, s0 = constant(F, F.one()), s1, t0, t1 = constant(F, F.one());
    trim(F, r0);
    trim(F, r1);
    while (!r1.empty()) {
        Poly q, r;
        divmod(F, r0, r1, q, r);
        Poly s2 = sub(F, s0, mul(F, q, s1));
        Poly t2 = sub(F, t0, mul(F, q, t1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.empty()) {
        s = s0;
        t = t0;
        return r0;
    }
    Elem il = F.inv(lc(r0));
    s = scale(F, s0, il);
    t = scale(F, t0, il);
    return scale(F, r0, il);
}

Poly deriv(const Field& F, const Poly& a)
{
    Poly r;
    for (size_t i = 1; i < a.size(); ++i) r.push_back(F.mul(F.from_int(static_cast<long>(i)), a[i]));
    trim(F, r);
    return r;
}

Elem eval(const Field& F, const Poly& a, const Elem& x)
{
    Elem r = F.zero();
    for (size_t i = a.size(); i-- > 0;) r = F.add(F.mul(r, x), a[i]);
    return r;
}

Poly compose(const Field& F, const Poly& a, const Poly& b)
{
    Poly r;
    for (size_t i = a.size(); i-- > 0;) r = add(F, mul(F, r, b), constant(F, a[i]));
    return r;
}

Poly pow(const Field& F, const Poly& a, unsigned e)
{
    Poly r = constant(F, F.one()), b = a;
    while (e) {
        if (e & 1) r = mul(F, r, b);
        e >>= 1;
        if (e) b = mul(F, b, b);
    }
    return r;
}

Poly powmod(const Field& F, const Poly& a, const mpz_class& e, const Poly& m)
{
    Poly r = rem(F, constant(F, F.one()), m), b = rem(F, a, m);
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t i = 0; i < bits; ++i) {
        if (mpz_tstbit(e.get_mpz_t(), i)) r = rem(F, mul(F, r, b), m);
        if (i + 1 < bits) b = rem(F, mul(F, b, b), m);
    }
    return r;
}

bool eq(const Field& F, const Poly& a, const Poly& b) { return cmp(F, a, b) == 0; }

int cmp(const Field& F, const Poly& a, const Poly& b)
{
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;) {
        int c = F.cmp(a[i], b[i]);
        if (c) return c;
    }
    return 0;
}

namespace {

bool atomic(const std::string& s)
{
    if (s.empty()) return true;
    size_t i = s[0] == '-' ? 1 : 0;
    bool digits = i < s.size();
    for (size_t j = i; j < s.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(s[j])) && s[j] != '/') digits = false;
    if (digits) return true;
    if (i == 0 && (std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        for (char c : s)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
        return true;
    }
    return false;
}

}  // namespace

std::string str(const Field& F, const Poly& a, const std::string& var)
{
    if (a.empty()) return "0";
    std::vector<std::string> terms;
    for (size_t i = a.size(); i-- > 0;) {
        if (F.is_zero(a[i])) continue;
        std::string c = F.str(a[i]);
        if (i == 0) {
            terms.push_back(c);
            continue;
        }
        std::string mono = var + (i > 1 ? "^" + std::to_string(i) : "");
        if (F.is_one(a[i]))
            terms.push_back(mono);
        else if (F.eq(a[i], F.neg(F.one())))
            terms.push_back("-" + mono);
        else
            terms.push_back((atomic(c) ? c : "(" + c + ")") + "*" + mono);
    }
    std::string out = terms[0];
    for (size_t i = 1; i < terms.size(); ++i) {
        const std::string& t = terms[i];
        if (!t.empty() && t[0] == '-')
            out += " - " + t.substr(1);
        else
            out += " + " + t;
    }
    return out;
}

Poly embed(const Field& F, const Field& sub, const Poly& a)
{
    Poly r;
    for (auto& c : a) r.push_back(F.embed_from(sub, c));
    trim(F, r);
    return r;
}

}  // namespace poly

}  // namespace mwk
