#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "mwk/parse.hpp"

#ifndef MWK_SUITE_DIR
#define MWK_SUITE_DIR "suites"
#endif

namespace mwk::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kVerbs = {"normalize", "equal",  "residue",      "specialize", "transfer",
                                      "phi",       "theta",  "reduce-cycle", "verify"};

std::string trim(const std::string& s)
{
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// ---------------------------------------------------------------- expressions

struct Val {
    std::optional<int> deg;  // unset only for zero
    std::vector<MWTerm> terms;
};

class ExprParser {
public:
    ExprParser(FieldPtr F, const std::string& s, bool milnor) : F_(std::move(F)), s_(s), milnor_(milnor) {}

    Val parse()
    {
        Val v = sum();
        skip_space(s_, pos_);
        if (pos_ != s_.size()) syntax_error(s_, pos_, "an operator or end of expression");
        return v;
    }

private:
    bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

    Val add(Val a, Val b, size_t at) const
    {
        if (!a.deg) return b;
        if (!b.deg) return a;
        if (*a.deg != *b.deg)
            throw Error(ErrorCode::NonHomogeneous, "at position " + std::to_string(at) + ": adding degree " +
                                                       std::to_string(*a.deg) + " and degree " + std::to_string(*b.deg));
        a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
        return a;
    }

    static Val neg(Val a)
    {
        for (auto& t : a.terms) t.coef = -t.coef;
        return a;
    }

    Val mul(const Val& a, const Val& b) const
    {
        if (!a.deg || !b.deg) return Val{};
        Val out{*a.deg + *b.deg, {}};
        for (auto& x : a.terms)
            for (auto& y : b.terms) {
                MWTerm t{x.coef * y.coef, F_->mul(x.twist, y.twist), x.eta + y.eta, x.entries};
                t.entries.insert(t.entries.end(), y.entries.begin(), y.entries.end());
                out.terms.push_back(std::move(t));
            }
        return out;
    }

    Val sum()
    {
        Val v = term();
        for (;;) {
            skip_space(s_, pos_);
            size_t at = pos_;
            if (peek('+')) {
                ++pos_;
                v = add(v, term(), at);
            } else if (peek('-')) {
                ++pos_;
                v = add(v, neg(term()), at);
            } else {
                return v;
            }
        }
    }

    bool starts_atom() const
    {
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return c == '[' || c == '<' || c == '{' || c == '(' || std::isalpha(static_cast<unsigned char>(c));
    }

    Val term()
    {
        Val v = signed_factor();
        for (;;) {
            skip_space(s_, pos_);
            if (peek('*')) {
                ++pos_;
                v = mul(v, signed_factor());
            } else if (starts_atom()) {
                v = mul(v, power());
            } else {
                return v;
            }
        }
    }

    Val signed_factor()
    {
        skip_space(s_, pos_);
        if (peek('-')) {
            ++pos_;
            return neg(signed_factor());
        }
        if (peek('+')) {
            ++pos_;
            return signed_factor();
        }
        return power();
    }

    Val power()
    {
        Val base = atom();
        skip_space(s_, pos_);
        if (!peek('^')) return base;
        ++pos_;
        skip_space(s_, pos_);
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_ || pos_ - start > 3) syntax_error(s_, start, "a small nonnegative exponent");
        int k = std::stoi(s_.substr(start, pos_ - start));
        Val v{0, {MWTerm{1, F_->one(), 0, {}}}};
        for (int i = 0; i < k; ++i) v = mul(v, base);
        return v;
    }

    std::vector<Elem> entries(char close)
    {
        ++pos_;
        std::vector<Elem> out;
        for (;;) {
            skip_space(s_, pos_);
            size_t at = pos_;
            Elem a = scan_elem(*F_, s_, pos_);
            if (F_->is_zero(a)) throw Error(ErrorCode::InvalidArgument, "zero entry at position " + std::to_string(at));
            out.push_back(a);
            skip_space(s_, pos_);
            if (peek(',')) {
                ++pos_;
                continue;
            }
            if (peek(close)) {
                ++pos_;
                return out;
            }
            syntax_error(s_, pos_, std::string("',' or '") + close + "'");
        }
    }

    Val atom()
    {
        skip_space(s_, pos_);
        if (pos_ >= s_.size()) syntax_error(s_, pos_, "an expression");
        char c = s_[pos_];
        const Elem one = F_->one();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            mpz_class n(s_.substr(start, pos_ - start));
            if (n == 0) return Val{};
            return Val{0, {MWTerm{n, one, 0, {}}}};
        }
        if (c == '[' || c == '{') {
            auto a = entries(c == '[' ? ']' : '}');
            return Val{static_cast<int>(a.size()), {MWTerm{1, one, 0, a}}};
        }
        if (c == '(') {
            ++pos_;
            Val v = sum();
            skip_space(s_, pos_);
            if (!peek(')')) syntax_error(s_, pos_, "')'");
            ++pos_;
            return v;
        }
        if (c == '<' && !milnor_) {
            Val v{0, {}};
            for (auto& a : entries('>')) v.terms.push_back(MWTerm{1, a, 0, {}});
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) && !milnor_) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            if (name == "eta") return Val{-1, {MWTerm{1, one, 1, {}}}};
            if (name == "h") return Val{0, {MWTerm{2, one, 0, {}}, MWTerm{1, one, 1, {F_->from_int(-1)}}}};
            if (name == "eps") return Val{0, {MWTerm{-1, F_->from_int(-1), 0, {}}}};
            pos_ = start;
        }
        syntax_error(s_, pos_, milnor_ ? "an integer, {..}, [..] or '('" : "an integer, eta, h, eps, [..], <..> or '('");
    }

    FieldPtr F_;
    const std::string& s_;
    bool milnor_;
    size_t pos_ = 0;
};

int checked_degree(const Val& v, std::optional<int> degree)
{
    if (degree && v.deg && *v.deg != *degree)
        throw Error(ErrorCode::NonHomogeneous,
                    "expression has degree " + std::to_string(*v.deg) + ", expected " + std::to_string(*degree));
    return v.deg.value_or(degree.value_or(0));
}

struct Annotation {
    bool milnor = false;
    int degree = 0;
    FieldPtr F;
};

Annotation parse_annotation(const std::string& text)
{
    std::string t = trim(text);
    Annotation a;
    size_t pos;
    if (t.rfind("KMW(", 0) == 0)
        pos = 4;
    else if (t.rfind("KM(", 0) == 0) {
        a.milnor = true;
        pos = 3;
    } else
        syntax_error(t, 0, "'KMW(' or 'KM('");
    if (t.back() != ')') syntax_error(t, t.size(), "')'");
    size_t comma = t.find(',', pos);
    if (comma == std::string::npos) syntax_error(t, pos, "'<degree>, <field>'");
    std::string d = trim(t.substr(pos, comma - pos));
    size_t used = 0;
    try {
        a.degree = std::stoi(d, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (d.empty() || used != d.size()) syntax_error(t, pos, "an integer degree");
    a.F = parse_field(t.substr(comma + 1, t.size() - comma - 2));
    if (a.milnor && a.degree < 0) throw Error(ErrorCode::NegativeDegreeUnsupported, "K^M in negative degree");
    return a;
}

// ---------------------------------------------------------------- cycles

std::vector<std::string> split_top(const std::string& s, char sep)
{
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

FieldPtr point_field(const FieldPtr& L, const std::string& seg0)
{
    std::string seg = trim(seg0);
    if (seg.empty()) return L;
    if (seg[0] == '[') return parse_field(L->descriptor() + seg);
    std::set<std::string> fresh;
    auto known = L->variables();
    for (size_t i = 0; i < seg.size();) {
        if (std::isalpha(static_cast<unsigned char>(seg[i]))) {
            size_t j = i;
            while (j < seg.size() && (std::isalnum(static_cast<unsigned char>(seg[j])) || seg[j] == '_')) ++j;
            std::string name = seg.substr(i, j - i);
            if (std::find(known.begin(), known.end(), name) == known.end()) fresh.insert(name);
            i = j;
        } else {
            ++i;
        }
    }
    if (fresh.size() != 1) syntax_error(seg, 0, "a minimal polynomial in one new variable");
    std::string var = *fresh.begin();
    return Field::extension(L, parse_poly(*L, seg, var), var);
}

// ---------------------------------------------------------------- printing

std::string class_text(const MWClass& a)
{
    const Field& F = *a.F;
    if (a.degree >= 1) {
        if (mw_is_zero(a) == Tri::Yes) return "0";
        return mw_class_str(a);
    }
    if (a.degree == 0) return gw_str(F, GW{a.rank, a.witt});
    Form an;
    if (F.kind() == Field::Kind::Rationals || F.is_finite())
        an = witt_decompose(F, a.witt).anisotropic;
    else
        an = witt_cancel(F, a.witt);
    if (an.empty()) return "0";
    int k = -a.degree;
    return "eta" + (k > 1 ? "^" + std::to_string(k) : std::string()) + "*(" +
           gw_str(F, GW{static_cast<long>(an.size()), an}) + ")";
}

std::string milnor_text(const MilnorExpr& e)
{
    if (mk_is_zero(e) == Tri::Yes) return "0";
    return mk_str(e);
}

json legs(const MWClass& a)
{
    const Field& F = *a.F;
    json t = json::array();
    t.push_back("field: " + F.descriptor());
    t.push_back("degree: " + std::to_string(a.degree));
    if (a.degree >= 1) t.push_back("milnor: " + mk_str(a.milnor));
    if (a.degree == 0) t.push_back("rank: " + a.rank.get_str());
    t.push_back("witt: " + form_str(F, a.witt));
    return t;
}

void set_comparison(Report& r, Tri t)
{
    r.status = t == Tri::Yes ? "ok" : t == Tri::No ? "distinct" : "unknown";
}

// ---------------------------------------------------------------- verbs

FieldPtr field_of(const Command& c) { return c.field ? c.field : Field::rationals(); }

MWExpr mw_arg(const Command& c, size_t i, const FieldPtr& F, std::optional<int> degree)
{
    return parse_mw(F, c.exprs.at(i), degree);
}

MilnorExpr km_arg(const Command& c, size_t i, const FieldPtr& F, std::optional<int> degree)
{
    return parse_milnor(F, c.exprs.at(i), degree);
}

Report do_normalize(const Command& c)
{
    Report r;
    FieldPtr F = field_of(c);
    if (c.milnor) {
        MilnorExpr e = km_arg(c, 0, F, c.degree);
        MilnorNormal n = mk_normalize(e);
        r.result = milnor_text(e);
        r.trace.push_back("degree: " + std::to_string(n.degree));
        r.trace.push_back("record: " + n.record);
        r.trace.push_back(std::string("decided: ") + tri_name(n.decided));
        if (c.exprs.size() > 1) set_comparison(r, mk_equal(e, km_arg(c, 1, F, e.degree)));
        return r;
    }
    MWExpr e = mw_arg(c, 0, F, c.degree);
    MWClass a = mw_normalize(e);
    r.result = class_text(a);
    r.trace = legs(a);
    if (c.exprs.size() > 1) set_comparison(r, mw_equal(a, mw_normalize(mw_arg(c, 1, F, e.degree))));
    return r;
}

Report do_equal(const Command& c)
{
    Report r;
    FieldPtr F = field_of(c);
    Tri t;
    if (c.milnor) {
        MilnorExpr a = km_arg(c, 0, F, c.degree);
        t = mk_equal(a, km_arg(c, 1, F, a.degree));
    } else {
        MWExpr a = mw_arg(c, 0, F, c.degree);
        MWClass x = mw_normalize(a), y = mw_normalize(mw_arg(c, 1, F, a.degree));
        t = mw_equal(x, y);
        r.trace.push_back({{"lhs", legs(x)}, {"rhs", legs(y)}});
    }
    set_comparison(r, t);
    r.result = t == Tri::Yes ? "equal" : t == Tri::No ? "distinct" : "unknown";
    return r;
}

PointValuation parse_at(const FieldPtr& F, const std::string& at0)
{
    std::string at = trim(at0);
    if (at.empty()) throw Error(ErrorCode::InvalidArgument, "--at is required");
    if (F->kind() == Field::Kind::Rationals) {
        if (!std::all_of(at.begin(), at.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
            syntax_error(at, 0, "a prime number");
        return PointValuation::at_prime(F, mpz_class(at));
    }
    if (F->kind() == Field::Kind::RationalFunction) {
        if (at == "inf" || at == "infinity") return PointValuation::at_infinity(F);
        return PointValuation::at_poly(F, parse_poly(*F->base(), at, F->var()));
    }
    throw Error(ErrorCode::UnsupportedField, "valuations are available on Q and on rational function fields");
}

Report do_local(const Command& c, bool is_residue)
{
    Report r;
    FieldPtr F = field_of(c);
    PointValuation v = parse_at(F, c.at);
    r.trace.push_back("valuation: " + v.str());
    r.trace.push_back("residue field: " + v.residue->descriptor());
    if (c.milnor) {
        MilnorExpr e = km_arg(c, 0, F, c.degree);
        MilnorExpr out = is_residue ? mk_residue(v, e) : mk_specialize(v, e);
        r.result = milnor_text(out);
        if (c.exprs.size() > 1) set_comparison(r, mk_equal(out, km_arg(c, 1, v.residue, out.degree)));
        return r;
    }
    MWExpr e = mw_arg(c, 0, F, c.degree);
    MWClass out;
    if (is_residue) {
        TwistedMWClass tw = residue(v, e);
        out = tw.value;
        r.trace.push_back("twist: " + tw.twist.str(*v.residue));
    } else {
        out = specialize(v, e);
    }
    r.result = class_text(out);
    if (c.exprs.size() > 1) set_comparison(r, mw_equal(out, mw_normalize(mw_arg(c, 1, v.residue, out.degree))));
    return r;
}

Report do_transfer(const Command& c)
{
    Report r;
    FieldPtr L = field_of(c);
    if (c.ext.empty()) throw Error(ErrorCode::InvalidArgument, "transfer needs at least one --ext");
    FieldPtr E = L;
    for (auto& x : c.ext) E = point_field(E, x);
    r.trace.push_back("extension: " + E->descriptor());
    r.trace.push_back("kind: " + c.kind);
    if (c.milnor) {
        MilnorExpr out = mk_transfer(E, L, km_arg(c, 0, E, c.degree));
        r.result = milnor_text(out);
        if (c.exprs.size() > 1) set_comparison(r, mk_equal(out, km_arg(c, 1, L, out.degree)));
        return r;
    }
    MWExpr e = mw_arg(c, 0, E, c.degree);
    MWExpr t = c.kind == "geometric" ? transfer_geometric_expr(E, L, e) : transfer_cohomological_expr(E, L, e);
    MWClass out = mw_normalize(t);
    r.result = class_text(out);
    if (c.exprs.size() > 1) set_comparison(r, mw_equal(out, mw_normalize(mw_arg(c, 1, L, out.degree))));
    return r;
}

Report do_phi(const Command& c)
{
    if (c.milnor) throw Error(ErrorCode::InvalidArgument, "phi takes a K^MW class");
    Report r;
    Correspondence cyc = phi(mw_arg(c, 0, field_of(c), c.degree));
    r.result = cycle_str(cyc);
    r.trace.push_back("points: " + std::to_string(cyc.points.size()));
    return r;
}

Report do_theta(const Command& c)
{
    Report r;
    Correspondence cyc = parse_cycle(c.exprs.at(0));
    MWClass a = theta(cyc, true);
    r.result = class_text(a);
    r.trace = legs(a);
    if (c.exprs.size() > 1) set_comparison(r, mw_equal(a, mw_normalize(parse_mw(cyc.L, c.exprs[1], cyc.q))));
    return r;
}

json move_json(const ReductionMove& m)
{
    return json{{"kind", m.kind},
                {"point", m.point},
                {"over", m.over},
                {"family", m.kind == "family" ? family_str(m.family) : std::string()},
                {"multiplicity", m.multiplicity.get_str()},
                {"ev0", cycle_str(m.ev0)},
                {"ev1", cycle_str(m.ev1)},
                {"before", cycle_str(m.before)},
                {"after", cycle_str(m.after)}};
}

Report do_reduce(const Command& c)
{
    Report r;
    Correspondence in = parse_cycle(c.exprs.at(0));
    Correspondence cur = in;
    Tri verdict = Tri::Yes;
    std::string why;
    while (max_degree(cur) > 1) {
        int d = max_degree(cur);
        auto [next, tr] = reduce_degree(cur);
        for (auto& m : tr.moves) r.trace.push_back(move_json(m));
        if (!replay(tr, cur, next)) {
            verdict = Tri::No;
            why = "replay of the trace does not reproduce the output";
        } else if (max_degree(next) >= d) {
            verdict = Tri::No;
            why = "maximal degree did not drop";
        }
        cur = next;
        if (c.once || verdict == Tri::No) break;
    }
    MWClass before = theta(in), after = theta(cur, true);
    Tri kept = mw_equal(before, after);
    if (kept != Tri::Yes && why.empty()) why = "theta changed";
    verdict = tri_and(verdict, kept);
    r.result = cycle_str(cur);
    r.trace.push_back(json{{"kind", "class"}, {"value", class_text(after)}});
    if (c.exprs.size() > 1) {
        Tri t = mw_equal(after, mw_normalize(parse_mw(in.L, c.exprs[1], in.q)));
        if (t != Tri::Yes && why.empty()) why = "class differs from the expected one";
        verdict = tri_and(verdict, t);
    }
    if (!why.empty()) r.trace.push_back(json{{"kind", "failure"}, {"value", why}});
    set_comparison(r, verdict);
    return r;
}

// ---------------------------------------------------------------- suites

struct CaseOutcome {
    bool pass = false;
    std::string detail;
};

Command command_for(const std::string& verb, const std::vector<std::string>& rest)
{
    std::vector<std::string> args{verb};
    args.insert(args.end(), rest.begin(), rest.end());
    return parse_args(args);
}

CaseOutcome run_check(const std::string& kind, const std::vector<std::string>& rest)
{
    Command c = command_for("normalize", rest);
    FieldPtr F = field_of(c);
    if (kind == "theta-phi") {
        MWExpr e = mw_arg(c, 0, F, c.degree);
        Correspondence cyc = phi(e);
        MWClass back = theta(cyc, true);
        bool ok = mw_equal(back, mw_normalize(e)) == Tri::Yes;
        return {ok, cycle_str(cyc) + " -> " + class_text(back)};
    }
    if (kind == "roundtrip") {
        Report r = execute(c);
        if (r.status != "ok") return {false, "normalize failed: " + r.result};
        Command again = c;
        again.exprs = {r.result, c.exprs[0]};
        again.verb = "equal";
        Report e = execute(again);
        return {e.status == "ok", r.result + " reparsed: " + e.result};
    }
    if (kind == "family") {
        if (c.exprs.size() != 2) throw Error(ErrorCode::InvalidArgument, "check family takes a and b");
        Elem a = parse_elem(*F, c.exprs[0]), b = parse_elem(*F, c.exprs[1]);
        ResiduePresentation fam = two_point_family(F, a, b);
        auto pt = [&](const Elem& x, Form f) { return CyclePoint{F, {x}, gw_of(std::move(f))}; };
        const Field& K = *F;
        Elem ab = K.mul(a, b);
        Correspondence at1{F, 1, {}}, at0{F, 1, {}};
        if (K.eq(a, b))
            at1.points = {pt(a, {K.one(), K.from_int(-1)})};
        else
            at1.points = {pt(a, {K.sub(a, b)}), pt(b, {K.sub(b, a)})};
        if (K.is_one(ab))
            at0.points = {pt(K.one(), {K.one(), K.from_int(-1)})};
        else
            at0.points = {pt(K.one(), {K.sub(K.one(), ab)}), pt(ab, {K.sub(ab, K.one())})};
        Correspondence e1 = family_evaluate(fam, K.one()), e0 = family_evaluate(fam, K.zero());
        bool ok = cycle_identical(e1, cycle_simplify(at1)) == Tri::Yes &&
                  cycle_identical(e0, cycle_simplify(at0)) == Tri::Yes &&
                  mw_equal(theta(e0), theta(e1)) == Tri::Yes;
        return {ok, "u=0: " + cycle_str(e0) + "; u=1: " + cycle_str(e1)};
    }
    throw Error(ErrorCode::InvalidArgument, "unknown check '" + kind + "'");
}

CaseOutcome run_case(const std::string& line)
{
    try {
        if (line.rfind("check ", 0) == 0) {
            auto tok = split_command(line.substr(6));
            if (tok.empty()) throw Error(ErrorCode::SyntaxError, "check needs a kind");
            std::string kind = tok[0];
            tok.erase(tok.begin());
            return run_check(kind, tok);
        }
        size_t arrow = line.rfind("=>");
        if (arrow == std::string::npos) throw Error(ErrorCode::SyntaxError, "case line without '=>'");
        std::string expect = trim(line.substr(arrow + 2));
        Report r = run(split_command(line.substr(0, arrow)));
        std::string got = r.status + ": " + r.result;
        if (expect.rfind("status:", 0) == 0) return {r.status == trim(expect.substr(7)), got};
        return {r.status != "error" && r.result == expect, got};
    } catch (const std::exception& e) {
        return {false, e.what()};
    }
}

Report do_verify(const Command& c)
{
    std::string dir = c.suite_dir.empty() ? default_suite_dir() : c.suite_dir;
    std::string name = c.suite.empty() ? (c.exprs.empty() ? "all" : c.exprs[0]) : c.suite;
    std::vector<std::string> names = suite_names(dir);
    if (name != "all") {
        if (std::find(names.begin(), names.end(), name) == names.end())
            throw Error(ErrorCode::UnknownSuite, "no suite named '" + name + "' in " + dir);
        names = {name};
    }
    Report r;
    long passed = 0, total = 0;
    std::string first;
    for (auto& n : names) {
        std::ifstream in(std::filesystem::path(dir) / (n + ".cases"));
        std::string line;
        long lineno = 0, sp = 0, st = 0;
        json failures = json::array();
        while (std::getline(in, line)) {
            ++lineno;
            std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            CaseOutcome o = run_case(t);
            ++st;
            if (o.pass) {
                ++sp;
                continue;
            }
            std::string witness = n + ":" + std::to_string(lineno) + ": " + t + " -> " + o.detail;
            if (first.empty()) first = witness;
            failures.push_back(witness);
        }
        r.trace.push_back(json{{"suite", n}, {"passed", sp}, {"total", st}, {"failures", failures}});
        passed += sp;
        total += st;
    }
    r.result = name + ": " + std::to_string(passed) + "/" + std::to_string(total) + " passed";
    if (!first.empty()) {
        r.status = "distinct";
        r.result += "; first failure " + first;
    }
    return r;
}

size_t expected_max(const std::string& verb)
{
    if (verb == "equal") return 2;
    if (verb == "phi") return 1;
    return 2;
}

size_t expected_min(const std::string& verb)
{
    if (verb == "equal") return 2;
    if (verb == "verify") return 0;
    return 1;
}

}  // namespace

// ---------------------------------------------------------------- public

MWExpr parse_mw(const FieldPtr& F, const std::string& text, std::optional<int> degree)
{
    Val v = ExprParser(F, text, false).parse();
    int d = checked_degree(v, degree);
    return MWExpr{F, d, v.terms};
}

MilnorExpr parse_milnor(const FieldPtr& F, const std::string& text, std::optional<int> degree)
{
    Val v = ExprParser(F, text, true).parse();
    int d = checked_degree(v, degree);
    if (d < 0) throw Error(ErrorCode::NegativeDegreeUnsupported, "K^M in negative degree");
    MilnorExpr m{F, d, {}};
    for (auto& t : v.terms) m.terms.push_back(MSymbol{t.coef, t.entries});
    return m;
}

Correspondence parse_cycle(const std::string& text)
{
    std::string t = trim(text);
    if (t.rfind("cycle{", 0) != 0) syntax_error(t, 0, "'cycle{'");
    size_t close = t.rfind('}');
    if (close == std::string::npos) syntax_error(t, t.size(), "'}'");
    size_t pos = close + 1;
    skip_space(t, pos);
    if (pos >= t.size() || t[pos] != ':') syntax_error(t, pos, "': L -> Gm^q'");
    ++pos;
    size_t arrow = t.find("->", pos);
    if (arrow == std::string::npos) syntax_error(t, pos, "'->'");
    FieldPtr L = parse_field(trim(t.substr(pos, arrow - pos)));
    pos = arrow + 2;
    skip_space(t, pos);
    if (t.compare(pos, 2, "Gm") != 0) syntax_error(t, pos, "'Gm'");
    pos += 2;
    int q = 1;
    if (pos < t.size() && t[pos] == '^') {
        size_t start = ++pos;
        while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
        if (start == pos || pos - start > 3) syntax_error(t, start, "an exponent");
        q = std::stoi(t.substr(start, pos - start));
    }
    skip_space(t, pos);
    if (pos != t.size()) syntax_error(t, pos, "end of cycle");

    Correspondence c{L, q, {}};
    pos = 6;
    bool first = true;
    for (;;) {
        skip_space(t, pos);
        if (pos == close) break;
        mpz_class mult = 1;
        if (t[pos] == '+' || t[pos] == '-') {
            if (t[pos] == '-') mult = -1;
            ++pos;
            skip_space(t, pos);
        } else if (!first) {
            syntax_error(t, pos, "'+', '-' or '}'");
        }
        first = false;
        if (std::isdigit(static_cast<unsigned char>(t[pos]))) {
            size_t start = pos;
            while (pos < close && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
            mult *= mpz_class(t.substr(start, pos - start));
            skip_space(t, pos);
            if (t[pos] != '*') syntax_error(t, pos, "'*'");
            ++pos;
            skip_space(t, pos);
        }
        if (t.compare(pos, 6, "point(") != 0) syntax_error(t, pos, "'point('");
        size_t start = pos + 6, end = start;
        for (int depth = 1; end < close; ++end) {
            if (t[end] == '(') ++depth;
            if (t[end] == ')' && --depth == 0) break;
        }
        if (end >= close) syntax_error(t, start, "')' closing the point");
        auto parts = split_top(t.substr(start, end - start), ';');
        if (parts.size() != 3) syntax_error(t, start, "'field; coordinates; form'");
        FieldPtr E = point_field(L, parts[0]);
        CyclePoint p{E, {}, {}};
        if (!trim(parts[1]).empty())
            for (auto& x : split_top(parts[1], ',')) {
                Elem e = parse_elem(*E, trim(x));
                if (E->is_zero(e)) throw Error(ErrorCode::InvalidArgument, "coordinate 0 is not on Gm");
                p.coords.push_back(e);
            }
        if (static_cast<int>(p.coords.size()) != q)
            throw Error(ErrorCode::InvalidArgument, "point with " + std::to_string(p.coords.size()) +
                                                        " coordinates in a cycle to Gm^" + std::to_string(q));
        MWClass f = mw_normalize(parse_mw(E, trim(parts[2]), 0));
        p.coef = GW{f.rank * mult, witt_multiple(*E, f.witt, mult)};
        c.points.push_back(std::move(p));
        pos = end + 1;
    }
    return cycle_simplify(c);
}

std::vector<std::string> split_command(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    bool have = false;
    char quote = 0;
    for (size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quote) {
            if (ch == quote)
                quote = 0;
            else if (ch == '\\' && quote == '"' && i + 1 < line.size() && (line[i + 1] == '"' || line[i + 1] == '\\'))
                cur += line[++i];
            else
                cur += ch;
        } else if (ch == '"' || ch == '\'') {
            quote = ch;
            have = true;
        } else if (std::isspace(static_cast<unsigned char>(ch))) {
            if (have) out.push_back(cur);
            cur.clear();
            have = false;
        } else {
            cur += ch;
            have = true;
        }
    }
    if (quote) throw Error(ErrorCode::SyntaxError, "unterminated quote");
    if (have) out.push_back(cur);
    return out;
}

Command parse_args(const std::vector<std::string>& args)
{
    Command c;
    std::string field_text;
    std::vector<std::string> pos;
    // Options are scanned by hand: expressions such as -[2] or [a, b] must
    // reach the expression parser untouched.
    const std::set<std::string> valued = {"--field", "--at", "--ext", "--kind", "--suite", "--suite-dir"};
    bool options = true;
    for (size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (!options || a.rfind("--", 0) != 0) {
            pos.push_back(a);
            continue;
        }
        if (a == "--") {
            options = false;
            continue;
        }
        if (a == "--json" || a == "--once") {
            (a == "--json" ? c.json : c.once) = true;
            continue;
        }
        std::string name = a, value;
        size_t eq = a.find('=');
        if (eq != std::string::npos) {
            name = a.substr(0, eq);
            value = a.substr(eq + 1);
        }
        if (!valued.count(name)) throw Error(ErrorCode::SyntaxError, "unknown option '" + name + "'");
        if (eq == std::string::npos) {
            if (i + 1 >= args.size()) throw Error(ErrorCode::SyntaxError, "option " + name + " needs a value");
            value = args[++i];
        }
        if (name == "--field") field_text = value;
        if (name == "--at") c.at = value;
        if (name == "--ext") c.ext.push_back(value);
        if (name == "--suite") c.suite = value;
        if (name == "--suite-dir") c.suite_dir = value;
        if (name == "--kind") {
            if (value != "geometric" && value != "cohomological")
                throw Error(ErrorCode::SyntaxError, "--kind is geometric or cohomological");
            c.kind = value;
        }
    }
    if (pos.empty()) throw Error(ErrorCode::SyntaxError, "expected a verb");
    c.verb = pos[0];
    if (!kVerbs.count(c.verb)) throw Error(ErrorCode::SyntaxError, "unknown verb '" + c.verb + "'");
    size_t at = pos.size();
    for (size_t i = 1; i < pos.size(); ++i)
        if (!pos[i].empty() && pos[i][0] == '@') {
            at = i;
            break;
        }
    c.exprs.assign(pos.begin() + 1, pos.begin() + static_cast<long>(at));
    if (at < pos.size()) {
        std::string ann = pos[at].substr(1);
        for (size_t i = at + 1; i < pos.size(); ++i) ann += " " + pos[i];
        Annotation a = parse_annotation(ann);
        c.milnor = a.milnor;
        c.degree = a.degree;
        c.field = a.F;
        if (!field_text.empty() && !parse_field(field_text)->same(*a.F))
            throw Error(ErrorCode::FieldMismatch, "--field disagrees with the annotation");
    } else if (!field_text.empty()) {
        c.field = parse_field(field_text);
    }
    if (c.exprs.size() < expected_min(c.verb) || c.exprs.size() > expected_max(c.verb) ||
        (c.verb == "verify" && c.exprs.size() > 1))
        throw Error(ErrorCode::SyntaxError, "wrong number of arguments for '" + c.verb + "'");
    return c;
}

Command parse_line(const std::string& text) { return parse_args(split_command(text)); }

Report execute(const Command& c)
{
    if (c.verb == "normalize") return do_normalize(c);
    if (c.verb == "equal") return do_equal(c);
    if (c.verb == "residue") return do_local(c, true);
    if (c.verb == "specialize") return do_local(c, false);
    if (c.verb == "transfer") return do_transfer(c);
    if (c.verb == "phi") return do_phi(c);
    if (c.verb == "theta") return do_theta(c);
    if (c.verb == "reduce-cycle") return do_reduce(c);
    if (c.verb == "verify") return do_verify(c);
    throw Error(ErrorCode::SyntaxError, "unknown verb '" + c.verb + "'");
}

Report run(const std::vector<std::string>& args)
{
    auto t0 = std::chrono::steady_clock::now();
    Report r;
    try {
        r = execute(parse_args(args));
    } catch (const std::exception& e) {
        r = Report{};
        r.status = "error";
        r.result = e.what();
    }
    r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

int Report::exit_code() const
{
    if (status == "ok") return 0;
    if (status == "distinct") return 1;
    return 2;
}

json Report::to_json() const { return json{{"status", status}, {"result", result}, {"trace", trace}, {"ms", ms}}; }

std::string render(const Report& r, bool as_json)
{
    if (as_json) return r.to_json().dump();
    if (r.status == "ok") return r.result;
    return r.status + ": " + r.result;
}

std::string default_suite_dir()
{
    if (const char* d = std::getenv("MWK_SUITES")) return d;
    return MWK_SUITE_DIR;
}

std::vector<std::string> suite_names(const std::string& dir)
{
    std::vector<std::string> out;
    std::error_code ec;
    for (auto& e : std::filesystem::directory_iterator(dir, ec))
        if (e.path().extension() == ".cases") out.push_back(e.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace mwk::cli
