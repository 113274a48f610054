#include "mwk/parse.hpp"

#include <cctype>

namespace mwk {

void syntax_error(const std::string& text, size_t pos, const std::string& expected)
{
    std::string near = pos < text.size() ? "'" + text.substr(pos, 12) + "'" : "end of input";
    throw Error(ErrorCode::SyntaxError,
                "at position " + std::to_string(pos) + ": expected " + expected + ", found " + near);
}

void skip_space(const std::string& text, size_t& pos)
{
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
}

namespace {

class ExprParser {
public:
    ExprParser(const Field& F, const std::string& s, size_t& pos, const std::string& var)
        : F_(F), s_(s), pos_(pos), var_(var) {}

    Poly expr()
    {
        Poly v = term();
        for (;;) {
            skip_space(s_, pos_);
            if (peek('+')) {
                ++pos_;
                v = poly::add(F_, v, term());
            } else if (peek('-')) {
                ++pos_;
                v = poly::sub(F_, v, term());
            } else {
                return v;
            }
        }
    }

private:
    bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

    Poly term()
    {
        Poly v = factor();
        for (;;) {
            skip_space(s_, pos_);
            if (peek('*')) {
                ++pos_;
                v = poly::mul(F_, v, factor());
            } else if (peek('/')) {
                size_t at = ++pos_;
                Poly d = factor();
                if (poly::deg(d) != 0) {
                    if (poly::is_zero(d)) throw Error(ErrorCode::InvalidArgument, "division by zero at position " + std::to_string(at));
                    syntax_error(s_, at, "a constant divisor");
                }
                v = poly::scale(F_, v, F_.inv(d[0]));
            } else {
                return v;
            }
        }
    }

    Poly factor()
    {
        skip_space(s_, pos_);
        if (peek('-')) {
            ++pos_;
            return poly::neg(F_, factor());
        }
        if (peek('+')) {
            ++pos_;
            return factor();
        }
        Poly base = primary();
        skip_space(s_, pos_);
        if (peek('^')) {
            ++pos_;
            skip_space(s_, pos_);
            bool negative = false;
            if (peek('-')) {
                negative = true;
                ++pos_;
            }
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) syntax_error(s_, pos_, "integer exponent");
            long e = std::stol(s_.substr(start, pos_ - start));
            if (negative) {
                if (poly::deg(base) != 0) syntax_error(s_, start, "nonnegative exponent on a polynomial");
                return poly::constant(F_, F_.pow(base[0], -e));
            }
            return poly::pow(F_, base, static_cast<unsigned>(e));
        }
        return base;
    }

    Poly primary()
    {
        skip_space(s_, pos_);
        if (pos_ >= s_.size()) syntax_error(s_, pos_, "number, variable or '('");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return poly::constant(F_, F_.from_mpz(mpz_class(s_.substr(start, pos_ - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            if (!var_.empty() && name == var_) return poly::x(F_);
            for (const Field* G = &F_; G; G = G->base().get())
                if (G->var() == name) return poly::constant(F_, F_.embed_from(*G, G->generator()));
            pos_ = start;
            syntax_error(s_, start, "a known variable");
        }
        if (c == '(') {
            ++pos_;
            Poly v = expr();
            skip_space(s_, pos_);
            if (!peek(')')) syntax_error(s_, pos_, "')'");
            ++pos_;
            return v;
        }
        syntax_error(s_, pos_, "number, variable or '('");
    }

    const Field& F_;
    const std::string& s_;
    size_t& pos_;
    std::string var_;
};

}  // namespace

Poly scan_poly(const Field& F, const std::string& text, size_t& pos, const std::string& var)
{
    return ExprParser(F, text, pos, var).expr();
}

Elem scan_elem(const Field& F, const std::string& text, size_t& pos)
{
    Poly p = ExprParser(F, text, pos, "").expr();
    return p.empty() ? F.zero() : p[0];
}

Poly parse_poly(const Field& F, const std::string& text, const std::string& var)
{
    size_t pos = 0;
    Poly p = scan_poly(F, text, pos, var);
    skip_space(text, pos);
    if (pos != text.size()) syntax_error(text, pos, "end of polynomial");
    return p;
}

Elem parse_elem(const Field& F, const std::string& text)
{
    size_t pos = 0;
    Elem e = scan_elem(F, text, pos);
    skip_space(text, pos);
    if (pos != text.size()) syntax_error(text, pos, "end of expression");
    return e;
}

FieldPtr parse_field(const std::string& text)
{
    size_t pos = 0;
    skip_space(text, pos);
    FieldPtr F;
    if (pos < text.size() && text[pos] == 'Q') {
        ++pos;
        F = Field::rationals();
    } else if (pos < text.size() && text[pos] == 'F') {
        ++pos;
        bool angle = pos < text.size() && text[pos] == '<';
        if (angle) ++pos;
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) syntax_error(text, pos, "characteristic");
        mpz_class p(text.substr(start, pos - start));
        if (angle) {
            if (pos >= text.size() || text[pos] != '>') syntax_error(text, pos, "'>'");
            ++pos;
        }
        F = Field::prime(p);
    } else {
        syntax_error(text, pos, "'Q' or 'F<p>'");
    }
    for (;;) {
        skip_space(text, pos);
        if (pos >= text.size()) return F;
        char c = text[pos];
        if (c != '[' && c != '(') syntax_error(text, pos, "'[' or '('");
        char close = c == '[' ? ']' : ')';
        ++pos;
        skip_space(text, pos);
        size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
        if (start == pos || !std::isalpha(static_cast<unsigned char>(text[start])))
            syntax_error(text, start, "variable name");
        std::string var = text.substr(start, pos - start);
        for (auto& v : F->variables())
            if (v == var) syntax_error(text, start, "a fresh variable name");
        skip_space(text, pos);
        if (pos >= text.size() || text[pos] != close) syntax_error(text, pos, std::string("'") + close + "'");
        ++pos;
        if (close == ')') {
            F = Field::function_field(F, var);
            continue;
        }
        skip_space(text, pos);
        if (pos >= text.size() || text[pos] != '/') syntax_error(text, pos, "'/('");
        ++pos;
        skip_space(text, pos);
        if (pos >= text.size() || text[pos] != '(') syntax_error(text, pos, "'('");
        ++pos;
        Poly m = scan_poly(*F, text, pos, var);
        skip_space(text, pos);
        if (pos >= text.size() || text[pos] != ')') syntax_error(text, pos, "')'");
        ++pos;
        F = Field::extension(F, m, var);
    }
}

}  // namespace mwk
