#include "heightlab/parse.hpp"

#include <cctype>

namespace heightlab {

namespace {

struct RationalFunction {
    RatPoly num;
    RatPoly den;
};

RationalFunction reduce(RatPoly num, RatPoly den) {
    if (num.is_zero()) return {RatPoly{0}, RatPoly{1}};
    const RatPoly g = gcd(num, den);
    RatPoly q, r;
    if (g.degree() > 0) {
        divmod(num, g, q, r);
        num = q;
        divmod(den, g, q, r);
        den = q;
    }
    const Rational lead = den.leading();
    const Rational inv = Rational(1) / lead;
    return {inv * num, inv * den};
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ParsedExpr run() {
        RationalFunction f = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        ParsedExpr out;
        out.num = std::move(f.num);
        out.den = std::move(f.den);
        out.variable = var_ ? var_ : 'x';
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool starts_primary(char c) const {
        return std::isdigit(static_cast<unsigned char>(c)) || c == 'x' || c == 'z' || c == '(';
    }

    RationalFunction expr() {
        RationalFunction acc = term();
        for (;;) {
            const char c = peek();
            if (c != '+' && c != '-') return acc;
            ++pos_;
            RationalFunction rhs = term();
            if (c == '-') rhs.num = -rhs.num;
            acc = reduce(acc.num * rhs.den + rhs.num * acc.den, acc.den * rhs.den);
        }
    }

    RationalFunction term() {
        RationalFunction acc = unary();
        for (;;) {
            const char c = peek();
            if (c == '*') {
                ++pos_;
                RationalFunction rhs = unary();
                acc = reduce(acc.num * rhs.num, acc.den * rhs.den);
            } else if (c == '/') {
                const std::size_t at = pos_;
                ++pos_;
                RationalFunction rhs = unary();
                if (rhs.num.is_zero()) throw ParseError("division by zero", at);
                acc = reduce(acc.num * rhs.den, acc.den * rhs.num);
            } else if (starts_primary(c)) {
                RationalFunction rhs = power();
                acc = reduce(acc.num * rhs.num, acc.den * rhs.den);
            } else {
                return acc;
            }
        }
    }

    RationalFunction unary() {
        const char c = peek();
        if (c == '-' || c == '+') {
            ++pos_;
            RationalFunction f = unary();
            if (c == '-') f.num = -f.num;
            return f;
        }
        return power();
    }

    RationalFunction power() {
        RationalFunction base = primary();
        if (peek() != '^') return base;
        ++pos_;
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a nonnegative integer exponent");
        const std::string digits(text_.substr(start, pos_ - start));
        if (digits.size() > 4) throw ParseError("exponent too large", start);
        const unsigned e = static_cast<unsigned>(std::stoul(digits));
        return {base.num.pow(e), base.den.pow(e)};
    }

    RationalFunction primary() {
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const Integer v(std::string(text_.substr(start, pos_ - start)), 10);
            return {RatPoly(std::vector<Rational>{Rational(v)}), RatPoly{1}};
        }
        if (c == 'x' || c == 'z') {
            if (var_ && var_ != c) fail("expression mixes variables x and z");
            var_ = c;
            ++pos_;
            return {RatPoly{0, 1}, RatPoly{1}};
        }
        if (c == '(') {
            ++pos_;
            RationalFunction inner = expr();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return inner;
        }
        if (c == '\0') fail("unexpected end of expression");
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    char var_ = 0;
};

} // namespace

ParsedExpr parse_expr(std::string_view text) { return Parser(text).run(); }

RatPoly parse_poly(std::string_view text) {
    ParsedExpr e = parse_expr(text);
    if (!e.is_polynomial())
        throw InvalidArgument("expected a polynomial, got a rational function: '" + std::string(text) + "'");
    return e.num; // den is the constant 1 after reduction
}

IntPoly parse_int_poly(std::string_view text) {
    const RatPoly p = parse_poly(text);
    if (p.is_zero()) return {};
    return clear_denominators(p);
}

IntPoly parse_integral_poly(std::string_view text) {
    const RatPoly p = parse_poly(text);
    std::vector<Integer> c;
    for (const auto& x : p.coeffs()) {
        if (x.get_den() != 1)
            throw InvalidArgument("expected integer coefficients in '" + std::string(text) + "'");
        c.push_back(x.get_num());
    }
    return IntPoly(std::move(c));
}

HomogPair parse_map(std::string_view text) {
    const ParsedExpr e = parse_expr(text);
    return HomogPair::from_rational_function(e.num, e.den);
}

} // namespace heightlab
