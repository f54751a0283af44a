#include "heightlab/arith.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>

namespace heightlab {

Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw InvalidArgument("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(),
                                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

Integer parse_integer(std::string_view s, std::string_view whole) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw InvalidArgument("malformed integer in '" + std::string(whole) + "'");
    Integer v(std::string(s), 10);
    return negative ? Integer(-v) : v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

Rational parse_rational(std::string_view text) {
    const auto t = trim(text);
    const auto slash = t.find('/');
    if (slash == std::string_view::npos) return Rational(parse_integer(t, text));
    const auto den_text = trim(t.substr(slash + 1));
    if (!den_text.empty() && (den_text.front() == '-' || den_text.front() == '+'))
        throw InvalidArgument("sign not allowed in denominator of '" + std::string(text) + "'");
    return make_rational(parse_integer(trim(t.substr(0, slash)), text), parse_integer(den_text, text));
}

std::string to_string(const Integer& x) { return x.get_str(10); }

std::string to_string(const Rational& x) {
    if (x.get_den() == 1) return x.get_num().get_str(10);
    return x.get_num().get_str(10) + "/" + x.get_den().get_str(10);
}

double log_abs(const Integer& x) {
    if (x == 0) throw UndefinedLog("log of zero");
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::numbers::ln2;
}

double log_abs(const Rational& x) {
    if (x == 0) throw UndefinedLog("log of zero");
    return log_abs(x.get_num()) - log_abs(x.get_den());
}

namespace {

bool miller_rabin(const Integer& n, const Integer& base) {
    Integer d = n - 1;
    unsigned long s = 0;
    while (mpz_even_p(d.get_mpz_t())) {
        d /= 2;
        ++s;
    }
    Integer x;
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return true;
    for (unsigned long r = 1; r < s; ++r) {
        x = (x * x) % n;
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace

bool is_prime(const Integer& n) {
    if (n < 2) return false;
    static constexpr std::array<unsigned, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (unsigned b : bases) {
        if (n == b) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), b)) return false;
    }
    // Bases up to 37 are a deterministic witness set below 3.317e24.
    static const Integer deterministic_limit("3317044064679887385961981", 10);
    if (n < deterministic_limit) {
        return std::all_of(bases.begin(), bases.end(),
                           [&](unsigned b) { return miller_rabin(n, Integer(b)); });
    }
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

namespace {

Integer pollard_brent(const Integer& n, unsigned long seed) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    const Integer c = seed;
    auto f = [&](const Integer& x) { return Integer((x * x + c) % n); };
    Integer y = 2, x, q = 1, g = 1, ys;
    unsigned long r = 1;
    constexpr unsigned long m = 64;
    while (g == 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) y = f(y);
        unsigned long k = 0;
        while (k < r && g == 1) {
            ys = y;
            for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                y = f(y);
                q = (q * abs(Integer(x - y))) % n;
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            k += m;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = f(ys);
            const Integer diff = abs(Integer(x - ys));
            mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    return g;
}

void factor_into(Integer n, std::map<Integer, int>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    for (unsigned long seed = 1;; ++seed) {
        const Integer d = pollard_brent(n, seed);
        if (d != n && d != 1) {
            factor_into(d, out);
            factor_into(n / d, out);
            return;
        }
    }
}

} // namespace

std::vector<std::pair<Integer, int>> factor(const Integer& n) {
    if (n == 0) throw InvalidArgument("cannot factor zero");
    Integer m = abs(n);
    std::map<Integer, int> found;
    for (unsigned long p = 2; p < 65536 && Integer(p) * p <= m; p += (p == 2 ? 1 : 2)) {
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            m /= p;
            ++found[Integer(p)];
        }
    }
    if (m > 1) factor_into(m, found);
    return {found.begin(), found.end()};
}

long valuation(const Integer& x, const Integer& p) {
    if (x == 0) throw UndefinedLog("valuation of zero");
    if (x == 1 || x == -1) return 0;
    Integer rest;
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const Rational& x, const Integer& p) {
    if (x == 0) throw UndefinedLog("valuation of zero");
    return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

Place Place::finite(const Integer& p) {
    if (!is_prime(p)) throw InvalidArgument(to_string(p) + " is not prime");
    Place v;
    v.kind_ = Kind::Finite;
    v.p_ = p;
    return v;
}

std::string Place::label() const {
    return is_archimedean() ? std::string("inf") : p_.get_str(10);
}

double log_abs_at(const Rational& x, const Place& v) {
    if (x == 0) throw UndefinedLog("log|0|_v is undefined");
    if (v.is_archimedean()) return log_abs(x);
    const long k = valuation(x, v.prime());
    return k == 0 ? 0.0 : -static_cast<double>(k) * log_abs(v.prime());
}

ProjPointQ normalize_proj(Integer a, Integer b) {
    if (a == 0 && b == 0) throw InvalidPoint("(0, 0) is not a projective point");
    if (b == 0) return ProjPointQ(Integer(1), Integer(0));
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    a /= g;
    b /= g;
    if (b < 0) {
        a = -a;
        b = -b;
    }
    return ProjPointQ(std::move(a), std::move(b));
}

Rational ProjPointQ::affine() const {
    if (is_infinity()) throw InvalidPoint("point at infinity has no affine coordinate");
    return make_rational(a_, b_);
}

std::string ProjPointQ::to_string() const {
    if (is_infinity()) return "inf";
    if (b_ == 1) return a_.get_str(10);
    return a_.get_str(10) + "/" + b_.get_str(10);
}

ProjPointQ point_from_rational(const Rational& x) {
    return normalize_proj(x.get_num(), x.get_den());
}

ProjPointQ parse_point(std::string_view text) {
    const auto t = trim(text);
    if (t == "inf" || t == "infinity" || t == "oo") return normalize_proj(1, 0);
    if (!t.empty() && t.front() == '[') {
        if (t.back() != ']') throw InvalidPoint("unterminated '[' in '" + std::string(text) + "'");
        const auto inner = t.substr(1, t.size() - 2);
        const auto colon = inner.find(':');
        if (colon == std::string_view::npos)
            throw InvalidPoint("expected [a:b], got '" + std::string(text) + "'");
        return normalize_proj(parse_integer(trim(inner.substr(0, colon)), text),
                              parse_integer(trim(inner.substr(colon + 1)), text));
    }
    return point_from_rational(parse_rational(t));
}

WeilHeight weil_height_exact(const ProjPointQ& p) {
    Integer m = std::max(abs(p.a()), abs(p.b()));
    const double v = (m == 1) ? 0.0 : log_abs(m);
    return {std::move(m), v};
}

double weil_height(const ProjPointQ& p) { return weil_height_exact(p).value; }

} // namespace heightlab
