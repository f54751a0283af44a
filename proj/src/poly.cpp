#include "heightlab/poly.hpp"

#include <algorithm>
#include <sstream>

namespace heightlab {

RatPoly to_rat(const IntPoly& p) {
    std::vector<Rational> c;
    c.reserve(p.coeffs().size());
    for (const auto& x : p.coeffs()) c.emplace_back(x);
    return RatPoly(std::move(c));
}

Integer content(const IntPoly& p) {
    Integer g = 0;
    for (const auto& x : p.coeffs()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

IntPoly primitive_part(const IntPoly& p) {
    if (p.is_zero()) return p;
    Integer g = content(p);
    if (p.leading() < 0) g = -g;
    std::vector<Integer> c(p.coeffs());
    for (auto& x : c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return IntPoly(std::move(c));
}

IntPoly clear_denominators(const RatPoly& p) {
    Integer l = 1;
    for (const auto& x : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<Integer> c;
    c.reserve(p.coeffs().size());
    for (const auto& x : p.coeffs()) c.emplace_back(x.get_num() * (l / x.get_den()));
    return primitive_part(IntPoly(std::move(c)));
}

Rational eval_rational(const RatPoly& p, const Rational& x) { return p.eval(x); }

std::complex<double> eval_complex(const RatPoly& p, std::complex<double> z) {
    std::complex<double> r = 0.0;
    const auto& c = p.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + it->get_d();
    return r;
}

std::vector<double> to_doubles(const RatPoly& p) {
    std::vector<double> out;
    out.reserve(p.coeffs().size());
    for (const auto& x : p.coeffs()) out.push_back(x.get_d());
    return out;
}

std::vector<double> to_doubles(const IntPoly& p) {
    std::vector<double> out;
    out.reserve(p.coeffs().size());
    for (const auto& x : p.coeffs()) out.push_back(x.get_d());
    return out;
}

void divmod(const RatPoly& a, const RatPoly& b, RatPoly& quotient, RatPoly& remainder) {
    if (b.is_zero()) throw InvalidArgument("polynomial division by zero");
    std::vector<Rational> r(a.coeffs());
    const int db = b.degree();
    std::vector<Rational> q(std::max(0, a.degree() - db + 1), Rational(0));
    for (int i = a.degree(); i >= db; --i) {
        if (r[i] == 0) continue;
        const Rational t = r[i] / b.leading();
        q[i - db] = t;
        for (int j = 0; j <= db; ++j) r[i - db + j] -= t * b.coeffs()[j];
    }
    quotient = RatPoly(std::move(q));
    remainder = RatPoly(std::move(r));
}

RatPoly gcd(const RatPoly& a, const RatPoly& b) {
    RatPoly x = a, y = b;
    while (!y.is_zero()) {
        RatPoly q, r;
        divmod(x, y, q, r);
        x = std::move(y);
        y = std::move(r);
    }
    if (x.is_zero()) return x;
    const Rational lead = x.leading();
    std::vector<Rational> c(x.coeffs());
    for (auto& v : c) v /= lead;
    return RatPoly(std::move(c));
}

namespace {

template <class Coeff>
std::string poly_text(const DensePoly<Coeff>& p, char var) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = p.degree(); i >= 0; --i) {
        const Coeff& c = p.coeffs()[i];
        if (c == 0) continue;
        const bool neg = c < 0;
        const Coeff mag = neg ? Coeff(-c) : c;
        if (first) {
            if (neg) os << '-';
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        const bool unit = (mag == 1);
        if (i == 0 || !unit) {
            os << to_string(mag);
            if (i > 0) os << '*';
        }
        if (i >= 1) os << var;
        if (i >= 2) os << '^' << i;
    }
    return os.str();
}

} // namespace

std::string to_string(const RatPoly& p, char var) { return poly_text(p, var); }
std::string to_string(const IntPoly& p, char var) { return poly_text(p, var); }

Integer BinaryForm::eval(const Integer& x, const Integer& y) const {
    // sum c_i x^i y^(d-i), Horner in x with y-powers carried along.
    Integer acc = 0, ypow = 1;
    std::vector<Integer> ypows(static_cast<std::size_t>(degree) + 1);
    for (int i = 0; i <= degree; ++i) {
        ypows[i] = ypow;
        ypow *= y;
    }
    for (int i = degree; i >= 0; --i) acc = acc * x + coeffs[i] * ypows[degree - i];
    return acc;
}

IntPoly BinaryForm::dehomogenize() const { return IntPoly(coeffs); }

BinaryForm form_mul(const BinaryForm& a, const BinaryForm& b) {
    BinaryForm r;
    r.degree = a.degree + b.degree;
    r.coeffs.assign(static_cast<std::size_t>(r.degree) + 1, Integer(0));
    for (int i = 0; i <= a.degree; ++i)
        for (int j = 0; j <= b.degree; ++j) r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
    return r;
}

BinaryForm form_add(const BinaryForm& a, const BinaryForm& b) {
    if (a.degree != b.degree) throw InvalidArgument("adding forms of different degree");
    BinaryForm r = a;
    for (int i = 0; i <= a.degree; ++i) r.coeffs[i] += b.coeffs[i];
    return r;
}

namespace {

/// Fraction-free (Bareiss) determinant.
Integer bareiss_det(std::vector<std::vector<Integer>> m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap = k + 1;
            while (swap < n && m[swap][k] == 0) ++swap;
            if (swap == n) return 0;
            std::swap(m[k], m[swap]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

} // namespace

Integer resultant(const BinaryForm& f0, const BinaryForm& f1) {
    if (f0.degree != f1.degree) throw InvalidArgument("resultant needs forms of equal degree");
    const int d = f0.degree;
    const std::size_t n = 2 * static_cast<std::size_t>(d);
    std::vector<std::vector<Integer>> s(n, std::vector<Integer>(n, Integer(0)));
    for (int r = 0; r < d; ++r) {
        for (int j = 0; j <= d; ++j) {
            // Column j + r holds the coefficient of X^(d-j) Y^j.
            s[r][j + r] = f0.coeffs[d - j];
            s[d + r][j + r] = f1.coeffs[d - j];
        }
    }
    return bareiss_det(std::move(s));
}

HomogPair::HomogPair(BinaryForm f0, BinaryForm f1) : f0_(std::move(f0)), f1_(std::move(f1)) {
    if (f0_.degree != f1_.degree) throw InvalidArgument("forms of a map must share one degree");
    if (f0_.degree < 1) throw DegenerateMap("a map of P^1 needs degree >= 1");
    if (f0_.coeffs.size() != static_cast<std::size_t>(f0_.degree) + 1 ||
        f1_.coeffs.size() != static_cast<std::size_t>(f1_.degree) + 1)
        throw InvalidArgument("form coefficient count does not match degree");
    Integer g = 0;
    for (const auto& c : f0_.coeffs) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    for (const auto& c : f1_.coeffs) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 0) throw DegenerateMap("both forms vanish");
    for (auto* f : {&f0_, &f1_})
        for (auto& c : f->coeffs) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    res_ = heightlab::resultant(f0_, f1_);
    if (res_ == 0) throw DegenerateMap("resultant vanishes: the forms share a projective root");
}

HomogPair HomogPair::from_rational_function(const RatPoly& num, const RatPoly& den) {
    if (den.is_zero()) throw InvalidArgument("zero denominator");
    const int d = std::max(num.degree(), den.degree());
    if (d < 1) throw DegenerateMap("constant map");
    Integer l = 1;
    for (const auto* p : {&num, &den})
        for (const auto& x : p->coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    auto lift = [&](const RatPoly& p) {
        BinaryForm f;
        f.degree = d;
        f.coeffs.assign(static_cast<std::size_t>(d) + 1, Integer(0));
        for (int i = 0; i <= p.degree(); ++i) {
            const Rational& c = p.coeffs()[i];
            f.coeffs[i] = c.get_num() * (l / c.get_den());
        }
        return f;
    };
    return HomogPair(lift(num), lift(den));
}

bool HomogPair::is_polynomial() const {
    for (int i = 1; i <= f1_.degree; ++i)
        if (f1_.coeffs[i] != 0) return false;
    return true;
}

std::string HomogPair::to_string() const {
    const IntPoly num = f0_.dehomogenize();
    const IntPoly den = f1_.dehomogenize();
    if (is_polynomial()) {
        const Integer& c = f1_.coeffs[0];
        std::vector<Rational> q;
        for (const auto& x : num.coeffs()) q.push_back(make_rational(x, c));
        return heightlab::to_string(RatPoly(std::move(q)), 'z');
    }
    return "(" + heightlab::to_string(num, 'z') + ")/(" + heightlab::to_string(den, 'z') + ")";
}

HomogPair compose(const HomogPair& f, const HomogPair& g) {
    // F_k(G0, G1) = sum_i c_i G0^i G1^(d-i)
    const int d = f.degree();
    std::vector<BinaryForm> g0pow{BinaryForm{0, {Integer(1)}}}, g1pow{BinaryForm{0, {Integer(1)}}};
    for (int i = 1; i <= d; ++i) {
        g0pow.push_back(form_mul(g0pow.back(), g.f0()));
        g1pow.push_back(form_mul(g1pow.back(), g.f1()));
    }
    auto apply = [&](const BinaryForm& fk) {
        BinaryForm acc;
        acc.degree = d * g.degree();
        acc.coeffs.assign(static_cast<std::size_t>(acc.degree) + 1, Integer(0));
        for (int i = 0; i <= d; ++i) {
            if (fk.coeffs[i] == 0) continue;
            BinaryForm term = form_mul(g0pow[i], g1pow[d - i]);
            for (auto& c : term.coeffs) c *= fk.coeffs[i];
            acc = form_add(acc, term);
        }
        return acc;
    };
    return HomogPair(apply(f.f0()), apply(f.f1()));
}

StepResult homog_step(const HomogPair& f, const ProjPointQ& p) {
    Integer x = f.f0().eval(p.a(), p.b());
    Integer y = f.f1().eval(p.a(), p.b());
    Integer g;
    mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    StepResult out{normalize_proj(x, y), g, {}};
    if (g > 1)
        for (auto& [prime, e] : factor(g)) out.ledger.emplace(prime, e);
    return out;
}

std::complex<double> eval_form(const BinaryForm& f, std::complex<double> x, std::complex<double> y) {
    std::complex<double> acc = 0.0, ypow = 1.0;
    std::vector<std::complex<double>> ypows(static_cast<std::size_t>(f.degree) + 1);
    for (int i = 0; i <= f.degree; ++i) {
        ypows[i] = ypow;
        ypow *= y;
    }
    for (int i = f.degree; i >= 0; --i) acc = acc * x + f.coeffs[i].get_d() * ypows[f.degree - i];
    return acc;
}

double eval_form(const BinaryForm& f, double x, double y) {
    double acc = 0.0, ypow = 1.0;
    std::vector<double> ypows(static_cast<std::size_t>(f.degree) + 1);
    for (int i = 0; i <= f.degree; ++i) {
        ypows[i] = ypow;
        ypow *= y;
    }
    for (int i = f.degree; i >= 0; --i) acc = acc * x + f.coeffs[i].get_d() * ypows[f.degree - i];
    return acc;
}

} // namespace heightlab
