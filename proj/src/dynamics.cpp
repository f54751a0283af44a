#include "heightlab/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "heightlab/parallel.hpp"

namespace heightlab {

namespace {

Integer max_abs(const BinaryForm& f) {
    Integer m = 0;
    for (const auto& c : f.coeffs) m = std::max(m, Integer(abs(c)));
    return m;
}

/// Solves A u = rhs over Q by Gaussian elimination (A square, nonsingular).
std::vector<Rational> solve(std::vector<std::vector<Rational>> a, std::vector<Rational> rhs) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) throw DegenerateMap("singular cofactor system");
        std::swap(a[piv], a[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a[i][col] == 0) continue;
            const Rational f = a[i][col] / a[col][col];
            for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
            rhs[i] -= f * rhs[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i) rhs[i] /= a[i][i];
    return rhs;
}

/// Cofactors (G0, G1) of degree d-1 with G0 F0 + G1 F1 = Res * X^k Y^(2d-1-k).
std::pair<BinaryForm, BinaryForm> nullstellensatz_cofactors(const HomogPair& f, int x_power) {
    const int d = f.degree();
    const std::size_t n = 2 * static_cast<std::size_t>(d);
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n, Rational(0)));
    // Column i < d: G0 monomial X^i Y^(d-1-i); column d + i: same for G1.
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j <= d; ++j) {
            a[i + j][i] = f.f0().coeffs[j];
            a[i + j][d + i] = f.f1().coeffs[j];
        }
    }
    std::vector<Rational> rhs(n, Rational(0));
    rhs[x_power] = f.res();
    const auto u = solve(std::move(a), std::move(rhs));
    BinaryForm g0{d - 1, {}}, g1{d - 1, {}};
    for (int i = 0; i < d; ++i) {
        if (u[i].get_den() != 1 || u[d + i].get_den() != 1)
            throw ComputationError("non-integral Nullstellensatz cofactor");
        g0.coeffs.push_back(u[i].get_num());
        g1.coeffs.push_back(u[d + i].get_num());
    }
    return {g0, g1};
}

Integer mod_pow(const Integer& p, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), e);
    return r;
}

Integer reduce_mod(const Integer& x, const Integer& m) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

/// v_p(x) capped at `cap` (x = 0 counts as cap).
long capped_valuation(const Integer& x, const Integer& p, long cap) {
    if (x == 0) return cap;
    return std::min(cap, valuation(x, p));
}

LocalGreen archimedean_green(const DynSystem& s, const ProjPointQ& p, double eps) {
    LocalGreen out{Place::archimedean(), 0.0, 0.0, {}, 0};
    const WeilHeight w = weil_height_exact(p);
    double x0 = make_rational(p.a(), w.max_coord).get_d();
    double x1 = make_rational(p.b(), w.max_coord).get_d();
    const double d = s.degree();
    const BinaryForm& f0 = s.map().f0();
    const BinaryForm& f1 = s.map().f1();
    double acc = 0.0;
    double weight = 1.0;
    double tail = s.c_arch() / (d - 1.0);
    int k = 0;
    while (tail > eps && k < 400) {
        const double y0 = eval_form(f0, x0, x1);
        const double y1 = eval_form(f1, x0, x1);
        const double scale = std::max(std::fabs(y0), std::fabs(y1));
        if (!(scale > 0.0) || !std::isfinite(scale))
            throw ComputationError("archimedean Green iteration lost precision");
        weight /= d;
        acc += weight * std::log(scale);
        x0 = y0 / scale;
        x1 = y1 / scale;
        tail = s.c_arch() * weight / (d - 1.0);
        ++k;
    }
    out.value = w.value + acc;
    out.tail_bound = tail;
    out.iterations = k;
    return out;
}

LocalGreen finite_green(const DynSystem& s, const ProjPointQ& p, const Place& v, double eps) {
    LocalGreen out{v, 0.0, 0.0, {}, 0};
    const auto it = s.res_valuations().find(v.prime());
    if (it == s.res_valuations().end()) return out; // good reduction: exactly zero
    const long r = it->second;
    const double d = s.degree();
    const double logp = log_abs(v.prime());

    // Steps needed so the remaining terms (each c_k <= r) are below eps.
    int steps = 0;
    double tail = r * logp / (d - 1.0);
    while (tail > eps && steps < 400) {
        tail /= d;
        ++steps;
    }
    // Each step consumes at most r p-adic digits of precision; c_k <= r needs
    // more than r digits to be read off exactly.
    long digits = r * steps + r + 1;
    Integer modulus = mod_pow(v.prime(), static_cast<unsigned long>(digits));
    Integer a = reduce_mod(p.a(), modulus), b = reduce_mod(p.b(), modulus);
    const BinaryForm& f0 = s.map().f0();
    const BinaryForm& f1 = s.map().f1();
    double weight = 1.0;
    double acc = 0.0;
    for (int k = 0; k < steps; ++k) {
        const Integer x = reduce_mod(f0.eval(a, b), modulus);
        const Integer y = reduce_mod(f1.eval(a, b), modulus);
        const long c = std::min(capped_valuation(x, v.prime(), digits), capped_valuation(y, v.prime(), digits));
        if (c > r) throw ComputationError("p-adic precision exhausted in Green function");
        weight /= d;
        out.ledger.push_back(static_cast<int>(c));
        acc -= weight * static_cast<double>(c) * logp;
        const Integer pc = mod_pow(v.prime(), static_cast<unsigned long>(c));
        digits -= c;
        modulus = mod_pow(v.prime(), static_cast<unsigned long>(digits));
        a = reduce_mod(Integer(x / pc), modulus);
        b = reduce_mod(Integer(y / pc), modulus);
    }
    out.value = acc;
    out.tail_bound = tail;
    out.iterations = steps;
    return out;
}

} // namespace

DynSystem::DynSystem(HomogPair f) : f_(std::move(f)) {
    const int d = f_.degree();
    if (d < 2) throw DegenerateMap("dynamical systems need degree >= 2");
    for (const auto& [prime, e] : factor(f_.res())) {
        bad_primes_.push_back(prime);
        res_val_.emplace(prime, e);
    }
    std::tie(bound_.g00, bound_.g01) = nullstellensatz_cofactors(f_, 2 * d - 1);
    std::tie(bound_.g10, bound_.g11) = nullstellensatz_cofactors(f_, 0);
    for (const auto* g : {&bound_.g00, &bound_.g01, &bound_.g10, &bound_.g11})
        bound_.cofactor_max = std::max(bound_.cofactor_max, max_abs(*g));
    const Integer coef_max = std::max(max_abs(f_.f0()), max_abs(f_.f1()));
    bound_.upper = std::log(static_cast<double>(d + 1)) + log_abs(coef_max);
    const double log_res = log_abs(f_.res());
    bound_.lower = (bound_.cofactor_max == 0)
                       ? 0.0
                       : std::log(2.0 * d) + log_abs(bound_.cofactor_max) - log_res;
    c_arch_ = std::max({bound_.upper, bound_.lower, 0.0});
    escape_ = (c_arch_ + log_res) / (d - 1.0);
}

LocalGreen local_green(const DynSystem& s, const ProjPointQ& p, const Place& v, double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
    return v.is_archimedean() ? archimedean_green(s, p, eps) : finite_green(s, p, v, eps);
}

CanonicalHeight canonical_height(const DynSystem& s, const ProjPointQ& p, double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
    // Half of eps/4 to the archimedean place, half shared by the bad primes.
    const double budget = eps / 8.0;
    CanonicalHeight out;
    const LocalGreen arch = local_green(s, p, Place::archimedean(), budget);
    out.ledger.values.emplace(arch.place, arch.value);
    out.ledger.tail_bounds.emplace(arch.place, arch.tail_bound);
    out.value = arch.value;
    out.tail_bound = arch.tail_bound;
    const double share = s.bad_primes().empty() ? budget : budget / static_cast<double>(s.bad_primes().size());
    for (const auto& prime : s.bad_primes()) {
        const LocalGreen g = local_green(s, p, Place::finite(prime), share);
        out.ledger.values.emplace(g.place, g.value);
        out.ledger.tail_bounds.emplace(g.place, g.tail_bound);
        out.value += g.value;
        out.tail_bound += g.tail_bound;
    }
    out.ledger.total_tail = out.tail_bound;
    return out;
}

std::vector<ProjPointQ> PreperiodicResult::cycle() const {
    if (!preperiodic) return {};
    return {orbit.begin() + static_cast<std::ptrdiff_t>(cycle_start), orbit.end()};
}

PreperiodicResult is_preperiodic(const DynSystem& s, const ProjPointQ& p) {
    PreperiodicResult out;
    std::map<ProjPointQ, std::size_t> seen;
    ProjPointQ cur = p;
    for (std::size_t k = 0;; ++k) {
        const double h = weil_height(cur);
        if (h > s.escape_threshold()) {
            out.orbit.push_back(cur);
            out.escape = EscapeCertificate{k, cur, h, s.escape_threshold()};
            return out;
        }
        const auto [it, inserted] = seen.emplace(cur, k);
        if (!inserted) {
            out.preperiodic = true;
            out.cycle_start = it->second;
            return out;
        }
        out.orbit.push_back(cur);
        cur = homog_step(s.map(), cur).image;
    }
}

bool verify_escape(const DynSystem& s, const ProjPointQ& start, const EscapeCertificate& cert) {
    ProjPointQ cur = start;
    for (std::size_t k = 0; k < cert.step; ++k) cur = homog_step(s.map(), cur).image;
    if (!(cur == cert.point)) return false;
    const double h = weil_height(cur);
    return h == cert.height && cert.threshold >= s.escape_threshold() && h > cert.threshold;
}

std::vector<ProjPointQ> points_of_height_at_most(double h_max) {
    if (h_max < 0.0) return {};
    // max(|a|, |b|) <= bound, guarding exp() rounding at integer boundaries.
    const long bound = static_cast<long>(std::floor(std::exp(h_max) * (1.0 + 1e-14)));
    std::vector<ProjPointQ> out{normalize_proj(0, 1), normalize_proj(1, 0)};
    std::vector<ProjPointQ> positive;
    // In-order walk of the Stern-Brocot tree between 0/1 and 1/0.
    struct Frame { long ln, ld, rn, rd; bool expanded; };
    std::vector<Frame> stack{{0, 1, 1, 0, false}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        const long mn = f.ln + f.rn, md = f.ld + f.rd;
        if (mn > bound || md > bound) continue;
        if (f.expanded) {
            positive.push_back(normalize_proj(mn, md));
            stack.push_back({mn, md, f.rn, f.rd, false});
        } else {
            stack.push_back({f.ln, f.ld, f.rn, f.rd, true});
            stack.push_back({f.ln, f.ld, mn, md, false});
        }
    }
    for (const auto& q : positive) out.push_back(q);
    for (const auto& q : positive) out.push_back(normalize_proj(-q.a(), q.b()));
    return out;
}

std::vector<ProjPointQ> common_preperiodic_scan(const DynSystem& s1, const DynSystem& s2, double h_max) {
    const std::vector<ProjPointQ> candidates = points_of_height_at_most(h_max);
    std::vector<char> keep(candidates.size(), 0);
    parallel_for(candidates.size(), [&](std::size_t i) {
        keep[i] = is_preperiodic(s1, candidates[i]).preperiodic &&
                  is_preperiodic(s2, candidates[i]).preperiodic;
    });
    std::vector<ProjPointQ> out;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (keep[i]) out.push_back(candidates[i]);
    std::sort(out.begin(), out.end(), [](const ProjPointQ& x, const ProjPointQ& y) {
        const Integer hx = std::max(abs(x.a()), abs(x.b())), hy = std::max(abs(y.a()), abs(y.b()));
        if (hx != hy) return hx < hy;
        if (x.is_infinity() != y.is_infinity()) return y.is_infinity();
        if (x.is_infinity()) return false;
        return x.affine() < y.affine();
    });
    return out;
}

} // namespace heightlab
