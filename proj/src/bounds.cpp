#include "heightlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "heightlab/kernels.hpp"
#include "heightlab/parallel.hpp"
#include "heightlab/roots.hpp"

namespace heightlab {

namespace {

using cplx = std::complex<double>;
constexpr double two_pi = 2.0 * std::numbers::pi;

cplx eval_int(const IntPoly& p, cplx z) {
    cplx r = 0.0;
    const auto& c = p.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + it->get_d();
    return r;
}

void check_psi(const IntPoly& psi) {
    if (psi.degree() < 1) throw InvalidArgument("psi must have degree >= 1");
}

} // namespace

DynPair::DynPair(IntPoly phi_, IntPoly psi_) : phi(std::move(phi_)), psi(std::move(psi_)) {
    if (phi.degree() < 1 || psi.degree() < 1) throw InvalidArgument("phi and psi need degree >= 1");
}

DynPair DynPair::power(int l, IntPoly psi) {
    if (l < 1) throw InvalidArgument("l must be >= 1");
    return DynPair(IntPoly::monomial(Integer(1), l), std::move(psi));
}

bool DynPair::phi_is_power() const {
    for (int i = 0; i < phi.degree(); ++i)
        if (phi.coeffs()[i] != 0) return false;
    return phi.leading() == 1 || phi.leading() == -1;
}

double DynPair::f_inf(cplx x) const {
    return m() * std::log(std::max(std::abs(eval_int(phi, x)), 1.0)) -
           l() * std::log(std::max(std::abs(eval_int(psi, x)), 1.0));
}

BoundResult pair_bound_power(int l, const IntPoly& psi, int nodes) {
    if (l < 1) throw InvalidArgument("l must be >= 1");
    check_psi(psi);
    BoundResult r;
    r.mahler = two_variable_mahler(to_rat(psi), nodes);
    r.value = r.mahler.log_value / static_cast<double>(l + psi.degree());
    return r;
}

double energy_arch_power(int l, const IntPoly& psi, int nodes) {
    if (l < 1) throw InvalidArgument("l must be >= 1");
    check_psi(psi);
    return 2.0 * l * psi.degree() * log_mahler_plus(to_rat(psi), nodes).log_value;
}

LevelCurveEnergy energy_level_curve(const IntPoly& phi, const IntPoly& psi, int nodes) {
    if (phi.degree() < 1) throw InvalidArgument("phi must have degree >= 1");
    check_psi(psi);
    if (nodes < 64) throw InvalidArgument("energy_level_curve needs at least 64 nodes");

    std::vector<cplx> base;
    for (const auto& c : phi.coeffs()) base.emplace_back(c.get_d(), 0.0);
    const double step = two_pi / nodes;

    struct NodeResult {
        double sum = 0.0;
        bool ok = false;
        bool perturbed = false;
    };
    std::vector<NodeResult> per_node(static_cast<std::size_t>(nodes));
    constexpr std::size_t block = 256;
    const std::size_t blocks = (per_node.size() + block - 1) / block;

    auto solve_at = [&](double theta, const std::vector<cplx>* warm) {
        std::vector<cplx> c = base;
        c[0] -= std::polar(1.0, theta);
        return warm ? complex_roots_from(c, *warm) : complex_roots(c);
    };
    auto coincident = [](const std::vector<ComplexApprox>& r) {
        for (std::size_t i = 0; i < r.size(); ++i)
            for (std::size_t j = i + 1; j < r.size(); ++j)
                if (std::abs(r[i].value() - r[j].value()) < 1e-10 * std::max(1.0, std::abs(r[i].value())))
                    return true;
        return false;
    };

    // Continuation inside fixed blocks keeps results independent of threads.
    parallel_for(blocks, [&](std::size_t b) {
        std::vector<cplx> warm;
        for (std::size_t k = b * block; k < std::min(per_node.size(), (b + 1) * block); ++k) {
            NodeResult& out = per_node[k];
            double theta = step * static_cast<double>(k);
            std::vector<ComplexApprox> roots;
            try {
                roots = solve_at(theta, warm.empty() ? nullptr : &warm);
                if (coincident(roots)) {
                    // Critical value of phi on the level curve.
                    theta += 0.5 * step;
                    out.perturbed = true;
                    roots = solve_at(theta, nullptr);
                }
            } catch (const RootFinderError&) {
                warm.clear();
                continue;
            }
            if (!std::all_of(roots.begin(), roots.end(), [](const ComplexApprox& r) { return r.reliable; })) {
                warm.clear();
                continue;
            }
            warm.clear();
            for (const auto& r : roots) {
                warm.push_back(r.value());
                out.sum += std::log(std::max(std::abs(eval_int(psi, r.value())), 1.0));
            }
            out.ok = true;
        }
    });

    LevelCurveEnergy e;
    e.nodes = nodes;
    double total = 0.0;
    int used = 0;
    for (const auto& r : per_node) {
        if (!r.ok) {
            ++e.skipped;
            continue;
        }
        total += r.sum;
        ++used;
        if (r.perturbed) ++e.perturbed;
    }
    if (e.skipped * 100 > nodes)
        throw ComputationError("root finder failed on " + std::to_string(e.skipped) + " of " +
                               std::to_string(nodes) + " level-curve nodes");
    // (m/pi) * sum (2 pi / nodes) g  over the used nodes.
    e.value = 2.0 * psi.degree() * total / used;
    return e;
}

IntPoly norm_polynomial(const IntPoly& a, const IntPoly& psi) {
    const int n = a.degree();
    if (n < 1) throw InvalidArgument("norm_polynomial needs deg a >= 1");
    const RatPoly ar = to_rat(a);
    RatPoly q, r;
    // Column j of the multiplication matrix: psi(x) x^j mod a.
    std::vector<std::vector<Rational>> mat(n, std::vector<Rational>(n, Rational(0)));
    RatPoly col = to_rat(psi);
    divmod(col, ar, q, r);
    col = r;
    const RatPoly x{0, 1};
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) mat[i][j] = col[i];
        divmod(col * x, ar, q, r);
        col = r;
    }
    // Faddeev-LeVerrier.
    std::vector<Rational> charpoly(n + 1, Rational(0));
    charpoly[n] = 1;
    std::vector<std::vector<Rational>> mk(n, std::vector<Rational>(n, Rational(0)));
    for (int k = 1; k <= n; ++k) {
        std::vector<std::vector<Rational>> next(n, std::vector<Rational>(n, Rational(0)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rational s = 0;
                for (int t = 0; t < n; ++t) s += mat[i][t] * mk[t][j];
                next[i][j] = s;
            }
        for (int i = 0; i < n; ++i) next[i][i] += charpoly[n - k + 1];
        mk = std::move(next);
        Rational tr = 0;
        for (int i = 0; i < n; ++i)
            for (int t = 0; t < n; ++t) tr += mat[i][t] * mk[t][i];
        charpoly[n - k] = -tr / k;
    }
    return clear_denominators(RatPoly(std::move(charpoly)));
}

std::vector<ExceptionPoint> scan_exceptions(int l, const IntPoly& psi, double threshold, double h_max,
                                            bool include_quadratic) {
    if (l < 1) throw InvalidArgument("l must be >= 1");
    check_psi(psi);
    std::vector<ExceptionPoint> out;
    if (threshold <= 0.0 || h_max < 0.0) return out;

    const RatPoly psi_q = to_rat(psi);
    for (const auto& p : points_of_height_at_most(h_max)) {
        const double hx = weil_height(p);
        if (l * hx >= threshold) continue;
        ExceptionPoint e;
        e.description = p.to_string();
        double hpsi = 0.0;
        if (p.is_infinity()) {
            e.approx = {std::numeric_limits<double>::infinity(), 0.0};
        } else {
            const Rational x = p.affine();
            e.minpoly = IntPoly(std::vector<Integer>{-x.get_num(), x.get_den()});
            e.approx = {x.get_d(), 0.0};
            hpsi = weil_height(point_from_rational(eval_rational(psi_q, x)));
        }
        e.height_x = hx;
        e.height_psi = hpsi;
        e.value = l * hx + hpsi;
        if (e.value < threshold) out.push_back(std::move(e));
    }
    if (!include_quadratic) return out;

    const long bound = static_cast<long>(std::floor(std::exp(h_max) * (1.0 + 1e-14)));
    std::vector<std::vector<ExceptionPoint>> per_a(static_cast<std::size_t>(std::max(bound, 0L)));
    parallel_for(per_a.size(), [&](std::size_t ia) {
        const long a = static_cast<long>(ia) + 1;
        for (long b = -bound; b <= bound; ++b) {
            for (long c = -bound; c <= bound; ++c) {
                if (c == 0) continue;
                if (std::gcd(std::gcd(a, std::labs(b)), std::labs(c)) != 1) continue;
                const long disc = b * b - 4 * a * c;
                if (disc >= 0) {
                    const long s = static_cast<long>(std::llround(std::sqrt(static_cast<double>(disc))));
                    if (s * s == disc || (s + 1) * (s + 1) == disc || (s > 0 && (s - 1) * (s - 1) == disc))
                        continue; // reducible
                }
                // M(ax^2+bx+c) >= max(|a|, |c|, |b|/2), so h(x) is bounded below.
                const double lower = 0.5 * std::log(std::max({static_cast<double>(a), std::fabs(static_cast<double>(c)),
                                                               std::fabs(static_cast<double>(b)) / 2.0}));
                if (l * lower >= threshold) continue;
                const IntPoly minpoly{c, b, a};
                const double hx = height_from_minpoly(minpoly);
                if (l * hx >= threshold) continue;
                const IntPoly image = norm_polynomial(minpoly, psi);
                const double hpsi = height_from_minpoly(image);
                const double value = l * hx + hpsi;
                if (value >= threshold) continue;
                const double sq = std::sqrt(std::fabs(static_cast<double>(disc)));
                const double re = -static_cast<double>(b) / (2.0 * a);
                const double im = disc < 0 ? sq / (2.0 * a) : 0.0;
                const double shift = disc < 0 ? 0.0 : sq / (2.0 * a);
                const cplx roots[2] = {{re - shift, -im}, {re + shift, im}};
                for (int k = 0; k < 2; ++k) {
                    ExceptionPoint e;
                    e.description = "root " + std::to_string(k + 1) + " of " + to_string(minpoly);
                    e.minpoly = minpoly;
                    e.approx = roots[k];
                    e.height_x = hx;
                    e.height_psi = hpsi;
                    e.value = value;
                    per_a[ia].push_back(std::move(e));
                }
            }
        }
    });
    for (auto& v : per_a)
        for (auto& e : v) out.push_back(std::move(e));
    return out;
}

double roots_of_unity_height_sequence(const IntPoly& psi, long n) {
    if (n < 1) throw InvalidArgument("n must be >= 1");
    if (psi.is_zero()) throw InvalidArgument("psi must be nonzero");
    std::vector<double> cs, sn;
    for (long k = 0; k < n; ++k) {
        if (std::gcd(k, n) != 1) continue;
        const double t = two_pi * static_cast<double>(k) / static_cast<double>(n);
        cs.push_back(std::cos(t));
        sn.push_back(std::sin(t));
    }
    const std::vector<double> re = to_doubles(psi);
    const std::vector<double> im(re.size(), 0.0);
    std::vector<double> abs2(cs.size());
    kernels::circle_abs2(re, im, cs, sn, abs2);
    return kernels::sum_half_log(abs2, 1.0) / static_cast<double>(cs.size());
}

double angular_star_discrepancy(const EmpiricalMeasure& m) {
    std::vector<std::pair<double, double>> tw;
    tw.reserve(m.points.size());
    for (std::size_t i = 0; i < m.points.size(); ++i) {
        double t = std::arg(m.points[i]) / two_pi;
        if (t < 0.0) t += 1.0;
        if (t >= 1.0) t -= 1.0;
        tw.emplace_back(t, m.weights[i]);
    }
    std::sort(tw.begin(), tw.end());
    double cum = 0.0, worst = 0.0;
    for (const auto& [t, w] : tw) {
        worst = std::max(worst, std::fabs(cum - t));
        cum += w;
        worst = std::max(worst, std::fabs(cum - t));
    }
    return worst;
}

PreimageStats preimage_measure_stats(const DynSystem& s, const Rational& a, int level, int max_moment,
                                     double band) {
    if (level < 1) throw InvalidArgument("level must be >= 1");
    if (max_moment < 1) throw InvalidArgument("max_moment must be >= 1");
    const BinaryForm& f0 = s.map().f0();
    const BinaryForm& f1 = s.map().f1();
    const int d = s.degree();

    // Level one exactly: F0(z, 1) - a F1(z, 1) with integer coefficients.
    {
        const IntPoly first = a.get_den() * f0.dehomogenize() - IntPoly(std::vector<Integer>{a.get_num()}) * f1.dehomogenize();
        if (first.is_zero()) throw InvalidArgument("every point is a preimage of the target");
    }

    PreimageStats st;
    std::vector<cplx> targets{cplx(a.get_d(), 0.0)};
    for (int lev = 0; lev < level; ++lev) {
        std::vector<std::vector<cplx>> found(targets.size());
        std::vector<std::size_t> infinite(targets.size(), 0);
        std::vector<double> residual(targets.size(), 0.0);
        parallel_for(targets.size(), [&](std::size_t t) {
            std::vector<cplx> c(static_cast<std::size_t>(d) + 1);
            for (int i = 0; i <= d; ++i) c[i] = f0.coeffs[i].get_d() - targets[t] * f1.coeffs[i].get_d();
            std::size_t deg = static_cast<std::size_t>(d);
            while (deg > 0 && c[deg] == cplx(0.0)) --deg;
            infinite[t] = static_cast<std::size_t>(d) - deg;
            c.resize(deg + 1);
            if (deg == 0) return;
            for (const auto& r : complex_roots(c)) {
                found[t].push_back(r.value());
                residual[t] = std::max(residual[t], r.residual);
            }
        });
        targets.clear();
        for (std::size_t t = 0; t < found.size(); ++t) {
            targets.insert(targets.end(), found[t].begin(), found[t].end());
            st.at_infinity += infinite[t];
            st.max_residual = std::max(st.max_residual, residual[t]);
        }
    }

    st.measure.points = targets;
    st.measure.weights.assign(targets.size(), targets.empty() ? 0.0 : 1.0 / static_cast<double>(targets.size()));
    st.moments.assign(static_cast<std::size_t>(max_moment), cplx(0.0));
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const cplx z = targets[i];
        if (std::fabs(std::abs(z) - 1.0) > band) continue;
        ++st.on_circle;
        const cplx u = z / std::abs(z);
        cplx pw = 1.0;
        for (int k = 0; k < max_moment; ++k) {
            pw *= u;
            st.moments[k] += st.measure.weights[i] * pw;
        }
    }
    st.discrepancy = angular_star_discrepancy(st.measure);

    bool power = f1.coeffs[0] != 0 && f0.coeffs[d] != 0;
    for (int i = 0; i < d && power; ++i) power = f0.coeffs[i] == 0;
    for (int i = 1; i <= d && power; ++i) power = f1.coeffs[i] == 0;
    st.reference_is_uniform = power;
    return st;
}

} // namespace heightlab
