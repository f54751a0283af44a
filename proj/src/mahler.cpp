#include "heightlab/mahler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heightlab/kernels.hpp"

namespace heightlab {

namespace {

using cplx = std::complex<double>;
constexpr double two_pi = 2.0 * std::numbers::pi;

void check_nodes(int nodes) {
    if (nodes < 16 || (nodes & (nodes - 1)) != 0)
        throw InvalidArgument("node count must be a power of two >= 16");
}

/// Unit-circle samples at angles offset + 2*pi*j/n.
struct CircleGrid {
    std::vector<double> c, s;
    CircleGrid(std::size_t n, double offset) : c(n), s(n) {
        for (std::size_t j = 0; j < n; ++j) {
            const double t = offset + two_pi * static_cast<double>(j) / static_cast<double>(n);
            c[j] = std::cos(t);
            s[j] = std::sin(t);
        }
    }
    explicit CircleGrid(const std::vector<double>& angles) : c(angles.size()), s(angles.size()) {
        for (std::size_t j = 0; j < angles.size(); ++j) {
            c[j] = std::cos(angles[j]);
            s[j] = std::sin(angles[j]);
        }
    }
};

struct SplitCoeffs {
    std::vector<double> re, im;
};

SplitCoeffs split(const std::vector<cplx>& c) {
    SplitCoeffs out;
    for (const auto& z : c) {
        out.re.push_back(z.real());
        out.im.push_back(z.imag());
    }
    return out;
}

SplitCoeffs split(const std::vector<double>& c) {
    return {c, std::vector<double>(c.size(), 0.0)};
}

std::vector<double> abs2_on(const SplitCoeffs& p, const CircleGrid& g) {
    std::vector<double> out(g.c.size());
    kernels::circle_abs2(p.re, p.im, g.c, g.s, out);
    return out;
}

std::vector<double> every_other(const std::vector<double>& v) {
    std::vector<double> out;
    out.reserve(v.size() / 2);
    for (std::size_t j = 0; j < v.size(); j += 2) out.push_back(v[j]);
    return out;
}

/// Circle mean of 0.5 * log max(abs2, floor) by the periodic trapezoid rule.
double periodic_mean(const std::vector<double>& abs2, double floor) {
    return kernels::sum_half_log(abs2, floor) / static_cast<double>(abs2.size());
}

double abs2_at(const std::vector<double>& coeffs, double t) {
    const cplx z = std::polar(1.0, t);
    cplx p = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) p = p * z + *it;
    return std::norm(p);
}

/// Composite trapezoid of 0.5 * log max(|psi(e^it)|^2, 1) over [a, b] with
/// `panels` panels.
double piece_trapezoid(const SplitCoeffs& psi, double a, double b, std::size_t panels) {
    std::vector<double> angles(panels + 1);
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t j = 0; j <= panels; ++j) angles[j] = a + h * static_cast<double>(j);
    const CircleGrid g(angles);
    const std::vector<double> v = abs2_on(psi, g);
    const double total = kernels::sum_half_log(v, 1.0);
    const double ends = 0.25 * (std::log(std::max(v.front(), 1.0)) + std::log(std::max(v.back(), 1.0)));
    return h * (total - ends);
}

/// Yun's squarefree decomposition over Q: p = c * prod q_i^i with q_i
/// primitive, squarefree and pairwise coprime. Returns (q_i, i) and log|c|.
std::vector<std::pair<IntPoly, int>> squarefree_parts(const IntPoly& p, double& log_c) {
    auto deriv = [](const RatPoly& f) {
        std::vector<Rational> c;
        for (int k = 1; k <= f.degree(); ++k) c.push_back(f[k] * k);
        return RatPoly(c);
    };
    auto exact_div = [](const RatPoly& a, const RatPoly& b) {
        RatPoly q, r;
        divmod(a, b, q, r);
        return q;
    };
    std::vector<std::pair<IntPoly, int>> out;
    const RatPoly f = to_rat(p);
    const RatPoly fp = deriv(f);
    const RatPoly a0 = gcd(f, fp);
    RatPoly b = exact_div(f, a0);
    RatPoly d = exact_div(fp, a0) - deriv(b);
    log_c = log_abs(p.leading());
    for (int i = 1; b.degree() > 0; ++i) {
        const RatPoly a = gcd(b, d);
        if (a.degree() > 0) {
            const IntPoly q = primitive_part(clear_denominators(a));
            log_c -= i * log_abs(q.leading());
            out.emplace_back(q, i);
        }
        b = exact_div(b, a);
        d = exact_div(d, a) - deriv(b);
    }
    return out;
}

} // namespace

std::string to_string(MahlerMethod m) {
    return m == MahlerMethod::Roots ? "roots" : "quadrature";
}

MahlerResult mahler_via_roots(const IntPoly& p, const RootOptions& opts) {
    if (p.is_zero()) throw InvalidArgument("Mahler measure of the zero polynomial");
    MahlerResult r{log_abs(p.leading()), MahlerMethod::Roots, 0.0};
    if (p.degree() == 0) return r;
    // Roots of the squarefree parts are simple, so a repeated root costs no
    // accuracy.
    for (const auto& [q, mult] : squarefree_parts(p, r.log_value)) {
        r.log_value += mult * log_abs(q.leading());
        for (const auto& root : complex_roots(q, opts)) {
            r.log_value += mult * std::log(std::max(1.0, std::abs(root.value())));
            r.error_estimate = std::max(r.error_estimate, root.residual);
        }
    }
    return r;
}

namespace {

MahlerResult quadrature_squarefree(const IntPoly& p, int nodes) {

    const double band = std::max(1e-8, 40.0 / nodes);
    std::vector<cplx> cof;
    for (const auto& x : p.coeffs()) cof.emplace_back(x.get_d(), 0.0);
    double exact_part = 0.0;
    for (const auto& root : complex_roots(p)) {
        const cplx a = root.value();
        if (std::abs(1.0 - std::abs(a)) >= band) continue;
        exact_part += std::log(std::max(1.0, std::abs(a)));
        // Synthetic division by (z - a).
        const std::size_t n = cof.size() - 1;
        std::vector<cplx> q(n);
        q[n - 1] = cof[n];
        for (std::size_t k = n - 1; k > 0; --k) q[k - 1] = cof[k] + a * q[k];
        cof = std::move(q);
    }
    if (cof.size() == 1)
        return {exact_part + std::log(std::abs(cof[0])), MahlerMethod::Quadrature, 0.0};

    const SplitCoeffs q = split(cof);
    const std::vector<double> fine = abs2_on(q, CircleGrid(static_cast<std::size_t>(nodes), 0.0));
    const double i_fine = periodic_mean(fine, 0.0);
    const double i_coarse = periodic_mean(every_other(fine), 0.0);
    if (!std::isfinite(i_fine)) throw ComputationError("quadrature node hit a root of the cofactor");
    return {exact_part + i_fine, MahlerMethod::Quadrature, std::fabs(i_fine - i_coarse)};
}

} // namespace

MahlerResult mahler_via_quadrature(const IntPoly& p, int nodes) {
    check_nodes(nodes);
    if (p.is_zero()) throw InvalidArgument("Mahler measure of the zero polynomial");
    MahlerResult r{0.0, MahlerMethod::Quadrature, 0.0};
    if (p.degree() == 0) {
        r.log_value = log_abs(p.leading());
        return r;
    }
    for (const auto& [q, mult] : squarefree_parts(p, r.log_value)) {
        const MahlerResult part = quadrature_squarefree(q, nodes);
        r.log_value += mult * part.log_value;
        r.error_estimate += mult * part.error_estimate;
    }
    return r;
}

MahlerResult log_mahler_plus(const RatPoly& psi, int nodes) {
    check_nodes(nodes);
    if (psi.is_zero()) throw InvalidArgument("M+ of the zero polynomial");
    if (psi.degree() == 0)
        return {std::max(0.0, log_abs(psi.leading())), MahlerMethod::Quadrature, 0.0};

    const std::vector<double> coeffs = to_doubles(psi);
    const SplitCoeffs p = split(coeffs);
    const std::size_t n = static_cast<std::size_t>(nodes);
    const std::vector<double> grid = abs2_on(p, CircleGrid(n, 0.0));

    std::vector<double> crossings;
    const double h = two_pi / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        const bool above = grid[j] >= 1.0;
        const bool next_above = grid[(j + 1) % n] >= 1.0;
        if (above == next_above) continue;
        double lo = h * static_cast<double>(j), hi = lo + h;
        for (int it = 0; it < 200 && hi - lo > 1e-16 * two_pi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((abs2_at(coeffs, mid) >= 1.0) == above)
                lo = mid;
            else
                hi = mid;
        }
        crossings.push_back(0.5 * (lo + hi));
    }

    if (crossings.empty()) {
        if (grid[0] < 1.0) return {0.0, MahlerMethod::Quadrature, 0.0};
        const double i_fine = periodic_mean(grid, 1.0);
        const double i_coarse = periodic_mean(every_other(grid), 1.0);
        return {i_fine, MahlerMethod::Quadrature, std::fabs(i_fine - i_coarse)};
    }

    // Richardson-corrected composite trapezoid per smooth piece; `scale` = 1
    // gives the full-resolution value, 2 the half-resolution comparison.
    auto integrate = [&](std::size_t scale) {
        double total = 0.0;
        const std::size_t m = crossings.size();
        for (std::size_t i = 0; i < m; ++i) {
            const double a = crossings[i];
            const double b = (i + 1 < m) ? crossings[i + 1] : crossings[0] + two_pi;
            if (abs2_at(coeffs, 0.5 * (a + b)) <= 1.0) continue;
            const double share = (b - a) / two_pi * static_cast<double>(n) / static_cast<double>(scale);
            std::size_t panels = 2 * static_cast<std::size_t>(std::ceil(share / 2.0));
            panels = std::max<std::size_t>(panels, 4);
            const double t_full = piece_trapezoid(p, a, b, panels);
            const double t_half = piece_trapezoid(p, a, b, panels / 2);
            total += t_full + (t_full - t_half) / 3.0;
        }
        return total / two_pi;
    };
    const double i_fine = integrate(1);
    const double i_coarse = integrate(2);
    return {i_fine, MahlerMethod::Quadrature, std::fabs(i_fine - i_coarse)};
}

MahlerResult two_variable_mahler(const RatPoly& psi, int nodes) { return log_mahler_plus(psi, nodes); }

MahlerResult two_variable_mahler_grid(const RatPoly& psi, int n1, int n2) {
    if (n1 < 4 || n2 < 4 || n1 % 2 || n2 % 2) throw InvalidArgument("grid sizes must be even and >= 4");
    if (psi.is_zero()) throw InvalidArgument("M+ of the zero polynomial");
    auto grid_value = [&](std::size_t m1, std::size_t m2) {
        const CircleGrid outer(m1, 0.0);
        const CircleGrid inner(m2, std::numbers::pi / static_cast<double>(m2));
        std::vector<double> buf(m2);
        double total = 0.0;
        for (std::size_t j = 0; j < m1; ++j) {
            const cplx w = eval_complex(psi, cplx(outer.c[j], outer.s[j]));
            kernels::shifted_unit_abs2(w.real(), w.imag(), inner.c, inner.s, buf);
            total += kernels::sum_half_log(buf, 0.0) / static_cast<double>(m2);
        }
        return total / static_cast<double>(m1);
    };
    const double fine = grid_value(static_cast<std::size_t>(n1), static_cast<std::size_t>(n2));
    const double coarse = grid_value(static_cast<std::size_t>(n1 / 2), static_cast<std::size_t>(n2 / 2));
    if (!std::isfinite(fine)) throw ComputationError("tensor grid met a zero of psi(x) - y");
    return {fine, MahlerMethod::Quadrature, std::fabs(fine - coarse)};
}

double height_from_minpoly(const IntPoly& p) {
    if (p.is_zero()) throw InvalidArgument("height of the zero polynomial");
    if (p.degree() < 1) throw InvalidArgument("minimal polynomial must have degree >= 1");
    return mahler_via_roots(p).log_value / static_cast<double>(p.degree());
}

} // namespace heightlab
