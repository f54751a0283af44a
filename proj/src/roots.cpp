#include "heightlab/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace heightlab {

namespace {

using cplx = std::complex<double>;

/// Newton ratio p(z)/p'(z), evaluated on the reversed polynomial outside the
/// unit disk so that Horner never overflows.
cplx newton_ratio(std::span<const cplx> c, cplx z) {
    const std::size_t n = c.size() - 1;
    if (std::abs(z) <= 1.0) {
        cplx p = c[n], dp = 0.0;
        for (std::size_t k = n; k-- > 0;) {
            dp = dp * z + p;
            p = p * z + c[k];
        }
        if (dp == cplx(0.0)) return p == cplx(0.0) ? cplx(0.0) : p / std::numeric_limits<double>::min();
        return p / dp;
    }
    const cplx w = 1.0 / z;
    cplx q = c[0], dq = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        dq = dq * w + q;
        q = q * w + c[k];
    }
    if (q == cplx(0.0)) return 0.0;
    const cplx denom = static_cast<double>(n) - w * dq / q;
    if (denom == cplx(0.0)) return z * 1e-8;
    return z / denom;
}

double abs_residual(std::span<const cplx> c, cplx z, double& scale) {
    cplx p = 0.0;
    double s = 0.0;
    const double az = std::abs(z);
    for (std::size_t k = c.size(); k-- > 0;) {
        p = p * z + c[k];
        s = s * az + std::abs(c[k]);
    }
    scale = s;
    return std::abs(p);
}

std::vector<ComplexApprox> finalize(std::span<const cplx> c, const std::vector<cplx>& z,
                                    std::size_t zero_roots, const RootOptions& opts) {
    // Merge clusters closer than 10 * tol into their centroid.
    const std::size_t n = z.size();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double radius = 10.0 * opts.tol * std::max(1.0, std::abs(z[i]));
            if (std::abs(z[i] - z[j]) < radius) parent[find(j)] = find(i);
        }
    std::vector<cplx> sum(n, 0.0);
    std::vector<int> count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        sum[find(i)] += z[i];
        ++count[find(i)];
    }
    std::vector<ComplexApprox> out;
    out.reserve(n + zero_roots);
    for (std::size_t i = 0; i < zero_roots; ++i) out.push_back({0.0, 0.0, 0.0, true});
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        const cplx v = sum[r] / static_cast<double>(count[r]);
        double scale = 0.0;
        const double res = abs_residual(c, v, scale);
        const bool ok = std::isfinite(res) && res <= opts.reliability_factor * eps * scale;
        out.push_back({v.real(), v.imag(), res, ok});
    }
    return out;
}

std::vector<ComplexApprox> aberth(std::span<const cplx> coeffs, const std::vector<cplx>* start,
                                  const RootOptions& opts) {
    std::size_t hi = coeffs.size();
    while (hi > 0 && coeffs[hi - 1] == cplx(0.0)) --hi;
    if (hi == 0) throw InvalidArgument("the zero polynomial has no finite root set");
    std::size_t lo = 0;
    while (coeffs[lo] == cplx(0.0)) ++lo;
    const std::span<const cplx> c = coeffs.subspan(lo, hi - lo);
    const std::size_t n = c.size() - 1;
    if (n == 0) return finalize(c, {}, lo, opts);
    if (n == 1) return finalize(c, {-c[0] / c[1]}, lo, opts);

    std::vector<cplx> z(n);
    if (start && start->size() == n) {
        z = *start;
    } else {
        const double radius = fujiwara_bound(c);
        constexpr double rotation = 0.5772156649015329; // fixed irrational offset
        for (std::size_t k = 0; k < n; ++k) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + rotation;
            z[k] = std::polar(radius, angle);
        }
    }

    std::vector<bool> done(n, false);
    bool converged = false;
    for (int it = 0; it < opts.max_iterations && !converged; ++it) {
        converged = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            const cplx ratio = newton_ratio(c, z[i]);
            cplx repulsion = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const cplx diff = z[i] - z[j];
                if (diff != cplx(0.0)) repulsion += 1.0 / diff;
            }
            const cplx denom = 1.0 - ratio * repulsion;
            const cplx step = (denom == cplx(0.0)) ? ratio : ratio / denom;
            z[i] -= step;
            if (!std::isfinite(z[i].real()) || !std::isfinite(z[i].imag())) z[i] = cplx(0.5, 0.5);
            if (std::abs(step) <= opts.tol * std::max(1.0, std::abs(z[i])))
                done[i] = true;
            else
                converged = false;
        }
    }
    auto result = finalize(c, z, lo, opts);
    if (!converged) {
        const bool all_reliable = std::all_of(result.begin(), result.end(),
                                              [](const ComplexApprox& r) { return r.reliable; });
        // Multiple roots stall the correction test at the sqrt(eps) level
        // while the backward error is already tiny; accept those.
        if (!all_reliable)
            throw RootFinderError("Aberth iteration did not converge within " +
                                      std::to_string(opts.max_iterations) + " iterations",
                                  std::move(result));
    }
    return result;
}

} // namespace

double fujiwara_bound(std::span<const std::complex<double>> c) {
    std::size_t n = c.size() - 1;
    while (n > 0 && c[n] == cplx(0.0)) --n;
    if (n == 0) return 0.0;
    const double lead = std::abs(c[n]);
    double b = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        double ratio = std::abs(c[n - k]) / lead;
        if (k == n) ratio /= 2.0;
        b = std::max(b, std::pow(ratio, 1.0 / static_cast<double>(k)));
    }
    return std::max(2.0 * b, std::numeric_limits<double>::min());
}

std::vector<ComplexApprox> complex_roots(std::span<const std::complex<double>> coeffs,
                                         const RootOptions& opts) {
    return aberth(coeffs, nullptr, opts);
}

std::vector<ComplexApprox> complex_roots_from(std::span<const std::complex<double>> coeffs,
                                              std::span<const std::complex<double>> start,
                                              const RootOptions& opts) {
    const std::vector<cplx> s(start.begin(), start.end());
    return aberth(coeffs, &s, opts);
}

std::vector<ComplexApprox> complex_roots(const IntPoly& p, const RootOptions& opts) {
    if (p.degree() < 1) throw InvalidArgument("complex_roots needs degree >= 1");
    std::vector<cplx> c;
    c.reserve(p.coeffs().size());
    for (const auto& x : p.coeffs()) c.emplace_back(x.get_d(), 0.0);
    return aberth(c, nullptr, opts);
}

} // namespace heightlab
