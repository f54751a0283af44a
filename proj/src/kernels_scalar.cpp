#include <algorithm>
#include <cmath>

#include "heightlab/kernels.hpp"

namespace heightlab::kernels {

namespace {

void circle_abs2_scalar(const double* cre, const double* cim, std::size_t ncoef,
                        const double* cos_t, const double* sin_t, double* out, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        if (ncoef == 0) {
            out[j] = 0.0;
            continue;
        }
        const double zr = cos_t[j], zi = sin_t[j];
        double pr = cre[ncoef - 1], pi = cim[ncoef - 1];
        for (std::size_t k = ncoef - 1; k-- > 0;) {
            const double nr = pr * zr - pi * zi + cre[k];
            const double ni = pr * zi + pi * zr + cim[k];
            pr = nr;
            pi = ni;
        }
        out[j] = pr * pr + pi * pi;
    }
}

void shifted_unit_abs2_scalar(double wr, double wi, const double* cos_t, const double* sin_t,
                              double* out, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        const double dr = wr - cos_t[j];
        const double di = wi - sin_t[j];
        out[j] = dr * dr + di * di;
    }
}

// Pairwise summation keeps the reduction order fixed and the error O(log n).
double pairwise_half_log(const double* x, std::size_t n, double floor) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += 0.5 * std::log(std::max(x[j], floor));
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_half_log(x, h, floor) + pairwise_half_log(x + h, n - h, floor);
}

double sum_half_log_scalar(const double* abs2, std::size_t n, double floor) {
    return pairwise_half_log(abs2, n, floor);
}

} // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{"scalar", circle_abs2_scalar, shifted_unit_abs2_scalar,
                                   sum_half_log_scalar};
    return table;
}

} // namespace heightlab::kernels
