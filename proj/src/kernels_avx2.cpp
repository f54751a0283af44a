// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cfloat>
#include <cmath>
#include <cstdint>

#include "heightlab/kernels.hpp"

namespace heightlab::kernels {

namespace {

void circle_abs2_avx2(const double* cre, const double* cim, std::size_t ncoef,
                      const double* cos_t, const double* sin_t, double* out, std::size_t n) {
    if (ncoef == 0) {
        for (std::size_t j = 0; j < n; ++j) out[j] = 0.0;
        return;
    }
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d zr = _mm256_loadu_pd(cos_t + j);
        const __m256d zi = _mm256_loadu_pd(sin_t + j);
        __m256d pr = _mm256_set1_pd(cre[ncoef - 1]);
        __m256d pi = _mm256_set1_pd(cim[ncoef - 1]);
        for (std::size_t k = ncoef - 1; k-- > 0;) {
            // (pr + i pi)(zr + i zi) + c_k
            const __m256d nr = _mm256_fmsub_pd(pr, zr, _mm256_fmsub_pd(pi, zi, _mm256_set1_pd(cre[k])));
            const __m256d ni = _mm256_fmadd_pd(pr, zi, _mm256_fmadd_pd(pi, zr, _mm256_set1_pd(cim[k])));
            pr = nr;
            pi = ni;
        }
        _mm256_storeu_pd(out + j, _mm256_fmadd_pd(pr, pr, _mm256_mul_pd(pi, pi)));
    }
    for (; j < n; ++j) {
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

void shifted_unit_abs2_avx2(double wr, double wi, const double* cos_t, const double* sin_t,
                            double* out, std::size_t n) {
    const __m256d vr = _mm256_set1_pd(wr);
    const __m256d vi = _mm256_set1_pd(wi);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d dr = _mm256_sub_pd(vr, _mm256_loadu_pd(cos_t + j));
        const __m256d di = _mm256_sub_pd(vi, _mm256_loadu_pd(sin_t + j));
        _mm256_storeu_pd(out + j, _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di)));
    }
    for (; j < n; ++j) {
        const double dr = wr - cos_t[j];
        const double di = wi - sin_t[j];
        out[j] = dr * dr + di * di;
    }
}

// sum log x_j = log(prod of mantissas) + (sum of exponents) * ln 2. Each lane
// keeps a running mantissa product renormalized into [1, 2) after every
// multiply, so only four logarithms are taken at the end.
double sum_half_log_avx2(const double* abs2, std::size_t n, double floor) {
    const __m256d vfloor = _mm256_set1_pd(floor);
    const __m256d lo = _mm256_set1_pd(DBL_MIN * 4.0);
    const __m256d hi = _mm256_set1_pd(1e300);
    const __m256i exp_mask = _mm256_set1_epi64x(0x7ff0000000000000LL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3ff0000000000000LL);
    const __m256i bias = _mm256_set1_epi64x(1023);

    __m256d mant = _mm256_set1_pd(1.0);
    __m256i expo = _mm256_setzero_si256();
    __m256d bad = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d v = _mm256_max_pd(_mm256_loadu_pd(abs2 + j), vfloor);
        // NaN compares unordered and is flagged as well.
        bad = _mm256_or_pd(bad, _mm256_cmp_pd(v, lo, _CMP_NGE_UQ));
        bad = _mm256_or_pd(bad, _mm256_cmp_pd(v, hi, _CMP_NLE_UQ));
        mant = _mm256_mul_pd(mant, v);
        const __m256i bits = _mm256_castpd_si256(mant);
        const __m256i e = _mm256_sub_epi64(_mm256_srli_epi64(_mm256_and_si256(bits, exp_mask), 52), bias);
        expo = _mm256_add_epi64(expo, e);
        mant = _mm256_castsi256_pd(_mm256_or_si256(_mm256_andnot_si256(exp_mask, bits), one_bits));
    }
    if (_mm256_movemask_pd(bad) != 0) return scalar_kernels().sum_half_log(abs2, n, floor);

    alignas(32) double m[4];
    alignas(32) std::int64_t e[4];
    _mm256_store_pd(m, mant);
    _mm256_store_si256(reinterpret_cast<__m256i*>(e), expo);
    double total = 0.0;
    for (int lane = 0; lane < 4; ++lane)
        total += std::log(m[lane]) + static_cast<double>(e[lane]) * 0.6931471805599453;
    total *= 0.5;
    for (; j < n; ++j) total += 0.5 * std::log(abs2[j] > floor ? abs2[j] : floor);
    return total;
}

} // namespace

const KernelTable* avx2_kernels() {
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    static const KernelTable table{"avx2", circle_abs2_avx2, shifted_unit_abs2_avx2, sum_half_log_avx2};
    return supported ? &table : nullptr;
}

} // namespace heightlab::kernels
