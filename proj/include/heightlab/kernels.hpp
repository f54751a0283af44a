#pragma once

// Data-parallel inner loops used by the quadrature routines. Every kernel has
// a scalar reference implementation; an AVX2+FMA variant is compiled on x86-64
// and selected at runtime when the CPU supports it. Setting the environment
// variable HEIGHTLAB_KERNELS=scalar forces the reference path.

#include <cstddef>
#include <span>

namespace heightlab::kernels {

struct KernelTable {
    const char* name;

    /// out[j] = |sum_k (cre[k] + i cim[k]) z_j^k|^2 with z_j = cos[j] + i sin[j].
    void (*circle_abs2)(const double* cre, const double* cim, std::size_t ncoef,
                        const double* cos_t, const double* sin_t, double* out, std::size_t n);

    /// out[j] = |w - (cos[j] + i sin[j])|^2.
    void (*shifted_unit_abs2)(double wr, double wi, const double* cos_t, const double* sin_t,
                              double* out, std::size_t n);

    /// sum_j 0.5 * log(max(abs2[j], floor)). With floor = 0 the inputs must be
    /// positive (a zero yields -inf).
    double (*sum_half_log)(const double* abs2, std::size_t n, double floor);
};

const KernelTable& scalar_kernels();
/// nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2_kernels();
/// The table used by the library.
const KernelTable& active();

// span conveniences over active()
void circle_abs2(std::span<const double> cre, std::span<const double> cim,
                 std::span<const double> cos_t, std::span<const double> sin_t, std::span<double> out);
void shifted_unit_abs2(double wr, double wi, std::span<const double> cos_t,
                       std::span<const double> sin_t, std::span<double> out);
double sum_half_log(std::span<const double> abs2, double floor);

} // namespace heightlab::kernels
