#include "heightlab/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace heightlab::kernels {

#ifndef HEIGHTLAB_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

const KernelTable& active() {
    static const KernelTable& chosen = [] () -> const KernelTable& {
        const char* env = std::getenv("HEIGHTLAB_KERNELS");
        if (env && std::string_view(env) == "scalar") return scalar_kernels();
        if (const KernelTable* t = avx2_kernels()) return *t;
        return scalar_kernels();
    }();
    return chosen;
}

void circle_abs2(std::span<const double> cre, std::span<const double> cim,
                 std::span<const double> cos_t, std::span<const double> sin_t, std::span<double> out) {
    if (cre.size() != cim.size() || cos_t.size() != out.size() || sin_t.size() != out.size())
        throw std::invalid_argument("circle_abs2: size mismatch");
    active().circle_abs2(cre.data(), cim.data(), cre.size(), cos_t.data(), sin_t.data(), out.data(),
                         out.size());
}

void shifted_unit_abs2(double wr, double wi, std::span<const double> cos_t,
                       std::span<const double> sin_t, std::span<double> out) {
    if (cos_t.size() != out.size() || sin_t.size() != out.size())
        throw std::invalid_argument("shifted_unit_abs2: size mismatch");
    active().shifted_unit_abs2(wr, wi, cos_t.data(), sin_t.data(), out.data(), out.size());
}

double sum_half_log(std::span<const double> abs2, double floor) {
    return active().sum_half_log(abs2.data(), abs2.size(), floor);
}

} // namespace heightlab::kernels
