#include "point_math.hpp"

namespace orthoglide::batch {

void predicate_kernel_scalar(const PredicateParams& params, const double* px, const double* py,
                             const double* pz, std::size_t n, unsigned char* flags) {
    for (std::size_t i = 0; i < n; ++i)
        flags[i] = detail::predicate_flags(params, px[i], py[i], pz[i]);
}

void quantity_kernel_scalar(const KernelGeometry& geom, const double* px, const double* py,
                            const double* pz, std::size_t n, const QuantityView& out) {
    for (std::size_t i = 0; i < n; ++i) detail::quantities_at(geom, px[i], py[i], pz[i], i, out);
}

}  // namespace orthoglide::batch
