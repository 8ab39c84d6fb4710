// Micro-benchmark for the batch point-evaluation kernels: one pass per
// available kernel over the same point cloud, feasible counts printed so the
// variants can be eyeballed for agreement.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "orthoglide/batch.hpp"
#include "orthoglide/model.hpp"
#include "orthoglide/workspace.hpp"

using namespace orthoglide;

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 4'000'000;
    const auto geom = canonical_orthoglide(1.0);
    const auto params = ws::PointPredicate::defaults(geom).params();

    std::vector<double> x(n), y(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = -1.5 + 3.0 * ((i * 2654435761u) % 1024) / 1024.0;
        y[i] = -1.5 + 3.0 * ((i * 40503u) % 1024) / 1024.0;
        z[i] = -1.5 + 3.0 * ((i * 9973u) % 1024) / 1024.0;
    }
    std::vector<unsigned char> flags(n);

    std::printf("%zu points, predicate kernel\n", n);
    for (auto kind : {batch::KernelKind::scalar, batch::KernelKind::avx2}) {
        if (!batch::kernel_available(kind)) continue;
        batch::force_kernel(kind);
        // warm-up, then timed pass
        batch::eval_predicate(params, x.data(), y.data(), z.data(), n, flags.data());
        const auto t0 = std::chrono::steady_clock::now();
        batch::eval_predicate(params, x.data(), y.data(), z.data(), n, flags.data());
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::size_t feasible = 0;
        for (unsigned char f : flags) feasible += (f & batch::kFeasible) ? 1 : 0;
        std::printf("  %-6s  %7.3f s  %7.1f Mpts/s  feasible %zu\n", batch::kernel_name(kind), dt,
                    static_cast<double>(n) / dt / 1e6, feasible);
    }
    batch::force_kernel(std::nullopt);
    return 0;
}
