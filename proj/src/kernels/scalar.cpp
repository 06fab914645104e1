#include <algorithm>

#include "kernels_internal.hpp"

namespace softeval::kernels::detail {

namespace {

MassSums soft_sums_scalar(const double* pred, const double* ref, std::size_t n) {
    double inter[4] = {0.0, 0.0, 0.0, 0.0};
    double p_sum[4] = {0.0, 0.0, 0.0, 0.0};
    double r_sum[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        for (std::size_t lane = 0; lane < 4; ++lane) {
            const double p = pred[i + lane];
            const double r = ref[i + lane];
            inter[lane] += std::min(p, r);
            p_sum[lane] += p;
            r_sum[lane] += r;
        }
    }
    MassSums s{(inter[0] + inter[1]) + (inter[2] + inter[3]), (p_sum[0] + p_sum[1]) + (p_sum[2] + p_sum[3]),
               (r_sum[0] + r_sum[1]) + (r_sum[2] + r_sum[3])};
    for (std::size_t i = n4; i < n; ++i) {
        s.intersection += std::min(pred[i], ref[i]);
        s.pred += pred[i];
        s.ref += ref[i];
    }
    return s;
}

Counts hard_counts_scalar(const double* pred, double pred_tau, const double* ref, double ref_tau, std::size_t n) {
    Counts c;
    for (std::size_t i = 0; i < n; ++i) {
        const bool p = pred[i] > pred_tau;
        const bool r = ref[i] > ref_tau;
        c.tp += static_cast<std::uint64_t>(p && r);
        c.fp += static_cast<std::uint64_t>(p && !r);
        c.fn += static_cast<std::uint64_t>(!p && r);
    }
    return c;
}

void binarize_scalar(const double* values, double tau, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = values[i] > tau ? 1.0 : 0.0;
    }
}

}  // namespace

const KernelTable scalar_table{Backend::scalar, &soft_sums_scalar, &hard_counts_scalar, &binarize_scalar};

}  // namespace softeval::kernels::detail
