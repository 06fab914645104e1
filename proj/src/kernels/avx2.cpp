// Compiled with -mavx2; only reached after a runtime CPU check.
#include "kernels_internal.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <bit>

namespace softeval::kernels::detail {

namespace {

double combine_lanes(__m256d v) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, v);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

MassSums soft_sums_avx2(const double* pred, const double* ref, std::size_t n) {
    __m256d inter = _mm256_setzero_pd();
    __m256d p_sum = _mm256_setzero_pd();
    __m256d r_sum = _mm256_setzero_pd();
    const std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d p = _mm256_loadu_pd(pred + i);
        const __m256d r = _mm256_loadu_pd(ref + i);
        // minpd returns the second operand on equality, matching std::min(p, r) on non-NaN input
        inter = _mm256_add_pd(inter, _mm256_min_pd(r, p));
        p_sum = _mm256_add_pd(p_sum, p);
        r_sum = _mm256_add_pd(r_sum, r);
    }
    MassSums s{combine_lanes(inter), combine_lanes(p_sum), combine_lanes(r_sum)};
    for (std::size_t i = n4; i < n; ++i) {
        s.intersection += std::min(pred[i], ref[i]);
        s.pred += pred[i];
        s.ref += ref[i];
    }
    return s;
}

Counts hard_counts_avx2(const double* pred, double pred_tau, const double* ref, double ref_tau, std::size_t n) {
    const __m256d pt = _mm256_set1_pd(pred_tau);
    const __m256d rt = _mm256_set1_pd(ref_tau);
    Counts c;
    const std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        const unsigned p = static_cast<unsigned>(
            _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(pred + i), pt, _CMP_GT_OQ)));
        const unsigned r = static_cast<unsigned>(
            _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(ref + i), rt, _CMP_GT_OQ)));
        c.tp += static_cast<std::uint64_t>(std::popcount(p & r));
        c.fp += static_cast<std::uint64_t>(std::popcount(p & ~r & 0xFu));
        c.fn += static_cast<std::uint64_t>(std::popcount(~p & r & 0xFu));
    }
    for (std::size_t i = n4; i < n; ++i) {
        const bool p = pred[i] > pred_tau;
        const bool r = ref[i] > ref_tau;
        c.tp += static_cast<std::uint64_t>(p && r);
        c.fp += static_cast<std::uint64_t>(p && !r);
        c.fn += static_cast<std::uint64_t>(!p && r);
    }
    return c;
}

void binarize_avx2(const double* values, double tau, double* out, std::size_t n) {
    const __m256d t = _mm256_set1_pd(tau);
    const __m256d one = _mm256_set1_pd(1.0);
    const std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(values + i), t, _CMP_GT_OQ);
        _mm256_storeu_pd(out + i, _mm256_and_pd(mask, one));
    }
    for (std::size_t i = n4; i < n; ++i) {
        out[i] = values[i] > tau ? 1.0 : 0.0;
    }
}

}  // namespace

const KernelTable avx2_table{Backend::avx2, &soft_sums_avx2, &hard_counts_avx2, &binarize_avx2};

}  // namespace softeval::kernels::detail

#endif
