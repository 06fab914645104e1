#include "kernels_internal.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <algorithm>

namespace softeval::kernels::detail {

namespace {

// Two float64x2 registers hold lanes {0, 1} and {2, 3} of the canonical order.
double combine_lanes(float64x2_t lo, float64x2_t hi) {
    return (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) + (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
}

MassSums soft_sums_neon(const double* pred, const double* ref, std::size_t n) {
    float64x2_t inter_lo = vdupq_n_f64(0.0), inter_hi = vdupq_n_f64(0.0);
    float64x2_t p_lo = vdupq_n_f64(0.0), p_hi = vdupq_n_f64(0.0);
    float64x2_t r_lo = vdupq_n_f64(0.0), r_hi = vdupq_n_f64(0.0);
    const std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        const float64x2_t pa = vld1q_f64(pred + i), pb = vld1q_f64(pred + i + 2);
        const float64x2_t ra = vld1q_f64(ref + i), rb = vld1q_f64(ref + i + 2);
        inter_lo = vaddq_f64(inter_lo, vminq_f64(pa, ra));
        inter_hi = vaddq_f64(inter_hi, vminq_f64(pb, rb));
        p_lo = vaddq_f64(p_lo, pa);
        p_hi = vaddq_f64(p_hi, pb);
        r_lo = vaddq_f64(r_lo, ra);
        r_hi = vaddq_f64(r_hi, rb);
    }
    MassSums s{combine_lanes(inter_lo, inter_hi), combine_lanes(p_lo, p_hi), combine_lanes(r_lo, r_hi)};
    for (std::size_t i = n4; i < n; ++i) {
        s.intersection += std::min(pred[i], ref[i]);
        s.pred += pred[i];
        s.ref += ref[i];
    }
    return s;
}

Counts hard_counts_neon(const double* pred, double pred_tau, const double* ref, double ref_tau, std::size_t n) {
    const float64x2_t pt = vdupq_n_f64(pred_tau);
    const float64x2_t rt = vdupq_n_f64(ref_tau);
    uint64x2_t tp = vdupq_n_u64(0), fp = vdupq_n_u64(0), fn = vdupq_n_u64(0);
    const std::size_t n2 = n - n % 2;
    for (std::size_t i = 0; i < n2; i += 2) {
        const uint64x2_t p = vshrq_n_u64(vcgtq_f64(vld1q_f64(pred + i), pt), 63);
        const uint64x2_t r = vshrq_n_u64(vcgtq_f64(vld1q_f64(ref + i), rt), 63);
        tp = vaddq_u64(tp, vandq_u64(p, r));
        fp = vaddq_u64(fp, vbicq_u64(p, r));
        fn = vaddq_u64(fn, vbicq_u64(r, p));
    }
    Counts c{vgetq_lane_u64(tp, 0) + vgetq_lane_u64(tp, 1), vgetq_lane_u64(fp, 0) + vgetq_lane_u64(fp, 1),
             vgetq_lane_u64(fn, 0) + vgetq_lane_u64(fn, 1)};
    for (std::size_t i = n2; i < n; ++i) {
        const bool p = pred[i] > pred_tau;
        const bool r = ref[i] > ref_tau;
        c.tp += static_cast<std::uint64_t>(p && r);
        c.fp += static_cast<std::uint64_t>(p && !r);
        c.fn += static_cast<std::uint64_t>(!p && r);
    }
    return c;
}

void binarize_neon(const double* values, double tau, double* out, std::size_t n) {
    const float64x2_t t = vdupq_n_f64(tau);
    const uint64x2_t one = vreinterpretq_u64_f64(vdupq_n_f64(1.0));
    const std::size_t n2 = n - n % 2;
    for (std::size_t i = 0; i < n2; i += 2) {
        const uint64x2_t mask = vcgtq_f64(vld1q_f64(values + i), t);
        vst1q_f64(out + i, vreinterpretq_f64_u64(vandq_u64(mask, one)));
    }
    for (std::size_t i = n2; i < n; ++i) {
        out[i] = values[i] > tau ? 1.0 : 0.0;
    }
}

}  // namespace

const KernelTable neon_table{Backend::neon, &soft_sums_neon, &hard_counts_neon, &binarize_neon};

}  // namespace softeval::kernels::detail

#endif
