// NEON kernel variants for AArch64, where NEON is baseline.

#include "dagp/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace dagp::kernels {

namespace {

void v_add(const double* a, const double* b, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(dst + i, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    }
    for (; i < n; ++i) dst[i] = a[i] + b[i];
}
void v_sub(const double* a, const double* b, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(dst + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    }
    for (; i < n; ++i) dst[i] = a[i] - b[i];
}
void v_mul(const double* a, const double* b, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(dst + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    }
    for (; i < n; ++i) dst[i] = a[i] * b[i];
}
void v_div(const double* a, const double* b, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(dst + i, vdivq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    }
    for (; i < n; ++i) dst[i] = a[i] / b[i];
}
void v_fill(double* dst, double value, std::size_t n) {
    std::size_t i = 0;
    const float64x2_t v = vdupq_n_f64(value);
    for (; i + 2 <= n; i += 2) vst1q_f64(dst + i, v);
    for (; i < n; ++i) dst[i] = value;
}
double v_sum(const double* a, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(a + i));
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) total += a[i];
    return total;
}
double v_sq_err(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vfmaq_f64(acc, d, d);
    }
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}
double v_sq_err_affine(const double* t, const double* y, double offset,
                       double slope, std::size_t n) {
    const float64x2_t voff = vdupq_n_f64(offset);
    const float64x2_t vslope = vdupq_n_f64(slope);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t pred = vfmaq_f64(voff, vslope, vld1q_f64(t + i));
        const float64x2_t d = vsubq_f64(pred, vld1q_f64(y + i));
        acc = vfmaq_f64(acc, d, d);
    }
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = offset + slope * t[i] - y[i];
        total += d * d;
    }
    return total;
}
void v_centered_moments(const double* t, const double* y, double mt, double my,
                        double* stt, double* sty, std::size_t n) {
    const float64x2_t vmt = vdupq_n_f64(mt);
    const float64x2_t vmy = vdupq_n_f64(my);
    float64x2_t att = vdupq_n_f64(0.0);
    float64x2_t aty = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t dt = vsubq_f64(vld1q_f64(t + i), vmt);
        const float64x2_t dy = vsubq_f64(vld1q_f64(y + i), vmy);
        att = vfmaq_f64(att, dt, dt);
        aty = vfmaq_f64(aty, dt, dy);
    }
    double tt = vaddvq_f64(att);
    double ty = vaddvq_f64(aty);
    for (; i < n; ++i) {
        const double dt = t[i] - mt;
        tt += dt * dt;
        ty += dt * (y[i] - my);
    }
    *stt = tt;
    *sty = ty;
}

const Ops kNeonOps = {
    "neon", v_add, v_sub, v_mul, v_div, v_fill,
    v_sum, v_sq_err, v_sq_err_affine, v_centered_moments,
};

}  // namespace

const Ops& neon_ops() { return kNeonOps; }

}  // namespace dagp::kernels

#endif  // __aarch64__
