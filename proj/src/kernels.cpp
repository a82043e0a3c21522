#include "dagp/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace dagp::kernels {

namespace {

void s_add(const double* a, const double* b, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] + b[i];
}
void s_sub(const double* a, const double* b, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] - b[i];
}
void s_mul(const double* a, const double* b, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * b[i];
}
void s_div(const double* a, const double* b, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] / b[i];
}
void s_fill(double* dst, double value, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = value;
}
double s_sum(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}
double s_sq_err(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}
double s_sq_err_affine(const double* t, const double* y, double offset,
                       double slope, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = offset + slope * t[i] - y[i];
        acc += d * d;
    }
    return acc;
}
void s_centered_moments(const double* t, const double* y, double mt, double my,
                        double* stt, double* sty, std::size_t n) {
    double att = 0.0, aty = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = t[i] - mt;
        att += dt * dt;
        aty += dt * (y[i] - my);
    }
    *stt = att;
    *sty = aty;
}

const Ops kScalarOps = {
    "scalar", s_add, s_sub, s_mul, s_div, s_fill,
    s_sum, s_sq_err, s_sq_err_affine, s_centered_moments,
};

const Ops* detect() {
    if (const char* env = std::getenv("DAGP_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return &kScalarOps;
#if defined(__x86_64__) || defined(_M_X64)
        if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return &avx2_ops();
#endif
#if defined(__aarch64__)
        if (std::strcmp(env, "neon") == 0) return &neon_ops();
#endif
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_supported()) return &avx2_ops();
#endif
#if defined(__aarch64__)
    return &neon_ops();
#endif
    return &kScalarOps;
}

std::atomic<const Ops*> g_active{nullptr};

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

const Ops& active_ops() {
    const Ops* ops = g_active.load(std::memory_order_acquire);
    if (!ops) {
        ops = detect();
        g_active.store(ops, std::memory_order_release);
    }
    return *ops;
}

Backend active_backend() {
    const Ops* ops = &active_ops();
    if (ops == &kScalarOps) return Backend::Scalar;
#if defined(__x86_64__) || defined(_M_X64)
    if (ops == &avx2_ops()) return Backend::Avx2;
#endif
#if defined(__aarch64__)
    if (ops == &neon_ops()) return Backend::Neon;
#endif
    return Backend::Scalar;
}

void force_backend(Backend backend) {
    switch (backend) {
        case Backend::Scalar:
            g_active.store(&kScalarOps, std::memory_order_release);
            return;
        case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            if (avx2_supported()) {
                g_active.store(&avx2_ops(), std::memory_order_release);
                return;
            }
#endif
            g_active.store(&kScalarOps, std::memory_order_release);
            return;
        case Backend::Neon:
#if defined(__aarch64__)
            g_active.store(&neon_ops(), std::memory_order_release);
            return;
#else
            g_active.store(&kScalarOps, std::memory_order_release);
            return;
#endif
        case Backend::Auto:
            g_active.store(detect(), std::memory_order_release);
            return;
    }
}

bool all_finite(const double* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(a[i])) return false;
    }
    return true;
}

}  // namespace dagp::kernels
