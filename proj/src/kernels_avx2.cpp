// AVX2 kernel variants.  This translation unit is compiled with -mavx2; the
// dispatcher only hands these out after a cpuid check.

#include "dagp/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace dagp::kernels {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void v_add(const double* a, const double* b, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(a + i),
                                                _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) dst[i] = a[i] + b[i];
}
void v_sub(const double* a, const double* b, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(dst + i, _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                                _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) dst[i] = a[i] - b[i];
}
void v_mul(const double* a, const double* b, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                                _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) dst[i] = a[i] * b[i];
}
void v_div(const double* a, const double* b, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(dst + i, _mm256_div_pd(_mm256_loadu_pd(a + i),
                                                _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) dst[i] = a[i] / b[i];
}
void v_fill(double* dst, double value, std::size_t n) {
    std::size_t i = 0;
    const __m256d v = _mm256_set1_pd(value);
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(dst + i, v);
    for (; i < n; ++i) dst[i] = value;
}
double v_sum(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double total = hsum(acc);
    for (; i < n; ++i) total += a[i];
    return total;
}
double v_sq_err(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                        _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}
double v_sq_err_affine(const double* t, const double* y, double offset,
                       double slope, std::size_t n) {
    const __m256d voff = _mm256_set1_pd(offset);
    const __m256d vslope = _mm256_set1_pd(slope);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d pred =
            _mm256_fmadd_pd(vslope, _mm256_loadu_pd(t + i), voff);
        const __m256d d = _mm256_sub_pd(pred, _mm256_loadu_pd(y + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double d = offset + slope * t[i] - y[i];
        total += d * d;
    }
    return total;
}
void v_centered_moments(const double* t, const double* y, double mt, double my,
                        double* stt, double* sty, std::size_t n) {
    const __m256d vmt = _mm256_set1_pd(mt);
    const __m256d vmy = _mm256_set1_pd(my);
    __m256d att = _mm256_setzero_pd();
    __m256d aty = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dt = _mm256_sub_pd(_mm256_loadu_pd(t + i), vmt);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + i), vmy);
        att = _mm256_fmadd_pd(dt, dt, att);
        aty = _mm256_fmadd_pd(dt, dy, aty);
    }
    double tt = hsum(att);
    double ty = hsum(aty);
    for (; i < n; ++i) {
        const double dt = t[i] - mt;
        tt += dt * dt;
        ty += dt * (y[i] - my);
    }
    *stt = tt;
    *sty = ty;
}

const Ops kAvx2Ops = {
    "avx2", v_add, v_sub, v_mul, v_div, v_fill,
    v_sum, v_sq_err, v_sq_err_affine, v_centered_moments,
};

}  // namespace

const Ops& avx2_ops() { return kAvx2Ops; }

bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace dagp::kernels

#endif  // x86-64
