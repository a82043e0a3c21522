#pragma once

#include <cstddef>

// Batch arithmetic kernels backing expression evaluation and the
// least-squares fitness reductions.  A scalar reference implementation is
// always available; on x86-64 an AVX2 variant and on AArch64 a NEON variant
// are selected at runtime when the CPU supports them.  Elementwise kernels
// are bit-identical across backends; reductions may differ in the last bits
// because of lane-wise accumulation order.

namespace dagp::kernels {

struct Ops {
    const char* name;

    // dst[i] = a[i] <op> b[i]; dst may alias a or b.
    void (*add)(const double* a, const double* b, double* dst, std::size_t n);
    void (*sub)(const double* a, const double* b, double* dst, std::size_t n);
    void (*mul)(const double* a, const double* b, double* dst, std::size_t n);
    void (*div)(const double* a, const double* b, double* dst, std::size_t n);
    void (*fill)(double* dst, double value, std::size_t n);

    double (*sum)(const double* a, std::size_t n);
    // sum of (a[i] - b[i])^2
    double (*sq_err)(const double* a, const double* b, std::size_t n);
    // sum of (offset + slope * t[i] - y[i])^2
    double (*sq_err_affine)(const double* t, const double* y, double offset,
                            double slope, std::size_t n);
    // stt = sum (t[i]-mt)^2, sty = sum (t[i]-mt)*(y[i]-my)
    void (*centered_moments)(const double* t, const double* y, double mt,
                             double my, double* stt, double* sty, std::size_t n);
};

enum class Backend { Auto, Scalar, Avx2, Neon };

const Ops& scalar_ops();
const Ops& active_ops();
Backend active_backend();

// Test hook; Backend::Auto restores CPU detection.  Also honours the
// DAGP_KERNELS environment variable ("scalar", "avx2", "neon").
void force_backend(Backend backend);

bool all_finite(const double* a, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops();
bool avx2_supported();
#endif
#if defined(__aarch64__)
const Ops& neon_ops();
#endif

}  // namespace dagp::kernels
