#pragma once

#include <cstddef>
#include <string_view>

// Row kernels for the FDTD inner loops. Every ISA variant performs the same
// IEEE operations in the same order (no FMA), so results are bitwise identical
// to the scalar reference.

namespace gprs::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// dst = ca*dst + cb*((p1 - m1)*s1 - (p2 - m2)*s2)
using CurlRowFn = void (*)(std::size_t n, float* dst, const float* ca, const float* cb, const float* p1,
                           const float* m1, float s1, const float* p2, const float* m2, float s2);

/// Same as CurlRowFn with scalar ca, cb (a run of identical edges).
using CurlRunFn = void (*)(std::size_t n, float* dst, float ca, float cb, const float* p1, const float* m1, float s1,
                           const float* p2, const float* m2, float s2);

/// dst = dst - c*((p1 - m1)*s1 - (p2 - m2)*s2)
using CurlRowConstFn = void (*)(std::size_t n, float* dst, float c, const float* p1, const float* m1, float s1,
                                const float* p2, const float* m2, float s2);

/// d = (p - m)*s; psi = b*psi + a*d; dst = dst + cb*(kfac*d + psi)
using CpmlRowFn = void (*)(std::size_t n, float* dst, const float* cb, float* psi, const float* p, const float* m,
                           float s, float b, float a, float kfac);

/// Same with a scalar cb.
using CpmlRowConstFn = void (*)(std::size_t n, float* dst, float cb, float* psi, const float* p, const float* m,
                                float s, float b, float a, float kfac);

/// re += x*c; im -= x*s  (running DFT against e^{-jwt})
using DftAccumulateFn = void (*)(std::size_t n, double* re, double* im, const float* x, double c, double s);

struct Kernels {
    Isa isa;
    CurlRowFn curl_row;
    CurlRunFn curl_run;
    CurlRowConstFn curl_row_const;
    CpmlRowFn cpml_row;
    CpmlRowConstFn cpml_row_const;
    DftAccumulateFn dft_accumulate;
};

bool isa_available(Isa isa);

/// Kernel table for a given ISA; throws if the CPU lacks it.
const Kernels& kernels_for(Isa isa);

/// Best available ISA, unless GPRS_SIMD=scalar|avx2 overrides it.
Isa preferred_isa();

const Kernels& active_kernels();

namespace detail {
extern const Kernels scalar_kernels;
#if defined(GPRS_HAVE_AVX2)
extern const Kernels avx2_kernels;
#endif
}  // namespace detail

}  // namespace gprs::simd
