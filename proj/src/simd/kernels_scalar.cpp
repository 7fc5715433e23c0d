#include "gprs/simd/kernels.hpp"

namespace gprs::simd {
namespace {

void curl_row(std::size_t n, float* dst, const float* ca, const float* cb, const float* p1, const float* m1, float s1,
              const float* p2, const float* m2, float s2) {
    for (std::size_t i = 0; i < n; ++i) {
        const float d1 = (p1[i] - m1[i]) * s1;
        const float d2 = (p2[i] - m2[i]) * s2;
        const float curl = d1 - d2;
        dst[i] = ca[i] * dst[i] + cb[i] * curl;
    }
}

void curl_run(std::size_t n, float* dst, float ca, float cb, const float* p1, const float* m1, float s1,
              const float* p2, const float* m2, float s2) {
    for (std::size_t i = 0; i < n; ++i) {
        const float d1 = (p1[i] - m1[i]) * s1;
        const float d2 = (p2[i] - m2[i]) * s2;
        const float curl = d1 - d2;
        dst[i] = ca * dst[i] + cb * curl;
    }
}

void curl_row_const(std::size_t n, float* dst, float c, const float* p1, const float* m1, float s1, const float* p2,
                    const float* m2, float s2) {
    for (std::size_t i = 0; i < n; ++i) {
        const float d1 = (p1[i] - m1[i]) * s1;
        const float d2 = (p2[i] - m2[i]) * s2;
        const float curl = d1 - d2;
        dst[i] = dst[i] - c * curl;
    }
}

void cpml_row(std::size_t n, float* dst, const float* cb, float* psi, const float* p, const float* m, float s, float b,
              float a, float kfac) {
    for (std::size_t i = 0; i < n; ++i) {
        const float d = (p[i] - m[i]) * s;
        psi[i] = b * psi[i] + a * d;
        dst[i] = dst[i] + cb[i] * (kfac * d + psi[i]);
    }
}

void cpml_row_const(std::size_t n, float* dst, float cb, float* psi, const float* p, const float* m, float s, float b,
                    float a, float kfac) {
    for (std::size_t i = 0; i < n; ++i) {
        const float d = (p[i] - m[i]) * s;
        psi[i] = b * psi[i] + a * d;
        dst[i] = dst[i] + cb * (kfac * d + psi[i]);
    }
}

void dft_accumulate(std::size_t n, double* re, double* im, const float* x, double c, double s) {
    for (std::size_t i = 0; i < n; ++i) {
        const double v = x[i];
        re[i] = re[i] + v * c;
        im[i] = im[i] - v * s;
    }
}

}  // namespace

namespace detail {
const Kernels scalar_kernels{Isa::scalar, curl_row, curl_run, curl_row_const, cpml_row, cpml_row_const, dft_accumulate};
}

}  // namespace gprs::simd
