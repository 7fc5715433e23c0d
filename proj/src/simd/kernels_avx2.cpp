#include <immintrin.h>

#include "gprs/simd/kernels.hpp"

namespace gprs::simd {
namespace {

void curl_row(std::size_t n, float* dst, const float* ca, const float* cb, const float* p1, const float* m1, float s1,
              const float* p2, const float* m2, float s2) {
    const __m256 vs1 = _mm256_set1_ps(s1), vs2 = _mm256_set1_ps(s2);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 d1 = _mm256_mul_ps(_mm256_sub_ps(_mm256_loadu_ps(p1 + i), _mm256_loadu_ps(m1 + i)), vs1);
        const __m256 d2 = _mm256_mul_ps(_mm256_sub_ps(_mm256_loadu_ps(p2 + i), _mm256_loadu_ps(m2 + i)), vs2);
        const __m256 curl = _mm256_sub_ps(d1, d2);
        const __m256 keep = _mm256_mul_ps(_mm256_loadu_ps(ca + i), _mm256_loadu_ps(dst + i));
        _mm256_storeu_ps(dst + i, _mm256_add_ps(keep, _mm256_mul_ps(_mm256_loadu_ps(cb + i), curl)));
    }
    for (; i < n; ++i) {
        const float d1 = (p1[i] - m1[i]) * s1;
        const float d2 = (p2[i] - m2[i]) * s2;
        dst[i] = ca[i] * dst[i] + cb[i] * (d1 - d2);
    }
}

void curl_run(std::size_t n, float* dst, float ca, float cb, const float* p1, const float* m1, float s1,
              const float* p2, const float* m2, float s2) {
    const __m256 vs1 = _mm256_set1_ps(s1), vs2 = _mm256_set1_ps(s2);
    const __m256 vca = _mm256_set1_ps(ca), vcb = _mm256_set1_ps(cb);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 d1 = _mm256_mul_ps(_mm256_sub_ps(_mm256_loadu_ps(p1 + i), _mm256_loadu_ps(m1 + i)), vs1);
        const __m256 d2 = _mm256_mul_ps(_mm256_sub_ps(_mm256_loadu_ps(p2 + i), _mm256_loadu_ps(m2 + i)), vs2);
        const __m256 curl = _mm256_sub_ps(d1, d2);
        const __m256 keep = _mm256_mul_ps(vca, _mm256_loadu_ps(dst + i));
        _mm256_storeu_ps(dst + i, _mm256_add_ps(keep, _mm256_mul_ps(vcb, curl)));
    }
    for (; i < n; ++i) {
        const float d1 = (p1[i] - m1[i]) * s1;
        const float d2 = (p2[i] - m2[i]) * s2;
        dst[i] = ca * dst[i] + cb * (d1 - d2);
    }
}

void curl_row_const(std::size_t n, float* dst, float c, const float* p1, const float* m1, float s1, const float* p2,
                    const float* m2, float s2) {
    const __m256 vs1 = _mm256_set1_ps(s1), vs2 = _mm256_set1_ps(s2), vc = _mm256_set1_ps(c);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 d1 = _mm256_mul_ps(_mm256_sub_ps(_mm256_loadu_ps(p1 + i), _mm256_loadu_ps(m1 + i)), vs1);
        const __m256 d2 = _mm256_mul_ps(_mm256_sub_ps(_mm256_loadu_ps(p2 + i), _mm256_loadu_ps(m2 + i)), vs2);
        const __m256 curl = _mm256_sub_ps(d1, d2);
        _mm256_storeu_ps(dst + i, _mm256_sub_ps(_mm256_loadu_ps(dst + i), _mm256_mul_ps(vc, curl)));
    }
    for (; i < n; ++i) {
        const float d1 = (p1[i] - m1[i]) * s1;
        const float d2 = (p2[i] - m2[i]) * s2;
        dst[i] = dst[i] - c * (d1 - d2);
    }
}

void cpml_row(std::size_t n, float* dst, const float* cb, float* psi, const float* p, const float* m, float s, float b,
              float a, float kfac) {
    const __m256 vs = _mm256_set1_ps(s), vb = _mm256_set1_ps(b), va = _mm256_set1_ps(a), vk = _mm256_set1_ps(kfac);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 d = _mm256_mul_ps(_mm256_sub_ps(_mm256_loadu_ps(p + i), _mm256_loadu_ps(m + i)), vs);
        const __m256 ps = _mm256_add_ps(_mm256_mul_ps(vb, _mm256_loadu_ps(psi + i)), _mm256_mul_ps(va, d));
        _mm256_storeu_ps(psi + i, ps);
        const __m256 corr = _mm256_mul_ps(_mm256_loadu_ps(cb + i), _mm256_add_ps(_mm256_mul_ps(vk, d), ps));
        _mm256_storeu_ps(dst + i, _mm256_add_ps(_mm256_loadu_ps(dst + i), corr));
    }
    for (; i < n; ++i) {
        const float d = (p[i] - m[i]) * s;
        psi[i] = b * psi[i] + a * d;
        dst[i] = dst[i] + cb[i] * (kfac * d + psi[i]);
    }
}

void cpml_row_const(std::size_t n, float* dst, float cb, float* psi, const float* p, const float* m, float s, float b,
                    float a, float kfac) {
    const __m256 vs = _mm256_set1_ps(s), vb = _mm256_set1_ps(b), va = _mm256_set1_ps(a), vk = _mm256_set1_ps(kfac);
    const __m256 vcb = _mm256_set1_ps(cb);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 d = _mm256_mul_ps(_mm256_sub_ps(_mm256_loadu_ps(p + i), _mm256_loadu_ps(m + i)), vs);
        const __m256 ps = _mm256_add_ps(_mm256_mul_ps(vb, _mm256_loadu_ps(psi + i)), _mm256_mul_ps(va, d));
        _mm256_storeu_ps(psi + i, ps);
        const __m256 corr = _mm256_mul_ps(vcb, _mm256_add_ps(_mm256_mul_ps(vk, d), ps));
        _mm256_storeu_ps(dst + i, _mm256_add_ps(_mm256_loadu_ps(dst + i), corr));
    }
    for (; i < n; ++i) {
        const float d = (p[i] - m[i]) * s;
        psi[i] = b * psi[i] + a * d;
        dst[i] = dst[i] + cb * (kfac * d + psi[i]);
    }
}

void dft_accumulate(std::size_t n, double* re, double* im, const float* x, double c, double s) {
    const __m256d vc = _mm256_set1_pd(c), vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_cvtps_pd(_mm_loadu_ps(x + i));
        _mm256_storeu_pd(re + i, _mm256_add_pd(_mm256_loadu_pd(re + i), _mm256_mul_pd(v, vc)));
        _mm256_storeu_pd(im + i, _mm256_sub_pd(_mm256_loadu_pd(im + i), _mm256_mul_pd(v, vs)));
    }
    for (; i < n; ++i) {
        const double v = x[i];
        re[i] = re[i] + v * c;
        im[i] = im[i] - v * s;
    }
}

}  // namespace

namespace detail {
const Kernels avx2_kernels{Isa::avx2, curl_row, curl_run, curl_row_const, cpml_row, cpml_row_const, dft_accumulate};
}

}  // namespace gprs::simd
