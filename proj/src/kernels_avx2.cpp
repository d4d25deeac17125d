// AVX2+FMA variants of the hot kernels. This translation unit is compiled
// with -mavx2 -mfma and must only be entered after a runtime CPU check.

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstdint>

namespace varlc::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i];
    return hsum(acc) + tail;
}

double dot(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i] * y[i];
    return hsum(acc) + tail;
}

double sum_squares(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i] * x[i];
    return hsum(acc) + tail;
}

double reciprocal_quadratic_sum(double coeff, double shift, std::int64_t n0,
                                std::int64_t count) {
    const __m256d vc = _mm256_set1_pd(coeff);
    const __m256d vs = _mm256_set1_pd(shift);
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d acc = _mm256_setzero_pd();
    std::int64_t k = 0;
    for (; k + 4 <= count; k += 4) {
        const double base = static_cast<double>(n0 + k);
        const __m256d nn = _mm256_add_pd(_mm256_set1_pd(base),
                                         _mm256_set_pd(3.0, 2.0, 1.0, 0.0));
        const __m256d den = _mm256_fmsub_pd(_mm256_mul_pd(vc, nn), nn, vs);
        acc = _mm256_add_pd(acc, _mm256_div_pd(one, den));
    }
    double tail = 0.0;
    for (; k < count; ++k) {
        const double nn = static_cast<double>(n0 + k);
        tail += 1.0 / (coeff * nn * nn - shift);
    }
    return hsum(acc) + tail;
}

void fourier_series_eval(const double* a, const double* b, std::size_t modes,
                         double mean, const double* theta, std::size_t npts,
                         double* out) {
    // Four time points per pass; across modes use the angle-addition
    // recurrence (cos/sin of n*theta from (n-1)*theta), one unit-modulus
    // rotation per mode instead of two libm calls.
    std::size_t j = 0;
    for (; j + 4 <= npts; j += 4) {
        const __m256d th = _mm256_loadu_pd(theta + j);
        alignas(32) double thbuf[4], cbuf[4], sbuf[4];
        _mm256_store_pd(thbuf, th);
        for (int q = 0; q < 4; ++q) {
            cbuf[q] = std::cos(thbuf[q]);
            sbuf[q] = std::sin(thbuf[q]);
        }
        const __m256d c1 = _mm256_load_pd(cbuf);
        const __m256d s1 = _mm256_load_pd(sbuf);
        __m256d cn = c1;
        __m256d sn = s1;
        __m256d acc = _mm256_set1_pd(mean);
        for (std::size_t n = 1; n <= modes; ++n) {
            acc = _mm256_fmadd_pd(_mm256_set1_pd(a[n - 1]), cn, acc);
            acc = _mm256_fmadd_pd(_mm256_set1_pd(b[n - 1]), sn, acc);
            const __m256d cnext =
                _mm256_fmsub_pd(cn, c1, _mm256_mul_pd(sn, s1));
            const __m256d snext =
                _mm256_fmadd_pd(sn, c1, _mm256_mul_pd(cn, s1));
            cn = cnext;
            sn = snext;
        }
        _mm256_storeu_pd(out + j, acc);
    }
    for (; j < npts; ++j) {
        const double c1 = std::cos(theta[j]);
        const double s1 = std::sin(theta[j]);
        double cn = c1, sn = s1, acc = mean;
        for (std::size_t n = 1; n <= modes; ++n) {
            acc += a[n - 1] * cn + b[n - 1] * sn;
            const double cnext = cn * c1 - sn * s1;
            const double snext = sn * c1 + cn * s1;
            cn = cnext;
            sn = snext;
        }
        out[j] = acc;
    }
}

}  // namespace varlc::kernels::avx2
