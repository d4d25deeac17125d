#include "varlc/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace varlc::kernels {

namespace scalar {

double sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_squares(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double reciprocal_quadratic_sum(double coeff, double shift, std::int64_t n0,
                                std::int64_t count) {
    double acc = 0.0;
    for (std::int64_t k = 0; k < count; ++k) {
        const double nn = static_cast<double>(n0 + k);
        acc += 1.0 / (coeff * nn * nn - shift);
    }
    return acc;
}

void fourier_series_eval(const double* a, const double* b, std::size_t modes,
                         double mean, const double* theta, std::size_t npts,
                         double* out) {
    for (std::size_t j = 0; j < npts; ++j) {
        double acc = mean;
        for (std::size_t n = 1; n <= modes; ++n) {
            const double ang = static_cast<double>(n) * theta[j];
            acc += a[n - 1] * std::cos(ang) + b[n - 1] * std::sin(ang);
        }
        out[j] = acc;
    }
}

}  // namespace scalar

#if defined(VARLC_HAVE_AVX2_TU)
namespace avx2 {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double sum_squares(const double* x, std::size_t n);
double reciprocal_quadratic_sum(double coeff, double shift, std::int64_t n0,
                                std::int64_t count);
void fourier_series_eval(const double* a, const double* b, std::size_t modes,
                         double mean, const double* theta, std::size_t npts,
                         double* out);
}  // namespace avx2
#endif

namespace {

bool cpu_has_avx2() {
#if defined(VARLC_HAVE_AVX2_TU) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect_backend() {
    if (const char* env = std::getenv("VARLC_KERNEL_BACKEND")) {
        const std::string v(env);
        if (v == "scalar") return Backend::Scalar;
        if (v == "avx2" && cpu_has_avx2()) return Backend::Avx2;
        // Unknown or unavailable value: fall through to detection.
    }
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

// -1 = auto, otherwise the forced Backend value.
std::atomic<int> g_forced{-1};

Backend current() {
    const int forced = g_forced.load(std::memory_order_relaxed);
    if (forced >= 0) return static_cast<Backend>(forced);
    static const Backend detected = detect_backend();
    return detected;
}

}  // namespace

Backend active_backend() { return current(); }

bool backend_available(Backend b) {
    switch (b) {
        case Backend::Scalar: return true;
        case Backend::Avx2: return cpu_has_avx2();
    }
    return false;
}

void force_backend(std::optional<Backend> b) {
    if (!b) {
        g_forced.store(-1, std::memory_order_relaxed);
        return;
    }
    if (!backend_available(*b))
        throw std::invalid_argument("kernels: requested backend is unavailable");
    g_forced.store(static_cast<int>(*b), std::memory_order_relaxed);
}

double sum(const double* x, std::size_t n) {
#if defined(VARLC_HAVE_AVX2_TU)
    if (current() == Backend::Avx2) return avx2::sum(x, n);
#endif
    return scalar::sum(x, n);
}

double dot(const double* x, const double* y, std::size_t n) {
#if defined(VARLC_HAVE_AVX2_TU)
    if (current() == Backend::Avx2) return avx2::dot(x, y, n);
#endif
    return scalar::dot(x, y, n);
}

double sum_squares(const double* x, std::size_t n) {
#if defined(VARLC_HAVE_AVX2_TU)
    if (current() == Backend::Avx2) return avx2::sum_squares(x, n);
#endif
    return scalar::sum_squares(x, n);
}

double reciprocal_quadratic_sum(double coeff, double shift, std::int64_t n0,
                                std::int64_t count) {
#if defined(VARLC_HAVE_AVX2_TU)
    if (current() == Backend::Avx2)
        return avx2::reciprocal_quadratic_sum(coeff, shift, n0, count);
#endif
    return scalar::reciprocal_quadratic_sum(coeff, shift, n0, count);
}

void fourier_series_eval(const double* a, const double* b, std::size_t modes,
                         double mean, const double* theta, std::size_t npts,
                         double* out) {
#if defined(VARLC_HAVE_AVX2_TU)
    if (current() == Backend::Avx2) {
        avx2::fourier_series_eval(a, b, modes, mean, theta, npts, out);
        return;
    }
#endif
    scalar::fourier_series_eval(a, b, modes, mean, theta, npts, out);
}

}  // namespace varlc::kernels
