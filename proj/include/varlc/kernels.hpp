#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

namespace varlc::kernels {

/// Back ends for the hot reduction/synthesis loops. Scalar is the reference
/// implementation; Avx2 is selected automatically at runtime when the CPU
/// supports AVX2+FMA. The two are equivalence-tested against each other.
enum class Backend { Scalar, Avx2 };

/// Currently active backend (auto-detected on first use; the environment
/// variable VARLC_KERNEL_BACKEND=scalar|avx2 overrides detection).
Backend active_backend();

/// True when `b` can run on this machine/build.
bool backend_available(Backend b);

/// Force a specific backend (tests), or reset to auto-detection with nullopt.
/// Throws std::invalid_argument if the backend is unavailable.
void force_backend(std::optional<Backend> b);

/// sum of x[0..n)
double sum(const double* x, std::size_t n);

/// dot product of x and y over [0..n)
double dot(const double* x, const double* y, std::size_t n);

/// sum of squares of x[0..n)
double sum_squares(const double* x, std::size_t n);

/// sum_{k=0..count-1} 1 / (coeff*(n0+k)^2 - shift).
/// Caller guarantees no denominator vanishes over the range.
double reciprocal_quadratic_sum(double coeff, double shift, std::int64_t n0,
                                std::int64_t count);

/// Truncated trigonometric series synthesis:
///   out[j] = mean + sum_{n=1..modes} a[n-1]*cos(n*theta[j]) + b[n-1]*sin(n*theta[j])
/// for j in [0..npts). The scalar backend evaluates cos/sin directly; the
/// AVX2 backend uses the angle-addition recurrence across modes (unit-modulus
/// rotations, error growth ~ modes * epsilon).
void fourier_series_eval(const double* a, const double* b, std::size_t modes,
                         double mean, const double* theta, std::size_t npts,
                         double* out);

}  // namespace varlc::kernels
