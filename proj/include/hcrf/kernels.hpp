#pragma once
// Dense double-precision kernels used by inference and training.
//
// Every kernel has a portable scalar reference implementation and, where the
// target supports it, a SIMD variant (AVX2+FMA on x86-64, NEON on AArch64).
// The variant is chosen once at startup from the CPU's reported features and
// can be overridden for testing.

#include <cstddef>
#include <span>
#include <string_view>

namespace hcrf::kernels {

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view backend_name(Backend b);

/// Backend currently used by the dispatching entry points.
Backend active_backend();

/// Best backend this CPU supports.
Backend detect_backend();

bool backend_available(Backend b);

/// Forces a backend. Throws std::invalid_argument if it is not available.
void set_backend(Backend b);

// Dispatching entry points. Spans must have equal length where paired.
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double sum_squares(std::span<const double> x);

/// out[j*rows + r] = <matrix row r, vectors row j> for a row-major
/// `rows x dim` matrix and `count x dim` vectors.
void gemv_rows(std::span<const double> matrix, std::size_t rows,
               std::span<const double> vectors, std::size_t count,
               std::size_t dim, std::span<double> out);

// Fixed-backend implementations, exposed for equivalence testing.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sum_squares(const double* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sum_squares(const double* x, std::size_t n);
}  // namespace avx2

namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sum_squares(const double* x, std::size_t n);
}  // namespace neon

}  // namespace hcrf::kernels
