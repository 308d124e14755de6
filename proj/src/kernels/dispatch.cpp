#include <atomic>
#include <cassert>
#include <stdexcept>
#include <string>

#include "hcrf/kernels.hpp"

namespace hcrf::kernels {
namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*sum_squares)(const double*, std::size_t);
};

constexpr Table kScalarTable{&scalar::dot, &scalar::axpy, &scalar::sum_squares};
#if defined(HCRF_HAVE_AVX2)
constexpr Table kAvx2Table{&avx2::dot, &avx2::axpy, &avx2::sum_squares};
#endif
#if defined(HCRF_HAVE_NEON)
constexpr Table kNeonTable{&neon::dot, &neon::axpy, &neon::sum_squares};
#endif

const Table* table_for(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return &kScalarTable;
    case Backend::kAvx2:
#if defined(HCRF_HAVE_AVX2)
      return &kAvx2Table;
#else
      return nullptr;
#endif
    case Backend::kNeon:
#if defined(HCRF_HAVE_NEON)
      return &kNeonTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

struct State {
  std::atomic<Backend> backend;
  std::atomic<const Table*> table;
  State() : backend(detect_backend()), table(table_for(backend.load())) {}
};

State& state() {
  static State s;
  return s;
}

inline const Table& active() { return *state().table.load(std::memory_order_relaxed); }

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
    case Backend::kNeon: return "neon";
  }
  return "unknown";
}

bool backend_available(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if defined(HCRF_HAVE_AVX2)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::kNeon:
#if defined(HCRF_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend detect_backend() {
  if (backend_available(Backend::kAvx2)) return Backend::kAvx2;
  if (backend_available(Backend::kNeon)) return Backend::kNeon;
  return Backend::kScalar;
}

Backend active_backend() { return state().backend.load(); }

void set_backend(Backend b) {
  if (!backend_available(b)) {
    throw std::invalid_argument("kernel backend not available: " + std::string(backend_name(b)));
  }
  state().table.store(table_for(b));
  state().backend.store(b);
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

double sum_squares(std::span<const double> x) { return active().sum_squares(x.data(), x.size()); }

void gemv_rows(std::span<const double> matrix, std::size_t rows, std::span<const double> vectors,
               std::size_t count, std::size_t dim, std::span<double> out) {
  assert(matrix.size() == rows * dim && vectors.size() == count * dim && out.size() == rows * count);
  const Table& t = active();
  for (std::size_t j = 0; j < count; ++j) {
    const double* v = vectors.data() + j * dim;
    for (std::size_t r = 0; r < rows; ++r) {
      out[j * rows + r] = t.dot(matrix.data() + r * dim, v, dim);
    }
  }
}

}  // namespace hcrf::kernels
