#pragma once

#include <cstddef>
#include <string>

namespace uavlora::kernels {

// Double-precision inner loops used by the neural engine and optimizer.
// Every operation has a scalar reference implementation and, on x86 with
// AVX2+FMA, a vectorized variant. The active backend is chosen once at
// runtime; scalar and SIMD variants are equivalence-tested against each
// other (they may differ by rounding only).
struct Ops {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y = W x, W row-major rows x cols
  void (*matvec)(const double* w, const double* x, double* y, std::size_t rows,
                 std::size_t cols);
  // y += W x
  void (*matvec_add)(const double* w, const double* x, double* y,
                     std::size_t rows, std::size_t cols);
  // x_out += W^T y, W row-major rows x cols, y has rows entries
  void (*matvec_t_add)(const double* w, const double* y, double* x_out,
                       std::size_t rows, std::size_t cols);
  // W += a b^T (outer product accumulate), a has rows entries
  void (*ger_add)(double* w, const double* a, const double* b,
                  std::size_t rows, std::size_t cols);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // x *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
  // Adam update with bias correction. corr1 = 1 - beta1^t, corr2 = 1 - beta2^t.
  void (*adam_step)(double* param, const double* grad, double* m, double* v,
                    std::size_t n, double lr, double beta1, double beta2,
                    double eps, double corr1, double corr2);
};

enum class Backend { scalar, avx2 };

const Ops& scalar_ops();
const Ops& avx2_ops();  // valid only if cpu_supports_avx2()

bool cpu_supports_avx2();

// Select explicitly; throws std::invalid_argument for avx2 on unsupported
// hardware. "auto" (the default, also via env UAVLORA_KERNELS) picks avx2
// when available.
void select_backend(Backend backend);
void select_backend_auto();
Backend active_backend();
const char* backend_name(Backend backend);
Backend parse_backend(const std::string& name);  // "auto" selects and returns

// Active operation table.
const Ops& ops();

}  // namespace uavlora::kernels
