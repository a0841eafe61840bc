#pragma once

// Data-parallel inner loops shared by every module. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2/FMA variant compiled in its
// own translation unit. The active table is chosen once at startup from CPUID
// and can be pinned with `select`.

#include <cstddef>

#include "seqspec/types.hpp"

namespace seqspec::kernels {

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;

  // c = a * b for n x n row-major matrices. c must not alias a or b.
  void (*gemm)(std::size_t n, const Complex* a, const Complex* b, Complex* c);

  // y = a * x for an n x n row-major matrix. y must not alias x.
  void (*gemv)(std::size_t n, const Complex* a, const Complex* x, Complex* y);

  // y += alpha * x
  void (*axpy)(std::size_t n, Complex alpha, const Complex* x, Complex* y);

  // acc[k] += sum_{i < count} phase_i * values[i * dim + k] with phase_0 = 1 and
  // phase_{i+1} = phase_i * step. `step` is unimodular; the running phase is
  // rescaled to unit modulus every kRenormInterval steps.
  void (*rotated_sum)(const Complex* values, std::size_t count, std::size_t dim, Complex step,
                      Complex* acc);
};

inline constexpr std::size_t kRenormInterval = 1024;

const KernelTable& scalar_table() noexcept;

/// nullptr when the AVX2 variants were not compiled in.
const KernelTable* avx2_table() noexcept;

/// True when the AVX2 table exists and the running CPU supports AVX2 and FMA.
bool avx2_available() noexcept;

/// Best ISA for this machine.
Isa detect() noexcept;

/// Currently active kernels.
const KernelTable& active() noexcept;

/// Pin the active table. Throws PreconditionError if `isa` is unavailable.
void select(Isa isa);

}  // namespace seqspec::kernels
