#include <atomic>
#include <string>

#include "kernels_impl.hpp"
#include "seqspec/errors.hpp"

namespace seqspec::kernels {
namespace {

constexpr KernelTable kScalar{Isa::scalar, scalar::gemm, scalar::gemv, scalar::axpy, scalar::rotated_sum};

#ifdef SEQSPEC_HAVE_AVX2
constexpr KernelTable kAvx2{Isa::avx2, avx2::gemm, avx2::gemv, avx2::axpy, avx2::rotated_sum};
#endif

bool cpu_has_avx2() noexcept {
#if defined(SEQSPEC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return &kScalar;
    case Isa::avx2:
      return avx2_available() ? avx2_table() : nullptr;
  }
  return nullptr;
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{table_for(detect())};
  return slot;
}

}  // namespace

const char* to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#ifdef SEQSPEC_HAVE_AVX2
  return &kAvx2;
#else
  return nullptr;
#endif
}

bool avx2_available() noexcept {
  static const bool available = avx2_table() != nullptr && cpu_has_avx2();
  return available;
}

Isa detect() noexcept { return avx2_available() ? Isa::avx2 : Isa::scalar; }

const KernelTable& active() noexcept { return *active_slot().load(std::memory_order_acquire); }

void select(Isa isa) {
  const KernelTable* table = table_for(isa);
  if (table == nullptr) throw PreconditionError(std::string("kernel set '") + to_string(isa) + "' is not available on this machine");
  active_slot().store(table, std::memory_order_release);
}

}  // namespace seqspec::kernels
