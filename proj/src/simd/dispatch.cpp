#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "exlab/simd/kernels.hpp"

namespace exlab::simd {
namespace {

constexpr KernelTable kScalarTable{&scalar::dot, &scalar::sum_squares, &scalar::axpy,
                                   &scalar::noise_update};

#if defined(EXLAB_HAVE_AVX2)
constexpr KernelTable kAvx2Table{&avx2::dot, &avx2::sum_squares, &avx2::axpy,
                                 &avx2::noise_update};
#endif

#if defined(EXLAB_HAVE_NEON)
constexpr KernelTable kNeonTable{&neon::dot, &neon::sum_squares, &neon::axpy,
                                 &neon::noise_update};
#endif

bool cpu_has_avx2() noexcept {
#if defined(EXLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Level parse_level(const std::string& name) {
  if (name == "scalar") return Level::scalar;
  if (name == "avx2") return Level::avx2;
  if (name == "neon") return Level::neon;
  throw std::invalid_argument("EXLAB_SIMD: unknown level '" + name +
                              "' (expected scalar, avx2 or neon)");
}

Level detect_level() {
  if (const char* env = std::getenv("EXLAB_SIMD"); env != nullptr && *env != '\0') {
    const Level requested = parse_level(env);
    if (!level_available(requested)) {
      throw std::invalid_argument(std::string("EXLAB_SIMD=") + env +
                                  " is not available on this build/CPU");
    }
    return requested;
  }
  if (level_available(Level::avx2)) return Level::avx2;
  if (level_available(Level::neon)) return Level::neon;
  return Level::scalar;
}

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> table{&kernels(detect_level())};
  return table;
}

}  // namespace

std::string_view level_name(Level level) noexcept {
  switch (level) {
    case Level::scalar: return "scalar";
    case Level::avx2: return "avx2";
    case Level::neon: return "neon";
  }
  return "unknown";
}

bool level_available(Level level) noexcept {
  switch (level) {
    case Level::scalar: return true;
    case Level::avx2: return cpu_has_avx2();
    case Level::neon:
#if defined(EXLAB_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels(Level level) {
  if (!level_available(level)) {
    throw std::invalid_argument("SIMD level " + std::string(level_name(level)) +
                                " is not available");
  }
  switch (level) {
#if defined(EXLAB_HAVE_AVX2)
    case Level::avx2: return kAvx2Table;
#endif
#if defined(EXLAB_HAVE_NEON)
    case Level::neon: return kNeonTable;
#endif
    default: return kScalarTable;
  }
}

const KernelTable& kernels() { return *active_table().load(std::memory_order_acquire); }

Level active_level() {
  const KernelTable* table = active_table().load(std::memory_order_acquire);
#if defined(EXLAB_HAVE_AVX2)
  if (table == &kAvx2Table) return Level::avx2;
#endif
#if defined(EXLAB_HAVE_NEON)
  if (table == &kNeonTable) return Level::neon;
#endif
  (void)table;
  return Level::scalar;
}

void set_active_level(Level level) {
  active_table().store(&kernels(level), std::memory_order_release);
}

}  // namespace exlab::simd
