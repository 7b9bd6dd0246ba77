#include <atomic>
#include <string>

#include "esnc/error.hpp"
#include "esnc/kernels.hpp"

namespace esnc::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(ESNC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table* initial_table() noexcept {
  if (supported(Isa::avx2)) return table_for(Isa::avx2);
  return &detail::scalar_table;
}

std::atomic<const Table*>& current() noexcept {
  static std::atomic<const Table*> table{initial_table()};
  return table;
}

}  // namespace

std::string_view name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view text) noexcept {
  if (text == "scalar") return Isa::scalar;
  if (text == "avx2") return Isa::avx2;
  return std::nullopt;
}

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: {
      static const bool ok = cpu_has_avx2();
      return ok;
    }
  }
  return false;
}

const Table* table_for(Isa isa) noexcept {
  if (!supported(isa)) return nullptr;
  switch (isa) {
    case Isa::scalar: return &detail::scalar_table;
#if defined(ESNC_HAVE_AVX2)
    case Isa::avx2: return &detail::avx2_table;
#else
    case Isa::avx2: return nullptr;
#endif
  }
  return nullptr;
}

const Table& active() noexcept { return *current().load(std::memory_order_acquire); }

void select(Isa isa) {
  const Table* t = table_for(isa);
  if (t == nullptr) {
    throw Error(Errc::BadArgument, "kernel ISA '" + std::string(name(isa)) + "' not supported here");
  }
  current().store(t, std::memory_order_release);
}

}  // namespace esnc::kernels
