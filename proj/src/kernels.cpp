#include <atomic>
#include <stdexcept>

#include "kernels_internal.hpp"

namespace strichartz::kernels {
namespace {

#ifdef STRICHARTZ_HAVE_AVX2
bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const Table* best_table() {
  if (const Table* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> table{best_table()};
  return table;
}

}  // namespace

const Table& scalar_table() { return detail::scalar_impl(); }

const Table* avx2_table() {
#ifdef STRICHARTZ_HAVE_AVX2
  static const bool supported = cpu_has_avx2();
  return supported ? &detail::avx2_impl() : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) {
  const Table* t = isa == Isa::scalar ? &scalar_table() : avx2_table();
  if (t == nullptr) throw std::runtime_error("kernel variant unavailable on this CPU: " + std::string(name(isa)));
  current().store(t, std::memory_order_release);
}

std::string_view name(Isa isa) { return isa == Isa::scalar ? "scalar" : "avx2"; }

}  // namespace strichartz::kernels
