#include <atomic>
#include <cstdlib>
#include <string>
#include <string_view>

#include "scloss/error.hpp"
#include "scloss/kernels.hpp"

namespace scloss::kernels {

const KernelTable& scalar_table();
const KernelTable* avx2_table();

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* resolve_initial() {
  if (const char* env = std::getenv("SCLOSS_ISA")) {
    const std::string_view want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && supported(Isa::avx2)) return table_for(Isa::avx2);
  }
  return table_for(best_available());
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{resolve_initial()};
  return table;
}

}  // namespace

const char* to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar: return &scalar_table();
    case Isa::avx2: return cpu_has_avx2() ? avx2_table() : nullptr;
  }
  return nullptr;
}

bool supported(Isa isa) { return table_for(isa) != nullptr; }

Isa best_available() { return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (t == nullptr) fail(ErrorKind::invalid_argument, std::string("kernel variant not available: ") + to_string(isa));
  current().store(t, std::memory_order_release);
}

ScopedIsa::ScopedIsa(Isa isa) : previous_(active().isa) { select(isa); }

ScopedIsa::~ScopedIsa() { select(previous_); }

}  // namespace scloss::kernels
