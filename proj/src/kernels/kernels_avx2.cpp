// Compiled with -mavx2. Must not include headers with inline library code
// that other (baseline-ISA) translation units also instantiate.

#include "scloss/kernels.hpp"

#if defined(SCLOSS_HAVE_AVX2)

#include "batch_avx2.hpp"
#include "batch_kernels.hpp"

namespace scloss::kernels {

const KernelTable* avx2_table() {
  static constexpr KernelTable table = detail::make_table<avx2::Batch>(Isa::avx2, "avx2");
  return &table;
}

}  // namespace scloss::kernels

#else

namespace scloss::kernels {

const KernelTable* avx2_table() { return nullptr; }

}  // namespace scloss::kernels

#endif
