#include "batch_scalar.hpp"
#include "batch_kernels.hpp"

namespace scloss::kernels {

const KernelTable& scalar_table() {
  static constexpr KernelTable table = detail::make_table<scalar::Batch>(Isa::scalar, "scalar");
  return table;
}

}  // namespace scloss::kernels
