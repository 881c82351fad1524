#include "wtensor/generators.hpp"

#include "wtensor/error.hpp"

namespace wtensor {

SymmetricTensor gen_product_block_tensor(int n) {
  if (n < 4 || n % 4 != 0) {
    throw Error(ErrorCode::InvalidArgument, "dimension must be a positive multiple of 4");
  }
  TensorBuilder b(4, n);
  for (int i = 1; i <= n; ++i) b.add(MultiIndex::diagonal(i, 4), n);
  for (int l = 1; l <= n / 4; ++l) b.add({4 * l - 3, 4 * l - 2, 4 * l - 1, 4 * l}, -4.0);
  return b.build();
}

}  // namespace wtensor
