#pragma once

#include "wtensor/symmetric_tensor.hpp"

namespace wtensor {

/// Order-4 tensor on n = 4p variables: every diagonal coefficient is n and each
/// group of four consecutive variables carries -4 x_{4l-3} x_{4l-2} x_{4l-1} x_{4l}.
/// Its maximum H-eigenvalue is n + 1.
SymmetricTensor gen_product_block_tensor(int n);

}  // namespace wtensor
