#pragma once

#include "strichartz/kernels.hpp"

namespace strichartz::kernels::detail {

const Table& scalar_impl();
#ifdef STRICHARTZ_HAVE_AVX2
const Table& avx2_impl();
#endif

}  // namespace strichartz::kernels::detail
