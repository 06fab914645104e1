#pragma once

#include "softeval/kernels.hpp"

namespace softeval::kernels::detail {

extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif
#if defined(__aarch64__)
extern const KernelTable neon_table;
#endif

}  // namespace softeval::kernels::detail
