#pragma once

#include <cstddef>

namespace masar::dense {

// Inner product over float vectors. dot() dispatches once, at first use, to
// the widest kernel the CPU supports; dot_scalar() is the reference the SIMD
// paths are equivalence-tested against.
float dot_scalar(const float* a, const float* b, std::size_t n);
float dot(const float* a, const float* b, std::size_t n);

// Name of the kernel dot() resolved to: "avx2" or "scalar".
const char* active_kernel();

}  // namespace masar::dense
