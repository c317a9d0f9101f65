#include "masar/dense_kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define MASAR_X86 1
#include <immintrin.h>
#endif

namespace masar::dense {

float dot_scalar(const float* a, const float* b, std::size_t n) {
    float acc = 0.0f;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

#if MASAR_X86

__attribute__((target("avx2,fma"))) static float dot_avx2(const float* a, const float* b, std::size_t n) {
    std::size_t vec_end = n / 8 * 8;
    __m256 acc = _mm256_setzero_ps();
    for (std::size_t i = 0; i < vec_end; i += 8) {
        __m256 va = _mm256_loadu_ps(a + i);
        __m256 vb = _mm256_loadu_ps(b + i);
        acc = _mm256_fmadd_ps(va, vb, acc);
    }
    __m128 lo = _mm256_castps256_ps128(acc);
    __m128 hi = _mm256_extractf128_ps(acc, 1);
    __m128 sum4 = _mm_add_ps(lo, hi);
    __m128 sum2 = _mm_add_ps(sum4, _mm_movehl_ps(sum4, sum4));
    __m128 sum1 = _mm_add_ss(sum2, _mm_shuffle_ps(sum2, sum2, 1));
    float total = _mm_cvtss_f32(sum1);
    return total + dot_scalar(a + vec_end, b + vec_end, n - vec_end);
}

static bool cpu_has_avx2_fma() {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#endif  // MASAR_X86

namespace {

using KernelFn = float (*)(const float*, const float*, std::size_t);

struct Dispatch {
    KernelFn fn;
    const char* name;
};

Dispatch resolve() {
#if MASAR_X86
    if (cpu_has_avx2_fma()) return {&dot_avx2, "avx2"};
#endif
    return {&dot_scalar, "scalar"};
}

const Dispatch& dispatch() {
    static const Dispatch d = resolve();
    return d;
}

}  // namespace

float dot(const float* a, const float* b, std::size_t n) {
    return dispatch().fn(a, b, n);
}

const char* active_kernel() {
    return dispatch().name;
}

}  // namespace masar::dense
