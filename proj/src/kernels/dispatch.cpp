#include "expclass/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace expclass::kernels {

#if defined(EXPCLASS_HAVE_AVX2)
const Table* avx2_table();  // defined in avx2.cpp
#endif

const Table* avx2() {
#if defined(EXPCLASS_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2")) return avx2_table();
#endif
    return nullptr;
}

const Table& active() {
    static const Table& chosen = []() -> const Table& {
        const char* env = std::getenv("EXPCLASS_KERNELS");
        if (env != nullptr && std::strcmp(env, "scalar") == 0) return scalar();
        const Table* simd = avx2();
        if (env != nullptr && std::strcmp(env, "avx2") == 0 && simd == nullptr) {
            return scalar();  // requested but unavailable; fall back
        }
        return simd != nullptr ? *simd : scalar();
    }();
    return chosen;
}

}  // namespace expclass::kernels
