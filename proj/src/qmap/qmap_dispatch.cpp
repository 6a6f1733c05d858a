#include <cstdlib>
#include <cstring>

#include "qmap_kernels.hpp"

namespace eos::qmap {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

const Kernels& kernels() {
    static const Kernels& chosen = []() -> const Kernels& {
        const char* env = std::getenv("EOS_SIMD");
        if (env != nullptr && std::strcmp(env, "scalar") == 0) return scalar_kernels();
        if (avx2_available()) return avx2_kernels();
        return scalar_kernels();
    }();
    return chosen;
}

}  // namespace eos::qmap
