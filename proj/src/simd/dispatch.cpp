#include <cstdlib>
#include <string>

#include "gprs/error.hpp"
#include "gprs/simd/kernels.hpp"

namespace gprs::simd {

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(GPRS_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
    }
    return false;
}

const Kernels& kernels_for(Isa isa) {
    if (!isa_available(isa)) throw ValidationError("SIMD variant '" + std::string(isa_name(isa)) + "' is unavailable");
#if defined(GPRS_HAVE_AVX2)
    if (isa == Isa::avx2) return detail::avx2_kernels;
#endif
    return detail::scalar_kernels;
}

Isa preferred_isa() {
    if (const char* env = std::getenv("GPRS_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return Isa::scalar;
        if (v == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
    }
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

const Kernels& active_kernels() {
    static const Kernels& k = kernels_for(preferred_isa());
    return k;
}

}  // namespace gprs::simd
