#include <cstdlib>
#include <string_view>

#include "glvr/kernels.hpp"

namespace glvr::kernels {

extern const KernelTable kScalarTable;
#if defined(GLVR_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(GLVR_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

const KernelTable* table_for(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return &kScalarTable;
        case Isa::avx2:
#if defined(GLVR_HAVE_AVX2)
            if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &kAvx2Table;
#endif
            return nullptr;
        case Isa::neon:
#if defined(GLVR_HAVE_NEON)
            return &kNeonTable;  // baseline on aarch64
#else
            return nullptr;
#endif
    }
    return nullptr;
}

namespace {

const KernelTable& select() {
    if (const char* forced = std::getenv("GLVR_ISA")) {
        const std::string_view name(forced);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
            if (name == to_string(isa))
                if (const KernelTable* t = table_for(isa)) return *t;
    }
    for (Isa isa : {Isa::avx2, Isa::neon})
        if (const KernelTable* t = table_for(isa)) return *t;
    return kScalarTable;
}

}  // namespace

const KernelTable& active() {
    static const KernelTable& table = select();
    return table;
}

}  // namespace glvr::kernels
