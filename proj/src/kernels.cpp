#include "mric/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace mric::kernels {

const Ops* avx2_ops_table(); // defined in kernels_avx2.cpp

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops* avx2_ops() {
    if (!cpu_has_avx2()) return nullptr;
    return avx2_ops_table();
}

namespace {

const Ops& pick() {
    if (const char* env = std::getenv("MRIC_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return scalar_ops();
    }
    if (const Ops* v = avx2_ops()) return *v;
    return scalar_ops();
}

} // namespace

const Ops& ops() {
    static const Ops& table = pick();
    return table;
}

} // namespace mric::kernels
