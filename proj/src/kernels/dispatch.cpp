// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "jpa/kernels.hpp"

namespace jpa::kernels
{

const char* to_string(Isa isa)
{
    switch (isa)
    {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    }
    return "?";
}

bool cpu_has_avx2()
{
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable& table(Isa isa)
{
    switch (isa)
    {
    case Isa::Scalar: return detail::scalar_table;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
        if (cpu_has_avx2())
            return detail::avx2_table;
#endif
        throw std::runtime_error("AVX2 kernels requested but not supported by this CPU");
    }
    throw std::logic_error("unknown ISA");
}

Isa default_isa()
{
    if (const char* env = std::getenv("JPA_KERNELS"); env && std::string_view(env) == "scalar")
        return Isa::Scalar;
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

} // namespace jpa::kernels
