#include <atomic>
#include <cstdlib>
#include <cstring>

#include "immse/errors.hpp"
#include "immse/kernels/posterior.hpp"

namespace immse::kernels {

namespace {

// -1: no override; otherwise the Isa value.
std::atomic<int> g_override{-1};

bool env_forces_scalar() noexcept
{
    const char* v = std::getenv("IMMSE_FORCE_SCALAR");
    return v != nullptr && std::strcmp(v, "0") != 0 && v[0] != '\0';
}

}  // namespace

std::string_view to_string(Isa isa) noexcept
{
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

bool avx2_available() noexcept
{
#if defined(IMMSE_BUILD_AVX2) && defined(__x86_64__)
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
#else
    return false;
#endif
}

Isa active_isa() noexcept
{
    const int o = g_override.load(std::memory_order_relaxed);
    if (o >= 0) {
        return static_cast<Isa>(o);
    }
    static const Isa detected = (!env_forces_scalar() && avx2_available()) ? Isa::Avx2 : Isa::Scalar;
    return detected;
}

void set_isa_override(std::optional<Isa> isa)
{
    detail::require(!isa || *isa != Isa::Avx2 || avx2_available(), "AVX2 kernels are not available on this CPU");
    g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

void posterior(const PosteriorProblem& problem, const PosteriorBatch& batch)
{
    if (active_isa() == Isa::Avx2) {
        posterior_avx2(problem, batch);
    } else {
        posterior_scalar(problem, batch);
    }
}

}  // namespace immse::kernels
