#include "domepilot/simd/distance.hpp"

#include "domepilot/errors.hpp"

#include <cstdlib>
#include <string>

namespace domepilot::simd {

std::string_view to_string(Level level) noexcept {
    switch (level) {
    case Level::avx2: return "avx2";
    case Level::neon: return "neon";
    case Level::scalar: break;
    }
    return "scalar";
}

bool is_supported(Level level) noexcept {
    switch (level) {
    case Level::scalar: return true;
    case Level::avx2:
#if defined(DOMEPILOT_HAVE_AVX2)
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    case Level::neon:
#if defined(DOMEPILOT_HAVE_NEON)
        return true; // Advanced SIMD is mandatory on AArch64
#else
        return false;
#endif
    }
    return false;
}

Level detected_level() noexcept {
    if (is_supported(Level::avx2)) return Level::avx2;
    if (is_supported(Level::neon)) return Level::neon;
    return Level::scalar;
}

Level active_level() noexcept {
    static const Level level = [] {
        const char* env = std::getenv("DOMEPILOT_SIMD");
        if (env == nullptr) return detected_level();
        const std::string_view want(env);
        for (Level l : {Level::scalar, Level::avx2, Level::neon}) {
            if (want == to_string(l) && is_supported(l)) return l;
        }
        return detected_level();
    }();
    return level;
}

DistanceKernel kernel_for(Level level) noexcept {
    if (!is_supported(level)) return &scalar::squared_distances;
    switch (level) {
#if defined(DOMEPILOT_HAVE_AVX2)
    case Level::avx2: return &avx2::squared_distances;
#endif
#if defined(DOMEPILOT_HAVE_NEON)
    case Level::neon: return &neon::squared_distances;
#endif
    default: return &scalar::squared_distances;
    }
}

void squared_distances(const ColumnView& data, const Features& query, std::span<double> out, Level level) {
    if (out.size() < data.rows) throw InvalidArgument("squared_distances: output buffer too small");
    kernel_for(level)(data, query, out.data());
}

} // namespace domepilot::simd
