#pragma once

// Batched squared-Euclidean distance kernels used by the k-NN scan.
//
// Training points are stored column-major, one contiguous array per feature.
// All variants accumulate features in the same order with separate multiply
// and add and produce bit-identical results.

#include "domepilot/weather_data.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace domepilot::simd {

enum class Level { scalar, avx2, neon };

std::string_view to_string(Level level) noexcept;

// Best level the running CPU supports among those compiled in.
Level detected_level() noexcept;

// detected_level(), unless DOMEPILOT_SIMD=scalar|avx2|neon requests a
// lower supported level. Evaluated once per process.
Level active_level() noexcept;

bool is_supported(Level level) noexcept;

struct ColumnView {
    std::array<const double*, kFeatureCount> columns{};
    std::size_t rows = 0;
};

// out[i] = sum_f (columns[f][i] - query[f])^2 for i < rows.
// `out` must hold at least `rows` values.
using DistanceKernel = void (*)(const ColumnView& data, const Features& query, double* out);

namespace scalar {
void squared_distances(const ColumnView& data, const Features& query, double* out);
}
#if defined(DOMEPILOT_HAVE_AVX2)
namespace avx2 {
void squared_distances(const ColumnView& data, const Features& query, double* out);
}
#endif
#if defined(DOMEPILOT_HAVE_NEON)
namespace neon {
void squared_distances(const ColumnView& data, const Features& query, double* out);
}
#endif

// Kernel for a level; falls back to scalar when the level is not available.
DistanceKernel kernel_for(Level level) noexcept;

void squared_distances(const ColumnView& data, const Features& query, std::span<double> out,
                       Level level = active_level());

} // namespace domepilot::simd
