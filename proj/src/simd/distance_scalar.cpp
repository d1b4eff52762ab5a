#include "domepilot/simd/distance.hpp"

namespace domepilot::simd::scalar {

void squared_distances(const ColumnView& data, const Features& query, double* out) {
    for (std::size_t i = 0; i < data.rows; ++i) {
        double acc = 0.0;
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            const double d = data.columns[f][i] - query[f];
            acc += d * d;
        }
        out[i] = acc;
    }
}

} // namespace domepilot::simd::scalar
