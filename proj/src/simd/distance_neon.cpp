#include "domepilot/simd/distance.hpp"

#include <arm_neon.h>

namespace domepilot::simd::neon {

void squared_distances(const ColumnView& data, const Features& query, double* out) {
    float64x2_t q[kFeatureCount];
    for (std::size_t f = 0; f < kFeatureCount; ++f) q[f] = vdupq_n_f64(query[f]);

    std::size_t i = 0;
    for (; i + 2 <= data.rows; i += 2) {
        float64x2_t acc = vdupq_n_f64(0.0);
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            const float64x2_t d = vsubq_f64(vld1q_f64(data.columns[f] + i), q[f]);
            acc = vaddq_f64(acc, vmulq_f64(d, d));
        }
        vst1q_f64(out + i, acc);
    }
    for (; i < data.rows; ++i) {
        double acc = 0.0;
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            const double d = data.columns[f][i] - query[f];
            acc += d * d;
        }
        out[i] = acc;
    }
}

} // namespace domepilot::simd::neon
