// Built with -mavx2, without -mfma.

#include "domepilot/simd/distance.hpp"

#include <immintrin.h>

namespace domepilot::simd::avx2 {

void squared_distances(const ColumnView& data, const Features& query, double* out) {
    __m256d q[kFeatureCount];
    for (std::size_t f = 0; f < kFeatureCount; ++f) q[f] = _mm256_set1_pd(query[f]);

    std::size_t i = 0;
    for (; i + 4 <= data.rows; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(data.columns[f] + i), q[f]);
            acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
        }
        _mm256_storeu_pd(out + i, acc);
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

} // namespace domepilot::simd::avx2
