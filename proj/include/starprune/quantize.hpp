#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "starprune/tensor.hpp"

namespace starprune {

/// Fixed embedding table defining the discrete residual code space.
/// Entry 0 is always the all-zero vector, so a skipped (zero-filled)
/// residual position has an exact representative.
struct Codebook {
    int size = 0;      // V >= 2
    int channels = 0;  // C
    std::vector<float> entries;  // (V, C) row-major

    const float* row(int i) const { return entries.data() + static_cast<size_t>(i) * channels; }

    void validate() const;
};

/// Discrete residual code grid at a scale's native resolution, with the
/// optional embedded lookup kept alongside.
struct TokenMap {
    int scale_index = 0;
    int rows = 0;
    int cols = 0;
    std::vector<int32_t> codes;       // (rows * cols), row-major
    std::optional<Tensor> embedded;   // (rows, cols, C) codebook lookup
};

/// Seeded codebook: entry 0 zeroed, the rest uniform in [-spread, spread].
Codebook build_codebook(uint64_t seed, int size, int channels, float spread);

/// Nearest-neighbor assignment by squared Euclidean distance, ties to the
/// lowest index. The returned map carries the embedded lookup.
TokenMap quantize(const Tensor& residual, const Codebook& codebook, int scale_index = 0);

/// Quantizes a packed (m, C) row set; writes code indices and overwrites the
/// rows with their codebook embeddings in place.
void quantize_rows(float* rows, int m, const Codebook& codebook, int32_t* codes_out);

/// Codebook lookup of an existing code grid.
Tensor dequantize(const TokenMap& tokens, const Codebook& codebook);

}  // namespace starprune
