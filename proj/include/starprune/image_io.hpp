#pragma once

#include <string>

#include "starprune/tensor.hpp"

namespace starprune {

/// Binary PGM (P5, maxval 255) heatmap of a field. Values are linearly
/// mapped from [min, max] to [0, 255]; a constant field renders as black.
void write_pgm(const std::string& path, const Field& field);

/// Binary PGM of a keep mask: kept positions white (255), skipped black.
void write_pgm(const std::string& path, const BinaryMask& mask);

}  // namespace starprune
