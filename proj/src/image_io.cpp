#include "starprune/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "starprune/errors.hpp"

namespace starprune {

namespace {

void write_p5(const std::string& path, int rows, int cols, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("pgm: cannot write '" + path + "'");
    out << "P5\n" << cols << " " << rows << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

void write_pgm(const std::string& path, const Field& field) {
    float lo = field[0], hi = field[0];
    for (size_t i = 0; i < field.size(); ++i) {
        lo = std::min(lo, field[i]);
        hi = std::max(hi, field[i]);
    }
    const float span = hi - lo;
    std::vector<uint8_t> bytes(field.size(), 0);
    if (span > 0.0f)
        for (size_t i = 0; i < field.size(); ++i)
            bytes[i] = static_cast<uint8_t>(
                std::lround(std::clamp((field[i] - lo) / span, 0.0f, 1.0f) * 255.0f));
    write_p5(path, field.rows(), field.cols(), bytes);
}

void write_pgm(const std::string& path, const BinaryMask& mask) {
    std::vector<uint8_t> bytes(mask.size());
    for (size_t i = 0; i < mask.size(); ++i) bytes[i] = mask[i] ? 255 : 0;
    write_p5(path, mask.rows(), mask.cols(), bytes);
}

}  // namespace starprune
