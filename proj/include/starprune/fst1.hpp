#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "starprune/tensor.hpp"

namespace starprune {

/// "FST1" tensor exchange format:
///   4-byte magic "FST1"
///   u8 dtype      (0 = f32 little-endian, 1 = u8)
///   u8 ndim
///   ndim x u32 LE dims
///   row-major payload
/// Golden files, CLI inputs and outputs all use this container.
struct Fst1Data {
    uint8_t dtype = 0;  // 0 = f32, 1 = u8
    std::vector<uint32_t> dims;
    std::vector<float> f32;    // populated when dtype == 0
    std::vector<uint8_t> u8;   // populated when dtype == 1

    size_t element_count() const {
        size_t n = 1;
        for (uint32_t d : dims) n *= d;
        return n;
    }
};

void fst1_save(const std::string& path, const Fst1Data& data);
Fst1Data fst1_load(const std::string& path);

// Typed convenience wrappers.
void fst1_save_tensor(const std::string& path, const Tensor& t);    // ndim 3: (h, w, C)
void fst1_save_field(const std::string& path, const Field& f);      // ndim 2, f32
void fst1_save_mask(const std::string& path, const BinaryMask& m);  // ndim 2, u8
Tensor fst1_load_tensor(const std::string& path);
Field fst1_load_field(const std::string& path);
BinaryMask fst1_load_mask(const std::string& path);

}  // namespace starprune
