#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "starprune/errors.hpp"

namespace starprune {

/// Spatial extent of a token grid: (rows, cols).
struct Extent2 {
    int rows = 0;
    int cols = 0;
    bool operator==(const Extent2&) const = default;
    long long count() const { return static_cast<long long>(rows) * cols; }
};

/// Token position within a grid, row-major.
struct Position {
    int row = 0;
    int col = 0;
    bool operator==(const Position&) const = default;
};

/// Dense channels-last float tensor of shape (rows, cols, channels).
/// Feature maps, token embeddings and synthetic targets all use this layout;
/// index = (r * cols + c) * channels + ch.
class Tensor {
public:
    Tensor() = default;
    Tensor(int rows, int cols, int channels, float fill = 0.0f)
        : rows_(rows), cols_(cols), channels_(channels),
          data_(static_cast<size_t>(rows) * cols * channels, fill) {
        if (rows < 1 || cols < 1 || channels < 1)
            throw std::invalid_argument("Tensor: all dims must be >= 1, got " + shape_str());
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int channels() const { return channels_; }
    Extent2 extent() const { return {rows_, cols_}; }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    float& at(int r, int c, int ch) { return data_[idx(r, c, ch)]; }
    float at(int r, int c, int ch) const { return data_[idx(r, c, ch)]; }

    float* data() { return data_.data(); }
    const float* data() const { return data_.data(); }
    std::vector<float>& storage() { return data_; }
    const std::vector<float>& storage() const { return data_; }

    /// Pointer to the channel vector at (r, c).
    float* pixel(int r, int c) { return data_.data() + idx(r, c, 0); }
    const float* pixel(int r, int c) const { return data_.data() + idx(r, c, 0); }

    bool same_shape(const Tensor& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && channels_ == o.channels_;
    }

    bool all_finite() const {
        for (float v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    std::string shape_str() const {
        return "(" + std::to_string(rows_) + "," + std::to_string(cols_) + "," +
               std::to_string(channels_) + ")";
    }

    bool operator==(const Tensor& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && channels_ == o.channels_ &&
               data_ == o.data_;
    }

private:
    size_t idx(int r, int c, int ch) const {
        return (static_cast<size_t>(r) * cols_ + c) * channels_ + ch;
    }

    int rows_ = 0;
    int cols_ = 0;
    int channels_ = 0;
    std::vector<float> data_;
};

/// Dense 2D float grid (rows, cols); similarity maps, fused scores,
/// attention maps and energy maps live here.
class Field {
public:
    Field() = default;
    Field(int rows, int cols, float fill = 0.0f)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("Field: dims must be >= 1");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Extent2 extent() const { return {rows_, cols_}; }
    size_t size() const { return data_.size(); }

    float& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    float at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }
    float& operator[](size_t i) { return data_[i]; }
    float operator[](size_t i) const { return data_[i]; }

    std::vector<float>& storage() { return data_; }
    const std::vector<float>& storage() const { return data_; }

    bool same_shape(const Field& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
    bool operator==(const Field& o) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<float> data_;
};

/// Binary keep/skip grid. 1 = keep (process), 0 = skip.
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int rows, int cols, uint8_t fill = 0)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("BinaryMask: dims must be >= 1");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Extent2 extent() const { return {rows_, cols_}; }
    size_t size() const { return data_.size(); }

    uint8_t& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    uint8_t at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }
    uint8_t& operator[](size_t i) { return data_[i]; }
    uint8_t operator[](size_t i) const { return data_[i]; }

    std::vector<uint8_t>& storage() { return data_; }
    const std::vector<uint8_t>& storage() const { return data_; }

    long long popcount() const {
        long long n = 0;
        for (uint8_t v : data_) n += (v != 0);
        return n;
    }

    bool same_shape(const BinaryMask& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
    bool operator==(const BinaryMask& o) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<uint8_t> data_;
};

inline void require_same_shape(const Tensor& a, const Tensor& b, const char* where) {
    if (!a.same_shape(b))
        throw ShapeError(std::string(where) + ": shape mismatch " + a.shape_str() + " vs " +
                         b.shape_str());
}

}  // namespace starprune
