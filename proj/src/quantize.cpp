#include "starprune/quantize.hpp"

#include <cmath>

#include "starprune/rng.hpp"

namespace starprune {

void Codebook::validate() const {
    if (size < 2)
        throw std::invalid_argument("codebook: size must be >= 2");
    if (channels < 1)
        throw std::invalid_argument("codebook: channels must be >= 1");
    if (entries.size() != static_cast<size_t>(size) * channels)
        throw std::invalid_argument("codebook: entries size mismatch");
    for (int c = 0; c < channels; ++c)
        if (entries[c] != 0.0f)
            throw std::invalid_argument("codebook: entry 0 must be the zero vector");
    for (float v : entries)
        if (!std::isfinite(v))
            throw std::invalid_argument("codebook: entries must be finite");
}

Codebook build_codebook(uint64_t seed, int size, int channels, float spread) {
    if (size < 2)
        throw std::invalid_argument("build_codebook: size must be >= 2");
    if (channels < 1)
        throw std::invalid_argument("build_codebook: channels must be >= 1");
    Codebook cb;
    cb.size = size;
    cb.channels = channels;
    cb.entries.assign(static_cast<size_t>(size) * channels, 0.0f);
    SplitMix64 rng(seed);
    for (int i = 1; i < size; ++i)
        for (int c = 0; c < channels; ++c)
            cb.entries[static_cast<size_t>(i) * channels + c] = rng.uniform(-spread, spread);
    return cb;
}

namespace {

int nearest_code(const float* v, const Codebook& cb) {
    int best = 0;
    float best_d = 0.0f;
    for (int i = 0; i < cb.size; ++i) {
        const float* e = cb.row(i);
        float d = 0.0f;
        for (int c = 0; c < cb.channels; ++c) {
            const float diff = v[c] - e[c];
            d += diff * diff;
        }
        if (i == 0 || d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

}  // namespace

TokenMap quantize(const Tensor& residual, const Codebook& codebook, int scale_index) {
    codebook.validate();
    if (residual.channels() != codebook.channels)
        throw ShapeError("quantize: channel mismatch, residual " + residual.shape_str() +
                         " vs codebook C=" + std::to_string(codebook.channels));

    TokenMap tm;
    tm.scale_index = scale_index;
    tm.rows = residual.rows();
    tm.cols = residual.cols();
    tm.codes.resize(static_cast<size_t>(tm.rows) * tm.cols);
    Tensor emb(tm.rows, tm.cols, codebook.channels);
    size_t p = 0;
    for (int r = 0; r < tm.rows; ++r) {
        for (int c = 0; c < tm.cols; ++c, ++p) {
            const int code = nearest_code(residual.pixel(r, c), codebook);
            tm.codes[p] = code;
            const float* e = codebook.row(code);
            float* out = emb.pixel(r, c);
            for (int ch = 0; ch < codebook.channels; ++ch) out[ch] = e[ch];
        }
    }
    tm.embedded = std::move(emb);
    return tm;
}

void quantize_rows(float* rows, int m, const Codebook& codebook, int32_t* codes_out) {
    const int C = codebook.channels;
    for (int i = 0; i < m; ++i) {
        float* v = rows + static_cast<size_t>(i) * C;
        const int code = nearest_code(v, codebook);
        codes_out[i] = code;
        const float* e = codebook.row(code);
        for (int c = 0; c < C; ++c) v[c] = e[c];
    }
}

Tensor dequantize(const TokenMap& tokens, const Codebook& codebook) {
    Tensor emb(tokens.rows, tokens.cols, codebook.channels);
    size_t p = 0;
    for (int r = 0; r < tokens.rows; ++r) {
        for (int c = 0; c < tokens.cols; ++c, ++p) {
            const int32_t code = tokens.codes[p];
            if (code < 0 || code >= codebook.size)
                throw std::invalid_argument("dequantize: code index out of range");
            const float* e = codebook.row(code);
            float* out = emb.pixel(r, c);
            for (int ch = 0; ch < codebook.channels; ++ch) out[ch] = e[ch];
        }
    }
    return emb;
}

}  // namespace starprune
