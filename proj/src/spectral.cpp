#include "starprune/spectral.hpp"

#include <cmath>

#include "starprune/errors.hpp"

namespace starprune {

namespace {

bool is_pow2(int n) { return n >= 1 && (n & (n - 1)) == 0; }

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place iterative radix-2 transform of a length-n (power of two) line.
// sign = -1 forward, +1 inverse; the inverse applies 1/n.
void fft_line(std::complex<double>* x, int n, int sign) {
    for (int i = 1, j = 0; i < n; ++i) {  // bit-reversal permutation
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j |= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double angle = sign * 2.0 * M_PI / len;
        const std::complex<double> wl(std::cos(angle), std::sin(angle));
        for (int i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (int j = 0; j < len / 2; ++j) {
                const std::complex<double> u = x[i + j];
                const std::complex<double> v = x[i + j + len / 2] * w;
                x[i + j] = u + v;
                x[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (sign > 0) {
        const double inv = 1.0 / n;
        for (int i = 0; i < n; ++i) x[i] *= inv;
    }
}

void fft2_inplace(ComplexField& f, int sign) {
    std::vector<std::complex<double>> col(static_cast<size_t>(f.rows));
    for (int r = 0; r < f.rows; ++r) fft_line(f.data.data() + static_cast<size_t>(r) * f.cols, f.cols, sign);
    for (int c = 0; c < f.cols; ++c) {
        for (int r = 0; r < f.rows; ++r) col[static_cast<size_t>(r)] = f.at(r, c);
        fft_line(col.data(), f.rows, sign);
        for (int r = 0; r < f.rows; ++r) f.at(r, c) = col[static_cast<size_t>(r)];
    }
}

}  // namespace

ComplexField fft2(const Field& field) {
    if (!is_pow2(field.rows()) || !is_pow2(field.cols()))
        throw std::invalid_argument("fft2: dimensions must be powers of two (pad first), got " +
                                    std::to_string(field.rows()) + "x" +
                                    std::to_string(field.cols()));
    ComplexField out;
    out.rows = field.rows();
    out.cols = field.cols();
    out.data.resize(field.size());
    for (size_t i = 0; i < field.size(); ++i) out.data[i] = {static_cast<double>(field[i]), 0.0};
    fft2_inplace(out, -1);
    return out;
}

Field ifft2_real(const ComplexField& spectrum) {
    if (!is_pow2(spectrum.rows) || !is_pow2(spectrum.cols))
        throw std::invalid_argument("ifft2: dimensions must be powers of two");
    ComplexField tmp = spectrum;
    fft2_inplace(tmp, +1);
    Field out(spectrum.rows, spectrum.cols);
    for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<float>(tmp.data[i].real());
    return out;
}

Field pad_to_pow2(const Field& field) {
    const int pr = next_pow2(field.rows());
    const int pc = next_pow2(field.cols());
    if (pr == field.rows() && pc == field.cols())
        return field;
    Field out(pr, pc, 0.0f);
    for (int r = 0; r < field.rows(); ++r)
        for (int c = 0; c < field.cols(); ++c) out.at(r, c) = field.at(r, c);
    return out;
}

double bin_radius(int r, int c, int rows, int cols) {
    const double fr = (r <= rows / 2) ? static_cast<double>(r) / rows
                                      : static_cast<double>(r - rows) / rows;
    const double fc = (c <= cols / 2) ? static_cast<double>(c) / cols
                                      : static_cast<double>(c - cols) / cols;
    return std::sqrt(fr * fr + fc * fc);
}

std::vector<double> band_edges(int bands) {
    if (bands < 2)
        throw std::invalid_argument("band_edges: need at least 2 bands");
    const double top = 0.5 * std::sqrt(2.0);
    std::vector<double> edges(static_cast<size_t>(bands) + 1);
    for (int b = 0; b <= bands; ++b)
        edges[static_cast<size_t>(b)] = top * static_cast<double>(b) / bands;
    return edges;
}

std::vector<double> band_energy(const ComplexField& spectrum, int bands) {
    if (bands < 2)
        throw std::invalid_argument("band_energy: need at least 2 bands");
    const double top = 0.5 * std::sqrt(2.0);
    std::vector<double> energy(static_cast<size_t>(bands), 0.0);
    for (int r = 0; r < spectrum.rows; ++r) {
        for (int c = 0; c < spectrum.cols; ++c) {
            const double radius = bin_radius(r, c, spectrum.rows, spectrum.cols);
            int b = static_cast<int>(radius / top * bands);
            if (b >= bands) b = bands - 1;  // the Nyquist corner sits on the top edge
            energy[static_cast<size_t>(b)] += std::norm(spectrum.at(r, c));
        }
    }
    return energy;
}

double spatial_energy(const Field& field) {
    double e = 0.0;
    for (size_t i = 0; i < field.size(); ++i)
        e += static_cast<double>(field[i]) * field[i];
    return e;
}

Field channel_mean(const Tensor& t) {
    Field out(t.rows(), t.cols());
    const double inv = 1.0 / t.channels();
    for (int r = 0; r < t.rows(); ++r) {
        for (int c = 0; c < t.cols(); ++c) {
            const float* px = t.pixel(r, c);
            double acc = 0.0;
            for (int ch = 0; ch < t.channels(); ++ch) acc += px[ch];
            out.at(r, c) = static_cast<float>(acc * inv);
        }
    }
    return out;
}

SpectralReport scale_delta_spectrum(const std::vector<Tensor>& history, int bands) {
    if (history.size() < 2)
        throw std::invalid_argument("scale_delta_spectrum: need at least 2 snapshots");
    SpectralReport report;
    report.bands = bands;
    report.edges = band_edges(bands);
    report.padded = !is_pow2(history[0].rows()) || !is_pow2(history[0].cols());

    auto banded = [&](const Field& f) {
        return band_energy(fft2(report.padded ? pad_to_pow2(f) : f), bands);
    };

    for (size_t i = 0; i < history.size(); ++i) {
        if (!history[i].same_shape(history[0]))
            throw ShapeError("scale_delta_spectrum: snapshots must share one shape");
        report.snapshot_bands.push_back(banded(channel_mean(history[i])));
        if (i == 0)
            continue;
        Field delta = channel_mean(history[i]);
        const Field prev = channel_mean(history[i - 1]);
        for (size_t j = 0; j < delta.size(); ++j) delta[j] -= prev[j];
        report.delta_bands.push_back(banded(delta));
    }
    return report;
}

Field highfreq_energy_map(const Tensor& feature, double cutoff) {
    const double top = 0.5 * std::sqrt(2.0);
    if (!(cutoff > 0.0 && cutoff < top))
        throw std::invalid_argument("highfreq_energy_map: cutoff must be in (0, 0.5*sqrt(2))");

    const bool padded = !is_pow2(feature.rows()) || !is_pow2(feature.cols());
    Field out(feature.rows(), feature.cols(), 0.0f);
    for (int ch = 0; ch < feature.channels(); ++ch) {
        Field plane(feature.rows(), feature.cols());
        for (int r = 0; r < feature.rows(); ++r)
            for (int c = 0; c < feature.cols(); ++c) plane.at(r, c) = feature.at(r, c, ch);
        ComplexField spec = fft2(padded ? pad_to_pow2(plane) : plane);
        for (int r = 0; r < spec.rows; ++r)
            for (int c = 0; c < spec.cols; ++c)
                if (bin_radius(r, c, spec.rows, spec.cols) < cutoff) spec.at(r, c) = 0.0;
        Field high = ifft2_real(spec);
        for (int r = 0; r < feature.rows(); ++r)
            for (int c = 0; c < feature.cols(); ++c)
                out.at(r, c) += high.at(r, c) * high.at(r, c);
    }
    const float inv = 1.0f / feature.channels();
    for (size_t i = 0; i < out.size(); ++i) out[i] *= inv;
    return out;
}

}  // namespace starprune
