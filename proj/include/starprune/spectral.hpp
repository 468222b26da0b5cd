#pragma once

#include <complex>
#include <vector>

#include "starprune/tensor.hpp"

namespace starprune {

/// Dense complex frequency grid produced by fft2.
struct ComplexField {
    int rows = 0;
    int cols = 0;
    std::vector<std::complex<double>> data;

    std::complex<double>& at(int r, int c) {
        return data[static_cast<size_t>(r) * cols + c];
    }
    const std::complex<double>& at(int r, int c) const {
        return data[static_cast<size_t>(r) * cols + c];
    }
};

/// Unnormalized forward 2D DFT (radix-2; both axes must be powers of two —
/// pad first otherwise).
ComplexField fft2(const Field& field);

/// Inverse 2D DFT with the 1/(h*w) normalization; returns the real part.
Field ifft2_real(const ComplexField& spectrum);

/// Zero-pads a field up to the next power of two per axis (identity when
/// both already are).
Field pad_to_pow2(const Field& field);

/// Signed normalized frequency radius of spectrum bin (r, c): component u/n
/// for u <= n/2, (u-n)/n above, radius in [0, 0.5*sqrt(2)].
double bin_radius(int r, int c, int rows, int cols);

/// B+1 equal-width radial band edges over [0, 0.5*sqrt(2)].
std::vector<double> band_edges(int bands);

/// Total |X|^2 per radial band; DC falls in band 0, the Nyquist corner in
/// band B-1. The band sum equals the total spectrum energy.
std::vector<double> band_energy(const ComplexField& spectrum, int bands);

/// Sum of |x|^2 over a spatial field (Parseval's counterpart is
/// band-energy total / (h*w)).
double spatial_energy(const Field& field);

/// Band-energy trajectories of a snapshot sequence: per consecutive pair,
/// the spectrum of the channel-mean difference; per snapshot, the spectrum
/// of the channel-mean field itself. Snapshots smaller than a power of two
/// are zero-padded (flagged in `padded`).
struct SpectralReport {
    int bands = 0;
    std::vector<double> edges;
    std::vector<std::vector<double>> delta_bands;     // (snapshots-1, bands)
    std::vector<std::vector<double>> snapshot_bands;  // (snapshots, bands)
    bool padded = false;
};

SpectralReport scale_delta_spectrum(const std::vector<Tensor>& history, int bands);

/// Per-position squared magnitude of the field rebuilt from coefficients at
/// or above the cutoff radius only, averaged over channels. cutoff must lie
/// in (0, 0.5*sqrt(2)).
Field highfreq_energy_map(const Tensor& feature, double cutoff);

/// Channel-mean reduction (h, w, C) -> (h, w).
Field channel_mean(const Tensor& t);

}  // namespace starprune
