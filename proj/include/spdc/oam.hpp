#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "spdc/config.hpp"
#include "spdc/grid.hpp"

namespace spdc {

/// Polar sampling of transverse-wavevector space for the spiral-harmonic
/// decomposition. The angular count must satisfy
/// angular_samples >= 8 * (m_max + 1) to resolve the highest harmonic.
struct PolarGrid {
    int radial_samples = 241;
    double radial_max = 0.0; // rad/um; use default_momentum_halfwidth
    int angular_samples = 360;

    void validate(int m_max) const;
    double radial_spacing() const { return radial_max / (radial_samples - 1); }
};

using FieldFn = std::function<std::complex<double>(double px, double py)>;

/// Angular Fourier coefficients a_m(rho) of a transverse field,
///   a_m(rho) = (2 pi)^(-1/2) * Integral dphi f(rho, phi) exp(-i m phi),
/// with the angular integral done by the uniform periodic rectangle rule.
/// total_power is the polar quadrature of |f|^2 (radial weight rho applied
/// exactly on each linear interval).
struct SpiralCoefficients {
    int m_max = 0;
    PolarGrid grid;
    std::vector<std::complex<double>> a; // (2*m_max+1) x radial_samples, row-major in m
    double total_power = 0.0;

    std::complex<double> at(int m, int radial_index) const {
        return a[static_cast<size_t>(m + m_max) * grid.radial_samples + radial_index];
    }
};

SpiralCoefficients spiral_decompose(const PolarGrid& grid, int m_max, const FieldFn& field);

/// Decomposition of the heralded signal mode Phi(p, q=0).
SpiralCoefficients spiral_coefficients(const BiphotonConfig& cfg, const PolarGrid& grid, int m_max);

/// Normalized orbital-angular-momentum weights C_m over m in [-m_max, m_max].
/// Weights sum to 1 - truncation_mass, where truncation_mass is the power
/// carried by harmonics outside the window (nonnegative up to rounding).
struct SpiralSpectrum {
    int m_max = 0;
    std::vector<double> weights; // index m + m_max
    double truncation_mass = 0.0;

    double weight(int m) const { return weights[static_cast<size_t>(m + m_max)]; }
    /// A decomposition window judged wide enough for the mode.
    bool converged() const { return truncation_mass < 1.0e-3; }
};

SpiralSpectrum oam_weights(const SpiralCoefficients& coeffs);

/// One spectrum per azimuth value, computed on a shared polar grid.
std::vector<SpiralSpectrum> oam_azimuth_sweep(const BiphotonConfig& base,
                                              std::span<const double> azimuths_rad,
                                              const PolarGrid& grid, int m_max,
                                              int threads = 1);

} // namespace spdc
