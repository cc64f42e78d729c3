#include "spdc/oam.hpp"

#include <cmath>
#include <stdexcept>

#include "spdc/mode_function.hpp"
#include "spdc/parallel.hpp"

namespace spdc {

namespace {

// Weights for Integral rho f(rho) drho with f linear on each interval;
// the rho factor is integrated exactly.
std::vector<double> radial_weights(const std::vector<double>& rho) {
    std::vector<double> w(rho.size(), 0.0);
    for (size_t j = 0; j + 1 < rho.size(); ++j) {
        const double d = rho[j + 1] - rho[j];
        w[j] += d * (2.0 * rho[j] + rho[j + 1]) / 6.0;
        w[j + 1] += d * (rho[j] + 2.0 * rho[j + 1]) / 6.0;
    }
    return w;
}

} // namespace

void PolarGrid::validate(int m_max) const {
    if (m_max < 0) throw std::invalid_argument("spiral decomposition: m_max must be >= 0");
    if (radial_samples < 2) throw std::invalid_argument("polar grid: radial_samples must be >= 2");
    if (!(radial_max > 0.0)) throw std::invalid_argument("polar grid: radial_max must be > 0");
    if (angular_samples < 8 * (m_max + 1))
        throw std::invalid_argument("polar grid: angular_samples must be >= 8*(m_max+1)");
}

SpiralCoefficients spiral_decompose(const PolarGrid& grid, int m_max, const FieldFn& field) {
    grid.validate(m_max);
    const int nr = grid.radial_samples;
    const int na = grid.angular_samples;
    const double dphi = 2.0 * std::numbers::pi / na;
    const double inv_sqrt_two_pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

    std::vector<double> rho(static_cast<size_t>(nr));
    for (int j = 0; j < nr; ++j) rho[static_cast<size_t>(j)] = grid.radial_max * j / (nr - 1);
    std::vector<double> cos_phi(static_cast<size_t>(na)), sin_phi(static_cast<size_t>(na));
    for (int k = 0; k < na; ++k) {
        cos_phi[static_cast<size_t>(k)] = std::cos(dphi * k);
        sin_phi[static_cast<size_t>(k)] = std::sin(dphi * k);
    }

    SpiralCoefficients out;
    out.m_max = m_max;
    out.grid = grid;
    out.a.assign(static_cast<size_t>(2 * m_max + 1) * nr, {});

    const auto wrad = radial_weights(rho);
    std::vector<std::complex<double>> ring(static_cast<size_t>(na));
    double power = 0.0;
    for (int j = 0; j < nr; ++j) {
        double ring_power = 0.0;
        for (int k = 0; k < na; ++k) {
            ring[static_cast<size_t>(k)] = field(rho[j] * cos_phi[k], rho[j] * sin_phi[k]);
            ring_power += std::norm(ring[static_cast<size_t>(k)]);
        }
        power += wrad[static_cast<size_t>(j)] * ring_power * dphi;

        // a_m(rho_j): uniform periodic rectangle rule, spectrally accurate.
        for (int m = -m_max; m <= m_max; ++m) {
            std::complex<double> acc{};
            for (int k = 0; k < na; ++k) {
                // exp(-i m phi_k) built from the tabulated single-angle values
                const double ang = -dphi * static_cast<double>(m) * k;
                acc += ring[static_cast<size_t>(k)] * std::polar(1.0, ang);
            }
            out.a[static_cast<size_t>(m + m_max) * nr + j] = acc * dphi * inv_sqrt_two_pi;
        }
    }
    out.total_power = power;
    return out;
}

SpiralCoefficients spiral_coefficients(const BiphotonConfig& cfg, const PolarGrid& grid, int m_max) {
    const ModeFunction mode(cfg);
    return spiral_decompose(grid, m_max,
                            [&mode](double px, double py) { return mode(px, py, 0.0, 0.0); });
}

SpiralSpectrum oam_weights(const SpiralCoefficients& coeffs) {
    if (!(coeffs.total_power > 0.0))
        throw std::invalid_argument("oam weights: field has zero power on the polar grid");
    const int nr = coeffs.grid.radial_samples;
    std::vector<double> rho(static_cast<size_t>(nr));
    for (int j = 0; j < nr; ++j) rho[static_cast<size_t>(j)] = coeffs.grid.radial_max * j / (nr - 1);
    const auto wrad = radial_weights(rho);

    SpiralSpectrum out;
    out.m_max = coeffs.m_max;
    out.weights.assign(static_cast<size_t>(2 * coeffs.m_max + 1), 0.0);
    double captured = 0.0;
    for (int m = -coeffs.m_max; m <= coeffs.m_max; ++m) {
        double cm = 0.0;
        for (int j = 0; j < nr; ++j)
            cm += wrad[static_cast<size_t>(j)] * std::norm(coeffs.at(m, j));
        cm /= coeffs.total_power;
        out.weights[static_cast<size_t>(m + coeffs.m_max)] = cm;
        captured += cm;
    }
    out.truncation_mass = 1.0 - captured;
    return out;
}

std::vector<SpiralSpectrum> oam_azimuth_sweep(const BiphotonConfig& base,
                                              std::span<const double> azimuths_rad,
                                              const PolarGrid& grid, int m_max, int threads) {
    grid.validate(m_max);
    std::vector<SpiralSpectrum> out(azimuths_rad.size());
    parallel_for(static_cast<int>(azimuths_rad.size()), threads, [&](int i) {
        BiphotonConfig cfg = base;
        cfg.crystal.azimuth_rad = wrap_two_pi(azimuths_rad[static_cast<size_t>(i)]);
        out[static_cast<size_t>(i)] = oam_weights(spiral_coefficients(cfg, grid, m_max));
    });
    return out;
}

} // namespace spdc
