#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "spdc/config.hpp"
#include "spdc/grid.hpp"
#include "spdc/schmidt.hpp"

namespace spdc {

/// Two-crystal polarization-entangled source: identical crystals with
/// optic axes rotated by 90 degrees. Photons born in the first crystal
/// acquire a transverse walk-off phase while traversing the second;
/// signal_walkoff_rad / idler_walkoff_rad are those walk-off angles. They
/// default to the pump walk-off angle and are freely configurable.
struct TwoCrystalConfig {
    BiphotonConfig base; // azimuth is overridden per crystal (0 and 90 deg)
    double signal_walkoff_rad = 0.0;
    double idler_walkoff_rad = 0.0;

    static TwoCrystalConfig from(const BiphotonConfig& base);
    void validate() const;
};

/// Unit-power kernels of the two crystals under the shared quadrature:
///   first  : Phi(alpha = 0) * exp(i [py tan(rho_s) + qy tan(rho_i)] L)
///   second : Phi(alpha = 90 deg)
struct CrystalModePair {
    KernelMatrix first;
    KernelMatrix second;
};

CrystalModePair crystal_modes(const TwoCrystalConfig& cfg, const MomentumGrid& grid,
                              int threads = 1, size_t max_flat_dim = 2500);

/// Spatial overlap xi = Integral dp dq Phi1 conj(Phi2) of two unit-power
/// kernels on the same grid. |xi| <= 1 by Cauchy-Schwarz. Throws on
/// mismatched grids.
std::complex<double> overlap_xi(const KernelMatrix& first, const KernelMatrix& second);

/// Polarization density matrix in the basis {HH, HV, VH, VV} after the
/// spatial variables are traced out: an equal HH/VV mixture with xi on
/// the coherence. Eigenvalues are {(1 +- |xi|)/2, 0, 0}; the purity is
/// (1 + |xi|^2)/2 and the concurrence |xi|.
struct PolarizationState {
    std::complex<double> xi;
    double purity;
    double concurrence;
    std::array<std::complex<double>, 16> rho_p; // row-major 4x4

    std::complex<double> rho(int row, int col) const { return rho_p[static_cast<size_t>(row) * 4 + col]; }
};

/// Throws when |xi| exceeds 1 beyond 1e-9.
PolarizationState polarization_state(std::complex<double> xi);

struct ConcurrenceSweepPoint {
    double param;
    double xi_abs;
    double purity;
    double concurrence;
};

/// Overlap, purity and concurrence as one parameter varies.
std::vector<ConcurrenceSweepPoint> concurrence_sweep(const TwoCrystalConfig& base, SweepParameter param,
                                                     std::span<const double> values,
                                                     const SweepGridPolicy& grid_policy, int threads = 1);

/// Schmidt number of the first crystal's pairs with and without the
/// walk-off phase picked up in the second crystal. The phase factor is
/// diagonal and unimodular, so the two must agree (the spatial
/// correlations still change: the overlap between the two kernels is
/// below one whenever the phase is nontrivial).
struct MarginalSchmidtCheck {
    double with_walkoff_phase;
    double without_walkoff_phase;
};

MarginalSchmidtCheck marginal_schmidt_check(const TwoCrystalConfig& cfg, const MomentumGrid& grid,
                                            int threads = 1);

} // namespace spdc
