#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "spdc/config.hpp"
#include "spdc/grid.hpp"

namespace spdc {

/// Discretized biphoton kernel: a dense (n^2 x n^2) matrix indexing the
/// flattened signal wavevector against the flattened idler wavevector,
/// with square-root quadrature weights folded symmetrically into both
/// sides so singular values approximate the continuous Schmidt
/// coefficients. Flattening is row-major: flat = iy * n + ix places the
/// point at (axis[ix], axis[iy]).
struct KernelMatrix {
    int samples_per_axis = 0;
    MomentumGrid grid;
    double cell_weight = 0.0; // interior quadrature cell, spacing^2
    std::vector<std::complex<double>> a;

    size_t dim() const { return static_cast<size_t>(samples_per_axis) * samples_per_axis; }
    std::complex<double>& at(size_t row, size_t col) { return a[row * dim() + col]; }
    const std::complex<double>& at(size_t row, size_t col) const { return a[row * dim() + col]; }
};

/// Assemble the kernel on `grid`. Rejects flattened dimensions above
/// max_flat_dim (memory guard; the default admits n = 49).
KernelMatrix build_kernel(const BiphotonConfig& cfg, const MomentumGrid& grid, int threads = 1,
                          size_t max_flat_dim = 2500);

/// Singular values in descending order (LAPACK zgesdd). Throws if the
/// decomposition does not converge.
std::vector<double> singular_values(const KernelMatrix& kernel);

/// Normalized Schmidt spectrum and Schmidt number K = 1 / sum(lambda^2).
/// Modes with lambda < 1e-12 are discarded after normalization.
struct SchmidtSpectrum {
    std::vector<double> lambdas; // descending, sum 1
    double schmidt_number = 1.0;
};

SchmidtSpectrum schmidt_spectrum(const KernelMatrix& kernel);

/// Leading Schmidt-mode intensities |u_k(p)|^2 of the signal photon,
/// one n x n raster per mode (row-major in iy like DiscretizedMode).
struct SchmidtModes {
    int samples_per_axis = 0;
    std::vector<double> lambdas;
    std::vector<std::vector<double>> intensities;
};

SchmidtModes schmidt_modes(const KernelMatrix& kernel, int count);

using JointFieldFn = std::function<std::complex<double>(double px, double py, double qx, double qy)>;

/// Purity Tr(rho_s^2) of the heralded signal state by direct quadrature,
///   sum over p, p' of w_p w_p' | sum_q w_q f(p,q) conj(f(p',q)) |^2
/// over the squared total power. Independent of the SVD code path; used
/// to cross-validate schmidt_spectrum on small grids.
double purity_from_field(const JointFieldFn& field, const MomentumGrid& grid);

/// purity_from_field applied to the mode function. Restricted to small
/// grids (n <= 17): this is the brute-force check, not the production path.
double purity_oracle(const BiphotonConfig& cfg, const MomentumGrid& grid);

struct SchmidtSweepPoint {
    double param;
    double schmidt_number;
};

/// Kernel-grid policy for sweeps: a fixed number of samples per axis,
/// with the half-width either pinned or re-derived from the decay rule at
/// every sweep point (a swept parameter moves the decay scales).
struct SweepGridPolicy {
    int samples_per_axis = 33;
    std::optional<double> fixed_halfwidth;

    MomentumGrid resolve(const BiphotonConfig& cfg) const {
        return {fixed_halfwidth.value_or(default_momentum_halfwidth(cfg)), samples_per_axis};
    }
};

/// Schmidt number as one parameter varies.
std::vector<SchmidtSweepPoint> schmidt_sweep(const BiphotonConfig& base, SweepParameter param,
                                             std::span<const double> values,
                                             const SweepGridPolicy& grid_policy, int threads = 1);

} // namespace spdc
