#include "spdc/polarization.hpp"

#include <cmath>
#include <stdexcept>

#include "spdc/mode_function.hpp"

namespace spdc {

namespace {

void normalize_unit_power(KernelMatrix& kernel) {
    double power = 0.0;
    for (const auto& z : kernel.a) power += std::norm(z);
    if (!(power > 0.0)) throw std::runtime_error("crystal mode has zero power on this grid");
    const double scale = 1.0 / std::sqrt(power);
    for (auto& z : kernel.a) z *= scale;
}

// Walk-off displacement phase picked up in the second crystal,
// exp(i [py tan(rho_s) + qy tan(rho_i)] L), applied in place.
void apply_walkoff_phase(KernelMatrix& kernel, double signal_walkoff_rad, double idler_walkoff_rad,
                         double length_um) {
    const int n = kernel.samples_per_axis;
    const size_t dim = kernel.dim();
    const auto axis = kernel.grid.axis();
    const double ts = std::tan(signal_walkoff_rad) * length_um;
    const double ti = std::tan(idler_walkoff_rad) * length_um;
    if (ts == 0.0 && ti == 0.0) return;
    for (size_t row = 0; row < dim; ++row) {
        const double py = axis[row / static_cast<size_t>(n)];
        for (size_t col = 0; col < dim; ++col) {
            const double qy = axis[col / static_cast<size_t>(n)];
            kernel.a[row * dim + col] *= std::polar(1.0, py * ts + qy * ti);
        }
    }
}

} // namespace

TwoCrystalConfig TwoCrystalConfig::from(const BiphotonConfig& base) {
    return {base, base.crystal.walkoff_rad, base.crystal.walkoff_rad};
}

void TwoCrystalConfig::validate() const {
    base.validate();
    if (signal_walkoff_rad < 0.0 || idler_walkoff_rad < 0.0)
        throw std::invalid_argument("two-crystal config: walk-off angles must be >= 0");
}

CrystalModePair crystal_modes(const TwoCrystalConfig& cfg, const MomentumGrid& grid, int threads,
                              size_t max_flat_dim) {
    cfg.validate();
    BiphotonConfig first_cfg = cfg.base;
    first_cfg.crystal.azimuth_rad = 0.0;
    BiphotonConfig second_cfg = cfg.base;
    second_cfg.crystal.azimuth_rad = 0.5 * std::numbers::pi;

    CrystalModePair pair{build_kernel(first_cfg, grid, threads, max_flat_dim),
                         build_kernel(second_cfg, grid, threads, max_flat_dim)};
    apply_walkoff_phase(pair.first, cfg.signal_walkoff_rad, cfg.idler_walkoff_rad,
                        cfg.base.crystal.length_um());
    normalize_unit_power(pair.first);
    normalize_unit_power(pair.second);
    return pair;
}

std::complex<double> overlap_xi(const KernelMatrix& first, const KernelMatrix& second) {
    if (first.samples_per_axis != second.samples_per_axis ||
        first.grid.half_width != second.grid.half_width)
        throw std::invalid_argument("overlap: kernels live on different grids");
    std::complex<double> xi{};
    for (size_t i = 0; i < first.a.size(); ++i) xi += first.a[i] * std::conj(second.a[i]);
    return xi;
}

PolarizationState polarization_state(std::complex<double> xi) {
    const double c = std::abs(xi);
    if (c > 1.0 + 1.0e-9)
        throw std::invalid_argument("polarization state: |xi| exceeds 1");

    PolarizationState out;
    out.xi = xi;
    out.concurrence = c;
    out.purity = (1.0 + c * c) / 2.0;
    out.rho_p.fill({});
    // Basis {HH, HV, VH, VV}: equal HH/VV mixture with xi on the coherence.
    out.rho_p[0] = 0.5;
    out.rho_p[15] = 0.5;
    out.rho_p[3] = 0.5 * xi;
    out.rho_p[12] = 0.5 * std::conj(xi);
    return out;
}

std::vector<ConcurrenceSweepPoint> concurrence_sweep(const TwoCrystalConfig& base, SweepParameter param,
                                                     std::span<const double> values,
                                                     const SweepGridPolicy& grid_policy, int threads) {
    std::vector<ConcurrenceSweepPoint> out;
    out.reserve(values.size());
    for (const double v : values) {
        TwoCrystalConfig cfg = base;
        cfg.base = with_parameter(base.base, param, v);
        const auto modes = crystal_modes(cfg, grid_policy.resolve(cfg.base), threads);
        const auto state = polarization_state(overlap_xi(modes.first, modes.second));
        out.push_back({v, std::abs(state.xi), state.purity, state.concurrence});
    }
    return out;
}

MarginalSchmidtCheck marginal_schmidt_check(const TwoCrystalConfig& cfg, const MomentumGrid& grid,
                                            int threads) {
    cfg.validate();
    BiphotonConfig first_cfg = cfg.base;
    first_cfg.crystal.azimuth_rad = 0.0;

    KernelMatrix plain = build_kernel(first_cfg, grid, threads);
    KernelMatrix shifted = plain;
    apply_walkoff_phase(shifted, cfg.signal_walkoff_rad, cfg.idler_walkoff_rad,
                        cfg.base.crystal.length_um());
    return {schmidt_spectrum(shifted).schmidt_number, schmidt_spectrum(plain).schmidt_number};
}

} // namespace spdc
