#include "spdc/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace spdc {

namespace {

// axis[i] = h * (2i - (n-1)) / (n-1): the numerators are exact small
// integers, so axis[i] == -axis[n-1-i] and axis[(n-1)/2] == 0 hold exactly.
std::vector<double> symmetric_axis(double half_width, int n) {
    std::vector<double> axis(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        axis[static_cast<size_t>(i)] = half_width * static_cast<double>(2 * i - (n - 1)) / static_cast<double>(n - 1);
    return axis;
}

void check_odd_grid(double half_width, int n, const char* what) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument(std::string(what) + ": half width must be > 0");
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument(std::string(what) + ": samples per axis must be odd and >= 3");
}

} // namespace

void MomentumGrid::validate() const { check_odd_grid(half_width, samples_per_axis, "momentum grid"); }

std::vector<double> MomentumGrid::axis() const {
    validate();
    return symmetric_axis(half_width, samples_per_axis);
}

void DetectorPlaneGrid::validate() const { check_odd_grid(half_width_mm, samples_per_axis, "detector grid"); }

std::vector<double> DetectorPlaneGrid::axis_mm() const {
    validate();
    return symmetric_axis(half_width_mm, samples_per_axis);
}

std::vector<double> trapezoid_weights(int n, double dx) {
    std::vector<double> w(static_cast<size_t>(n), dx);
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

double default_momentum_halfwidth(const BiphotonConfig& cfg) {
    cfg.validate();
    const double w0 = cfg.pump.waist_um;
    const double ws = cfg.optics.filter_waist_um;
    const double cos_phi = std::cos(cfg.crystal.noncollinear_rad);
    const double sin_phi = std::sin(cfg.crystal.noncollinear_rad);
    const double gl = cfg.gamma_length_um();

    // Amplitude decay coefficients c (|amplitude| <= exp(-c h^2) on the
    // corresponding boundary) of the slowest directions:
    //   - heralded-mode y axis, pump + filter only (phase matching may be
    //     flat there at the compensating azimuth),
    //   - joint-kernel anti-diagonal p = -q along y, filter + phase
    //     matching only,
    //   - the weakest joint-kernel face (one coordinate pinned at the
    //     boundary, the rest free): maximizing the filter/pump trade-off
    //     along the anti-diagonal gives c = A (A + 2B) / (A + B) with
    //     A = ws^2/4 and B the slowest pump coefficient.
    double c_min = (w0 * w0 * cos_phi * cos_phi + ws * ws) / 4.0;
    const double c_diag_y = ws * ws / 2.0 + gl * sin_phi * gl * sin_phi;
    if (c_diag_y > 0.0 && c_diag_y < c_min) c_min = c_diag_y;
    if (ws > 0.0) {
        const double a = ws * ws / 4.0;
        const double b = w0 * w0 * cos_phi * cos_phi / 4.0;
        const double c_face = a * (a + 2.0 * b) / (a + b);
        if (c_face < c_min) c_min = c_face;
    }
    return std::sqrt(8.0 / c_min);
}

MomentumGrid make_momentum_grid(const BiphotonConfig& cfg, int samples_per_axis) {
    MomentumGrid grid{default_momentum_halfwidth(cfg), samples_per_axis};
    grid.validate();
    return grid;
}

DetectorPlaneGrid make_detector_grid(const BiphotonConfig& cfg, const MomentumGrid& momentum) {
    momentum.validate();
    const double scale = cfg.optics.signal_wavelength_um() * cfg.optics.focal_length_um() /
                         (2.0 * std::numbers::pi); // x_um = scale * p
    DetectorPlaneGrid det{um_to_mm(momentum.half_width * scale), momentum.samples_per_axis};
    det.validate();
    return det;
}

} // namespace spdc
