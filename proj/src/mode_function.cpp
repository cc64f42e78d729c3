#include "spdc/mode_function.hpp"

#include <cmath>
#include <stdexcept>

#include "spdc/parallel.hpp"
#include "spdc/units.hpp"

namespace spdc {

double phase_mismatch(const Wavevector& p, const Wavevector& q, const CrystalGeometry& crystal) {
    const double tan_rho0 = std::tan(crystal.walkoff_rad);
    return tan_rho0 * ((p.x + q.x) * std::cos(crystal.azimuth_rad) +
                       (p.y + q.y) * std::cos(crystal.noncollinear_rad) * std::sin(crystal.azimuth_rad)) -
           (p.y - q.y) * std::sin(crystal.noncollinear_rad);
}

ModeFunction::ModeFunction(const BiphotonConfig& cfg) {
    cfg.validate();
    const double tan_rho0 = std::tan(cfg.crystal.walkoff_rad);
    const double cos_phi = std::cos(cfg.crystal.noncollinear_rad);
    tan_rho0_cos_alpha_ = tan_rho0 * std::cos(cfg.crystal.azimuth_rad);
    tan_rho0_cos_phi_sin_alpha_ = tan_rho0 * cos_phi * std::sin(cfg.crystal.azimuth_rad);
    sin_phi_ = std::sin(cfg.crystal.noncollinear_rad);
    const double w0_sq = cfg.pump.waist_um * cfg.pump.waist_um;
    quarter_w0_sq_ = w0_sq / 4.0;
    quarter_w0_sq_cos_phi_sq_ = w0_sq * cos_phi * cos_phi / 4.0;
    quarter_ws_sq_ = cfg.optics.filter_waist_um * cfg.optics.filter_waist_um / 4.0;
    half_length_ = cfg.crystal.length_um() / 2.0;
    const double gl = cfg.gamma_length_um();
    quarter_gamma_length_sq_ = gl * gl / 4.0;
}

double ModeFunction::mismatch(double px, double py, double qx, double qy) const {
    return tan_rho0_cos_alpha_ * (px + qx) + tan_rho0_cos_phi_sin_alpha_ * (py + qy) -
           sin_phi_ * (py - qy);
}

std::complex<double> ModeFunction::operator()(double px, double py, double qx, double qy) const {
    const double dk = mismatch(px, py, qx, qy);
    const double sum_x = px + qx;
    const double sum_y = py + qy;
    const double exponent = -quarter_gamma_length_sq_ * dk * dk
                            - quarter_w0_sq_ * sum_x * sum_x
                            - quarter_w0_sq_cos_phi_sq_ * sum_y * sum_y
                            - quarter_ws_sq_ * (px * px + py * py + qx * qx + qy * qy);
    return std::polar(std::exp(exponent), half_length_ * dk);
}

std::complex<double> mode_amplitude(const Wavevector& p, const Wavevector& q, const BiphotonConfig& cfg) {
    return ModeFunction(cfg)(p.x, p.y, q.x, q.y);
}

DiscretizedMode signal_mode(const BiphotonConfig& cfg, const MomentumGrid& grid) {
    grid.validate();
    const ModeFunction mode(cfg);
    const int n = grid.samples_per_axis;
    const auto axis = grid.axis();
    DiscretizedMode out{grid, std::vector<std::complex<double>>(static_cast<size_t>(n) * n), 1.0};
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            out.amplitudes[static_cast<size_t>(iy) * n + ix] = mode(axis[ix], axis[iy], 0.0, 0.0);

    const auto w = trapezoid_weights(n, grid.spacing());
    double power = 0.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            power += w[iy] * w[ix] * std::norm(out.amplitudes[static_cast<size_t>(iy) * n + ix]);
    if (!(power > 0.0)) throw std::runtime_error("signal mode has zero power on this grid");
    out.norm_constant = 1.0 / std::sqrt(power);
    for (auto& a : out.amplitudes) a *= out.norm_constant;
    return out;
}

double Image::x_of_col(int col) const {
    return half_width * static_cast<double>(2 * col - (samples_per_axis - 1)) /
           static_cast<double>(samples_per_axis - 1);
}

double Image::y_of_row(int row) const {
    const int i = samples_per_axis - 1 - row;
    return half_width * static_cast<double>(2 * i - (samples_per_axis - 1)) /
           static_cast<double>(samples_per_axis - 1);
}

Image coincidence_image(const BiphotonConfig& cfg, const DetectorPlaneGrid& det, int threads) {
    det.validate();
    const ModeFunction mode(cfg);
    const int n = det.samples_per_axis;
    const auto axis = det.axis_mm();
    // 2-f mapping: detector position x -> transverse wavevector 2 pi x / (lambda_s f)
    const double to_wavevector =
        2.0 * std::numbers::pi / (cfg.optics.signal_wavelength_um() * cfg.optics.focal_length_um());

    Image image{det.half_width_mm, n, std::vector<double>(static_cast<size_t>(n) * n)};
    parallel_for(n, threads, [&](int row) {
        const double py = mm_to_um(axis[n - 1 - row]) * to_wavevector;
        for (int col = 0; col < n; ++col) {
            const double px = mm_to_um(axis[col]) * to_wavevector;
            image.pixels[static_cast<size_t>(row) * n + col] = std::norm(mode(px, py, 0.0, 0.0));
        }
    });

    double peak = 0.0;
    for (const double v : image.pixels)
        if (v > peak) peak = v;
    if (!(peak > 0.0)) throw std::runtime_error("coincidence image vanished on this grid");
    for (auto& v : image.pixels) v /= peak;
    return image;
}

OrientationAngle mode_orientation_beta(const CrystalGeometry& crystal) {
    const double tan_rho0 = std::tan(crystal.walkoff_rad);
    const double cos_alpha = std::cos(crystal.azimuth_rad);
    const double den = tan_rho0 * cos_alpha;
    const double num = std::sin(crystal.noncollinear_rad) -
                       tan_rho0 * std::cos(crystal.noncollinear_rad) * std::sin(crystal.azimuth_rad);
    if (tan_rho0 == 0.0 || std::abs(cos_alpha) < 1.0e-12)
        return {0.5 * std::numbers::pi, true};
    return {std::atan(num / den), false};
}

EllipseShape ellipticity(const Image& image) {
    if (image.pixels.empty()) throw std::invalid_argument("ellipticity: empty image");
    const int n = image.samples_per_axis;

    double mass = 0.0, mx = 0.0, my = 0.0;
    for (int row = 0; row < n; ++row) {
        const double y = image.y_of_row(row);
        for (int col = 0; col < n; ++col) {
            const double v = image.at(row, col);
            if (v < 0.0) throw std::invalid_argument("ellipticity: negative pixel");
            mass += v;
            mx += v * image.x_of_col(col);
            my += v * y;
        }
    }
    if (!(mass > 0.0)) throw std::invalid_argument("ellipticity: image has zero mass");
    mx /= mass;
    my /= mass;

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (int row = 0; row < n; ++row) {
        const double dy = image.y_of_row(row) - my;
        for (int col = 0; col < n; ++col) {
            const double v = image.at(row, col);
            const double dx = image.x_of_col(col) - mx;
            sxx += v * dx * dx;
            syy += v * dy * dy;
            sxy += v * dx * dy;
        }
    }
    sxx /= mass;
    syy /= mass;
    sxy /= mass;

    // 2x2 symmetric eigenproblem in closed form.
    const double trace_half = 0.5 * (sxx + syy);
    const double disc = std::sqrt(0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy);
    const double lam_max = trace_half + disc;
    const double lam_min = trace_half - disc;
    if (!(lam_min > 0.0)) throw std::invalid_argument("ellipticity: degenerate second moments");

    // Major-axis angle from the +x axis, then re-expressed from the +y axis
    // to share the orientation convention of mode_orientation_beta.
    const double theta_x = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    return {std::sqrt(lam_max / lam_min), wrap_half_turn(0.5 * std::numbers::pi - theta_x)};
}

} // namespace spdc
