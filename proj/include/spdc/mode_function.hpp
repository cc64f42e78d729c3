#pragma once

#include <complex>
#include <vector>

#include "spdc/config.hpp"
#include "spdc/grid.hpp"

namespace spdc {

/// Transverse wavevector (rad/um).
struct Wavevector {
    double x = 0.0;
    double y = 0.0;
};

/// Longitudinal phase mismatch of the down-conversion process for signal
/// wavevector p and idler wavevector q:
///
///   dk = tan(rho0) [ (px+qx) cos(alpha) + (py+qy) cos(phi) sin(alpha) ]
///        - (py-qy) sin(phi)
///
/// Linear in (p, q); vanishes for p = q = 0 and, at rho0 = 0, reduces to
/// -(py-qy) sin(phi) independent of alpha.
double phase_mismatch(const Wavevector& p, const Wavevector& q, const CrystalGeometry& crystal);

/// Biphoton mode amplitude, the product of
///   - the Gaussian surrogate of the sinc phase-matching profile together
///     with its propagation phase, exp(-(gamma L)^2 dk^2 / 4 + i dk L / 2),
///   - the pump angular spectrum, exp(-[(px+qx)^2 w0^2
///     + (py+qy)^2 w0^2 cos^2(phi)] / 4),
///   - one Gaussian collection filter per photon, exp(-|p|^2 ws^2 / 4)
///     and exp(-|q|^2 ws^2 / 4).
///
/// All real exponents are <= 0, so |amplitude| <= 1 with equality at
/// p = q = 0; the phase is exactly dk L / 2.
class ModeFunction {
public:
    explicit ModeFunction(const BiphotonConfig& cfg);

    std::complex<double> operator()(double px, double py, double qx, double qy) const;
    std::complex<double> operator()(const Wavevector& p, const Wavevector& q) const {
        return (*this)(p.x, p.y, q.x, q.y);
    }

    double mismatch(double px, double py, double qx, double qy) const;

private:
    double tan_rho0_cos_alpha_;
    double tan_rho0_cos_phi_sin_alpha_;
    double sin_phi_;
    double quarter_w0_sq_;
    double quarter_w0_sq_cos_phi_sq_;
    double quarter_ws_sq_;
    double half_length_;
    double quarter_gamma_length_sq_;
};

std::complex<double> mode_amplitude(const Wavevector& p, const Wavevector& q, const BiphotonConfig& cfg);

/// Heralded signal mode sampled on a momentum grid, normalized so the
/// trapezoid quadrature of |amplitude|^2 equals one. Storage is row-major
/// with amplitude(iy, ix) at p = (axis[ix], axis[iy]).
struct DiscretizedMode {
    MomentumGrid grid;
    std::vector<std::complex<double>> amplitudes;
    double norm_constant = 1.0; // factor that scaled the raw samples to unit power

    std::complex<double> at(int iy, int ix) const {
        return amplitudes[static_cast<size_t>(iy) * grid.samples_per_axis + ix];
    }
};

/// Signal mode with the idler projected onto q = 0. Requires an odd grid
/// so the projection point is sampled exactly.
DiscretizedMode signal_mode(const BiphotonConfig& cfg, const MomentumGrid& grid);

/// Square raster with physical axis coordinates. Row 0 is the top of the
/// picture (largest y); column index increases with x.
struct Image {
    double half_width = 0.0; // axis unit (mm for detector-plane images)
    int samples_per_axis = 0;
    std::vector<double> pixels; // row-major

    double at(int row, int col) const {
        return pixels[static_cast<size_t>(row) * samples_per_axis + col];
    }
    double x_of_col(int col) const;
    double y_of_row(int row) const;
};

/// Coincidence-rate image of the signal photon with the idler detector
/// fixed on axis: R(x) = |Phi(2 pi x / (lambda_s f), 0)|^2, normalized to
/// unit peak. Nonnegative by construction.
Image coincidence_image(const BiphotonConfig& cfg, const DetectorPlaneGrid& det, int threads = 1);

/// Orientation of the loci of perfect phase matching in the (px, py)
/// plane, measured from the +py axis toward +px:
///
///   tan(beta) = (sin(phi) - tan(rho0) cos(phi) sin(alpha))
///               / (tan(rho0) cos(alpha))
///
/// When the denominator vanishes to machine precision (cos(alpha) = 0 or
/// rho0 = 0) the branch is degenerate: beta = pi/2 and the flag is set.
struct OrientationAngle {
    double beta_rad;
    bool degenerate;
};

OrientationAngle mode_orientation_beta(const CrystalGeometry& crystal);

/// Second-moment shape of a nonnegative image: axis_ratio is the square
/// root of the eigenvalue ratio of the intensity covariance (>= 1), and
/// major_axis_rad the major-axis orientation in (-pi/2, pi/2], measured
/// from the +y axis toward +x so it is directly comparable with
/// mode_orientation_beta. Throws on an image with zero total mass.
struct EllipseShape {
    double axis_ratio;
    double major_axis_rad;
};

EllipseShape ellipticity(const Image& image);

} // namespace spdc
