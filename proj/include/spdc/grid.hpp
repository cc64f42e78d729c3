#pragma once

#include <vector>

#include "spdc/config.hpp"

namespace spdc {

/// Uniform square grid in transverse-wavevector space, symmetric about
/// zero. samples_per_axis must be odd so the origin is a grid point.
struct MomentumGrid {
    double half_width = 0.0; // rad/um
    int samples_per_axis = 0;

    void validate() const;
    double spacing() const { return 2.0 * half_width / (samples_per_axis - 1); }
    /// Strictly increasing coordinates with axis[i] == -axis[n-1-i] exactly.
    std::vector<double> axis() const;
};

/// Uniform square grid in the detection plane (mm), odd sample count.
struct DetectorPlaneGrid {
    double half_width_mm = 0.0;
    int samples_per_axis = 0;

    void validate() const;
    double spacing_mm() const { return 2.0 * half_width_mm / (samples_per_axis - 1); }
    std::vector<double> axis_mm() const;
};

/// Trapezoid quadrature weights on a uniform axis of n points with
/// spacing dx (dx/2 at the ends).
std::vector<double> trapezoid_weights(int n, double dx);

/// Half-width such that every decaying direction of the mode function has
/// fallen below e^-8 of its peak at the grid boundary. The binding scales
/// are the slowest pump/filter axis of the heralded mode and the two
/// anti-diagonal rays of the joint kernel, where only the filter and the
/// phase-matching profile decay.
double default_momentum_halfwidth(const BiphotonConfig& cfg);

MomentumGrid make_momentum_grid(const BiphotonConfig& cfg, int samples_per_axis);

/// Detector grid whose extent maps onto the momentum grid extent through
/// the 2-f relation p = 2*pi*x/(lambda_s*f).
DetectorPlaneGrid make_detector_grid(const BiphotonConfig& cfg, const MomentumGrid& momentum);

} // namespace spdc
