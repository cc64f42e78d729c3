#pragma once

#include <numbers>

namespace spdc {

// Internal unit system: lengths in micrometers, angles in radians,
// transverse wavevectors in rad/um. Config files use nm/um/mm/deg and
// are converted on load.

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

constexpr double nm_to_um(double nm) { return nm * 1.0e-3; }
constexpr double mm_to_um(double mm) { return mm * 1.0e3; }
constexpr double um_to_mm(double um) { return um * 1.0e-3; }

/// Reduce an angle to [0, 2*pi).
double wrap_two_pi(double rad);

/// Reduce an orientation (a line direction, period pi) to (-pi/2, pi/2].
double wrap_half_turn(double rad);

} // namespace spdc
