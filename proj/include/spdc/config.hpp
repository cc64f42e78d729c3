#pragma once

#include <string>

#include "spdc/units.hpp"

namespace spdc {

/// Gaussian pump beam at the crystal input face.
struct PumpBeam {
    double wavelength_nm = 405.0;
    double waist_um = 136.0;

    double wavelength_um() const { return nm_to_um(wavelength_nm); }
    void validate() const;
};

/// Nonlinear crystal cut and orientation.
///
/// walkoff_rad is the Poynting-vector walk-off angle of the extraordinary
/// pump, noncollinear_rad the emission angle of the down-converted photons
/// relative to the pump axis, azimuth_rad the position of the detected pair
/// around the emission cone.
struct CrystalGeometry {
    double length_mm = 5.0;
    double walkoff_rad = deg_to_rad(4.9);
    double noncollinear_rad = deg_to_rad(4.0);
    double azimuth_rad = 0.0;

    double length_um() const { return mm_to_um(length_mm); }
    void validate() const;
};

/// Collection/detection optics. filter_waist_um = 0 means negligible
/// spatial filtering. signal_wavelength_nm defaults to the degenerate
/// value (twice the pump wavelength).
struct CollectionOptics {
    double filter_waist_um = 0.0;
    double focal_length_mm = 500.0;
    double signal_wavelength_nm = 810.0;

    double focal_length_um() const { return mm_to_um(focal_length_mm); }
    double signal_wavelength_um() const { return nm_to_um(signal_wavelength_nm); }
    void validate() const;
};

/// Model-level constants. gamma is the width factor of the Gaussian
/// surrogate for the sinc phase-matching profile, matched at 1/e^2 of
/// the intensity.
struct ModelConstants {
    double gamma = 0.455;

    void validate() const;
};

/// Full parameter set of the two-photon mode function.
struct BiphotonConfig {
    PumpBeam pump;
    CrystalGeometry crystal;
    CollectionOptics optics;
    ModelConstants model;

    double gamma_length_um() const { return model.gamma * crystal.length_um(); }
    void validate() const;
};

/// Crystal-length scales separating the thin-crystal from the
/// walk-off-dominated regime. A length is infinite when the
/// corresponding angle vanishes.
struct CharacteristicLengths {
    double noncollinear_um;
    double walkoff_um;
    /// True when the crystal is longer than both scales.
    bool long_crystal_regime;
};

CharacteristicLengths characteristic_lengths(const PumpBeam& pump, const CrystalGeometry& crystal);

/// Parameter selected by a sweep command.
enum class SweepParameter { azimuth_deg, filter_waist_um, pump_waist_um, crystal_length_mm };

const char* sweep_parameter_name(SweepParameter p);

/// Copy of `base` with one parameter replaced (value in the unit implied
/// by the parameter name).
BiphotonConfig with_parameter(BiphotonConfig base, SweepParameter p, double value);

} // namespace spdc
