#include "spdc/config.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spdc {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

} // namespace

void PumpBeam::validate() const {
    require(std::isfinite(wavelength_nm) && wavelength_nm > 0.0, "pump.wavelength_nm must be > 0");
    require(std::isfinite(waist_um) && waist_um > 0.0, "pump.waist_um must be > 0");
}

void CrystalGeometry::validate() const {
    require(std::isfinite(length_mm) && length_mm > 0.0, "crystal.length_mm must be > 0");
    require(walkoff_rad >= 0.0 && walkoff_rad < 0.5 * std::numbers::pi,
            "crystal.walkoff_deg must lie in [0, 90)");
    require(noncollinear_rad >= 0.0 && noncollinear_rad < 0.5 * std::numbers::pi,
            "crystal.noncollinear_deg must lie in [0, 90)");
    require(azimuth_rad >= 0.0 && azimuth_rad < 2.0 * std::numbers::pi,
            "crystal.alpha_deg must reduce to [0, 360)");
}

void CollectionOptics::validate() const {
    require(std::isfinite(filter_waist_um) && filter_waist_um >= 0.0, "collection.ws_um must be >= 0");
    require(std::isfinite(focal_length_mm) && focal_length_mm > 0.0, "collection.focal_mm must be > 0");
    require(std::isfinite(signal_wavelength_nm) && signal_wavelength_nm > 0.0,
            "collection.signal_nm must be > 0");
}

void ModelConstants::validate() const {
    require(std::isfinite(gamma) && gamma > 0.0, "model.gamma must be > 0");
}

void BiphotonConfig::validate() const {
    pump.validate();
    crystal.validate();
    optics.validate();
    model.validate();
}

CharacteristicLengths characteristic_lengths(const PumpBeam& pump, const CrystalGeometry& crystal) {
    pump.validate();
    const double inf = std::numeric_limits<double>::infinity();
    CharacteristicLengths out{inf, inf, false};
    if (crystal.noncollinear_rad > 0.0) out.noncollinear_um = pump.waist_um / std::sin(crystal.noncollinear_rad);
    if (crystal.walkoff_rad > 0.0) out.walkoff_um = pump.waist_um / std::tan(crystal.walkoff_rad);
    const double length = crystal.length_um();
    out.long_crystal_regime = length > out.noncollinear_um && length > out.walkoff_um;
    return out;
}

const char* sweep_parameter_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::azimuth_deg: return "alpha_deg";
        case SweepParameter::filter_waist_um: return "ws_um";
        case SweepParameter::pump_waist_um: return "w0_um";
        case SweepParameter::crystal_length_mm: return "L_mm";
    }
    return "?";
}

BiphotonConfig with_parameter(BiphotonConfig base, SweepParameter p, double value) {
    switch (p) {
        case SweepParameter::azimuth_deg: base.crystal.azimuth_rad = wrap_two_pi(deg_to_rad(value)); break;
        case SweepParameter::filter_waist_um: base.optics.filter_waist_um = value; break;
        case SweepParameter::pump_waist_um: base.pump.waist_um = value; break;
        case SweepParameter::crystal_length_mm: base.crystal.length_mm = value; break;
    }
    base.validate();
    return base;
}

} // namespace spdc
