#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "spdc/config.hpp"
#include "spdc/grid.hpp"

namespace spdc {

/// Error in a config file or in the values it carries. what() names the
/// offending key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Line-oriented `key = value` configuration. `#` starts a comment,
/// unknown or duplicate keys are errors.
///
/// Required keys:
///   pump.wavelength_nm  pump.waist_um
///   crystal.length_mm   crystal.walkoff_deg  crystal.noncollinear_deg
///   crystal.alpha_deg   collection.ws_um     collection.focal_mm
///   grid.samples
/// Optional keys:
///   collection.signal_nm      (default: 2 * pump.wavelength_nm)
///   grid.halfwidth_radperum   (default: decay rule, see grid.hpp)
///   model.gamma               (default: 0.455)
///
/// Raw values are kept exactly as parsed so a snapshot() written with
/// shortest round-trip formatting reloads bit-identically.
class ConfigFile {
public:
    static ConfigFile load(const std::string& path);
    static ConfigFile parse(std::istream& in, const std::string& name);

    bool has(const std::string& key) const;
    double raw(const std::string& key) const;
    /// Set or override a raw value (file units). The key must be known.
    void set(const std::string& key, double value);

    /// Converted, validated physics configuration.
    BiphotonConfig biphoton() const;
    int grid_samples() const;
    std::optional<double> grid_halfwidth() const;

    /// Momentum grid from grid.samples (or an override) and
    /// grid.halfwidth_radperum (or the decay rule applied to `cfg`).
    MomentumGrid momentum_grid(const BiphotonConfig& cfg,
                               std::optional<int> samples_override = std::nullopt) const;

    /// Canonical text form: known keys in a fixed order, shortest
    /// round-trip number formatting.
    std::string snapshot() const;

private:
    std::string name_ = "<config>";
    std::map<std::string, double> values_;
};

} // namespace spdc
