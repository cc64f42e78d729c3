#include "spdc/config_file.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "spdc/image_io.hpp"

namespace spdc {

namespace {

constexpr std::array<const char*, 9> kRequiredKeys = {
    "pump.wavelength_nm", "pump.waist_um",
    "crystal.length_mm",  "crystal.walkoff_deg", "crystal.noncollinear_deg", "crystal.alpha_deg",
    "collection.ws_um",   "collection.focal_mm",
    "grid.samples",
};

constexpr std::array<const char*, 3> kOptionalKeys = {
    "collection.signal_nm",
    "grid.halfwidth_radperum",
    "model.gamma",
};

bool known_key(const std::string& key) {
    for (const char* k : kRequiredKeys)
        if (key == k) return true;
    for (const char* k : kOptionalKeys)
        if (key == k) return true;
    return false;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& text, const std::string& key, const std::string& where) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError(where + ": value of '" + key + "' is not a number: '" + text + "'");
    return value;
}

} // namespace

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse(in, path);
}

ConfigFile ConfigFile::parse(std::istream& in, const std::string& name) {
    ConfigFile cfg;
    cfg.name_ = name;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = name + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (!known_key(key)) throw ConfigError(where + ": unknown key '" + key + "'");
        if (cfg.values_.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
        cfg.values_[key] = parse_number(value, key, where);
    }
    for (const char* k : kRequiredKeys)
        if (!cfg.values_.count(k)) throw ConfigError(name + ": missing required key '" + std::string(k) + "'");
    cfg.biphoton();     // surface invariant violations at load time
    cfg.grid_samples();
    return cfg;
}

bool ConfigFile::has(const std::string& key) const { return values_.count(key) != 0; }

double ConfigFile::raw(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(name_ + ": missing required key '" + key + "'");
    return it->second;
}

void ConfigFile::set(const std::string& key, double value) {
    if (!known_key(key)) throw ConfigError(name_ + ": unknown key '" + key + "'");
    values_[key] = value;
}

BiphotonConfig ConfigFile::biphoton() const {
    BiphotonConfig cfg;
    cfg.pump.wavelength_nm = raw("pump.wavelength_nm");
    cfg.pump.waist_um = raw("pump.waist_um");
    cfg.crystal.length_mm = raw("crystal.length_mm");
    cfg.crystal.walkoff_rad = deg_to_rad(raw("crystal.walkoff_deg"));
    cfg.crystal.noncollinear_rad = deg_to_rad(raw("crystal.noncollinear_deg"));
    cfg.crystal.azimuth_rad = wrap_two_pi(deg_to_rad(raw("crystal.alpha_deg")));
    cfg.optics.filter_waist_um = raw("collection.ws_um");
    cfg.optics.focal_length_mm = raw("collection.focal_mm");
    cfg.optics.signal_wavelength_nm =
        has("collection.signal_nm") ? raw("collection.signal_nm") : 2.0 * cfg.pump.wavelength_nm;
    if (has("model.gamma")) cfg.model.gamma = raw("model.gamma");
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(name_ + ": " + e.what());
    }
    return cfg;
}

int ConfigFile::grid_samples() const {
    const double v = raw("grid.samples");
    if (!(v >= 3.0) || v != std::floor(v) || v > 100001.0 || static_cast<long long>(v) % 2 == 0)
        throw ConfigError(name_ + ": grid.samples must be an odd integer >= 3");
    return static_cast<int>(v);
}

std::optional<double> ConfigFile::grid_halfwidth() const {
    if (!has("grid.halfwidth_radperum")) return std::nullopt;
    const double v = raw("grid.halfwidth_radperum");
    if (!(v > 0.0)) throw ConfigError(name_ + ": grid.halfwidth_radperum must be > 0");
    return v;
}

MomentumGrid ConfigFile::momentum_grid(const BiphotonConfig& cfg,
                                       std::optional<int> samples_override) const {
    const int samples = samples_override.value_or(grid_samples());
    MomentumGrid grid{grid_halfwidth().value_or(default_momentum_halfwidth(cfg)), samples};
    try {
        grid.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(name_ + ": " + e.what());
    }
    return grid;
}

std::string ConfigFile::snapshot() const {
    std::ostringstream out;
    auto emit = [&](const char* key) {
        const auto it = values_.find(key);
        if (it != values_.end()) out << key << " = " << format_double(it->second) << "\n";
    };
    for (const char* k : kRequiredKeys) emit(k);
    for (const char* k : kOptionalKeys) emit(k);
    return out.str();
}

} // namespace spdc
