// spdcsim — command-line front end for the SPDC spatial-state simulator.
//
// Subcommands: image, movie, oam, schmidt, concurrence, selftest.
// Exit codes: 0 success, 2 configuration/usage error, 3 numerical
// diagnostic failure.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "spdc/config.hpp"
#include "spdc/config_file.hpp"
#include "spdc/grid.hpp"
#include "spdc/image_io.hpp"
#include "spdc/manifest.hpp"
#include "spdc/mode_function.hpp"
#include "spdc/oam.hpp"
#include "spdc/polarization.hpp"
#include "spdc/schmidt.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
    std::string config_path;
    std::string out_prefix;
    int threads = 1;
    std::optional<int> grid_samples;
    std::optional<double> alpha_deg;
    std::optional<double> w0_um;
};

void add_common(CLI::App* cmd, CommonOptions& opt, const std::string& default_prefix) {
    cmd->add_option("--config", opt.config_path, "configuration file")->required();
    cmd->add_option("--out", opt.out_prefix, "output path prefix")->default_val(default_prefix);
    cmd->add_option("--threads", opt.threads, "worker threads")->check(CLI::Range(1, 256))->default_val(1);
    cmd->add_option("--grid-samples", opt.grid_samples, "override grid.samples (odd)");
    cmd->add_option("--alpha", opt.alpha_deg, "override crystal.alpha_deg");
    cmd->add_option("--w0", opt.w0_um, "override pump.waist_um");
}

spdc::ConfigFile load_config(const CommonOptions& opt) {
    spdc::ConfigFile cfg = spdc::ConfigFile::load(opt.config_path);
    if (opt.alpha_deg) cfg.set("crystal.alpha_deg", *opt.alpha_deg);
    if (opt.w0_um) cfg.set("pump.waist_um", *opt.w0_um);
    if (opt.grid_samples) cfg.set("grid.samples", static_cast<double>(*opt.grid_samples));
    return cfg;
}

void prepare_prefix(const std::string& prefix) {
    const auto parent = std::filesystem::path(prefix).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
}

std::vector<double> inclusive_range(double start, double stop, double step);

std::vector<double> parse_range(const std::string& text) {
    double start = 0.0, stop = 0.0, step = 0.0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3)
        throw spdc::ConfigError("--range expects START:STOP:STEP, got '" + text + "'");
    if (step == 0.0 || (stop - start) * step < 0.0)
        throw spdc::ConfigError("--range step does not reach STOP: '" + text + "'");
    return inclusive_range(start, stop, step);
}

// Everything after the subcommand except the --config pair and the
// --threads setting (which never affects results); reused in the
// manifest's rerun line.
std::string args_without_config(int argc, char** argv) {
    std::string out;
    for (int i = 2; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" || a == "--threads") {
            ++i;
            continue;
        }
        if (a.rfind("--config=", 0) == 0 || a.rfind("--threads=", 0) == 0) continue;
        if (!out.empty()) out += ' ';
        out += a;
    }
    return out;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void emit_manifest(const std::string& prefix, const std::string& subcommand, const std::string& args,
                   const std::string& grid_note, std::vector<std::string> outputs,
                   const spdc::ConfigFile& cfg, double seconds) {
    spdc::RunManifest m;
    m.subcommand = subcommand;
    m.args = args;
    m.grid_note = grid_note;
    m.outputs = std::move(outputs);
    m.duration_s = seconds;
    m.config_snapshot = cfg.snapshot();
    spdc::write_manifest(prefix + ".manifest.txt", m);
}

std::string grid_note_for(const spdc::MomentumGrid& grid) {
    return "momentum samples=" + std::to_string(grid.samples_per_axis) +
           " halfwidth_radperum=" + spdc::format_double(grid.half_width);
}

std::string grid_policy_note(const spdc::SweepGridPolicy& policy) {
    return "kernel samples=" + std::to_string(policy.samples_per_axis) +
           (policy.fixed_halfwidth
                ? " halfwidth_radperum=" + spdc::format_double(*policy.fixed_halfwidth)
                : std::string(" halfwidth=auto(decay rule per point)"));
}

int cmd_image(const CommonOptions& opt, const std::string& args) {
    Timer timer;
    const auto cfg_file = load_config(opt);
    const auto cfg = cfg_file.biphoton();
    const auto momentum = cfg_file.momentum_grid(cfg);
    const auto det = spdc::make_detector_grid(cfg, momentum);

    prepare_prefix(opt.out_prefix);
    const auto image = spdc::coincidence_image(cfg, det, opt.threads);
    const std::string pgm = opt.out_prefix + ".pgm";
    const std::string csv = opt.out_prefix + ".csv";
    spdc::write_pgm16(pgm, image);
    spdc::write_image_csv(csv, image);

    const auto shape = spdc::ellipticity(image);
    std::cout << "wrote " << pgm << "\n";
    std::cout << "wrote " << csv << "\n";
    std::cout << "ellipticity " << spdc::format_double(shape.axis_ratio) << " major_axis_deg "
              << spdc::format_double(spdc::rad_to_deg(shape.major_axis_rad)) << "\n";

    emit_manifest(opt.out_prefix, "image", args,
                  grid_note_for(momentum) + " detector halfwidth_mm=" + spdc::format_double(det.half_width_mm),
                  {pgm, csv}, cfg_file, timer.seconds());
    return 0;
}

std::vector<double> inclusive_range(double start, double stop, double step) {
    if (step == 0.0 || (stop - start) * step < 0.0)
        throw spdc::ConfigError("range step does not reach the stop value");
    std::vector<double> values;
    const double tol = 1.0e-9 * std::abs(step);
    for (int k = 0;; ++k) {
        const double v = start + k * step;
        if ((step > 0.0 && v > stop + tol) || (step < 0.0 && v < stop - tol)) break;
        values.push_back(v);
    }
    return values;
}

int cmd_movie(const CommonOptions& opt, const std::string& args, double alpha_start, double alpha_stop,
              double alpha_step) {
    Timer timer;
    const auto cfg_file = load_config(opt);
    const auto base = cfg_file.biphoton();
    const auto momentum = cfg_file.momentum_grid(base);
    const auto det = spdc::make_detector_grid(base, momentum);
    const auto alphas = inclusive_range(alpha_start, alpha_stop, alpha_step);

    prepare_prefix(opt.out_prefix);
    std::vector<std::string> outputs;
    for (size_t i = 0; i < alphas.size(); ++i) {
        spdc::BiphotonConfig cfg = base;
        cfg.crystal.azimuth_rad = spdc::wrap_two_pi(spdc::deg_to_rad(alphas[i]));
        const auto image = spdc::coincidence_image(cfg, det, opt.threads);
        char suffix[16];
        std::snprintf(suffix, sizeof(suffix), "_%03zu.pgm", i);
        const std::string path = opt.out_prefix + suffix;
        spdc::write_pgm16(path, image);
        outputs.push_back(path);
    }
    std::cout << "wrote " << outputs.size() << " frames to " << opt.out_prefix << "_*.pgm\n";

    emit_manifest(opt.out_prefix, "movie", args, grid_note_for(momentum), std::move(outputs), cfg_file,
                  timer.seconds());
    return 0;
}

int cmd_oam(const CommonOptions& opt, const std::string& args, bool sweep_alpha,
            const std::string& range, int m_max) {
    Timer timer;
    const auto cfg_file = load_config(opt);
    const auto cfg = cfg_file.biphoton();

    spdc::PolarGrid polar;
    polar.radial_max = cfg_file.grid_halfwidth().value_or(spdc::default_momentum_halfwidth(cfg));
    polar.angular_samples = std::max(polar.angular_samples, 8 * (m_max + 1));

    std::vector<double> alphas_deg;
    if (sweep_alpha)
        alphas_deg = parse_range(range);
    else
        alphas_deg.push_back(spdc::rad_to_deg(cfg.crystal.azimuth_rad));

    std::vector<double> alphas_rad(alphas_deg.size());
    for (size_t i = 0; i < alphas_deg.size(); ++i) alphas_rad[i] = spdc::deg_to_rad(alphas_deg[i]);
    const auto spectra = spdc::oam_azimuth_sweep(cfg, alphas_rad, polar, m_max, opt.threads);

    std::string header = "alpha_deg";
    for (int m = -m_max; m <= m_max; ++m) header += ",C_" + std::to_string(m);
    header += ",truncation";
    std::vector<std::vector<double>> rows;
    bool all_converged = true;
    for (size_t i = 0; i < spectra.size(); ++i) {
        std::vector<double> row{alphas_deg[i]};
        for (int m = -m_max; m <= m_max; ++m) row.push_back(spectra[i].weight(m));
        row.push_back(spectra[i].truncation_mass);
        rows.push_back(std::move(row));
        all_converged = all_converged && spectra[i].converged();
    }

    prepare_prefix(opt.out_prefix);
    const std::string csv = opt.out_prefix + ".csv";
    spdc::write_csv(csv, header, rows);
    std::cout << "wrote " << csv << "\n";
    if (!all_converged)
        std::cerr << "warning: truncation mass above 1e-3 at some azimuths; increase --m-max\n";

    emit_manifest(opt.out_prefix, "oam", args,
                  "polar radial=" + std::to_string(polar.radial_samples) +
                      " angular=" + std::to_string(polar.angular_samples) +
                      " radial_max=" + spdc::format_double(polar.radial_max) +
                      " m_max=" + std::to_string(m_max),
                  {csv}, cfg_file, timer.seconds());
    return 0;
}

spdc::SweepParameter parse_sweep_parameter(const std::string& name) {
    if (name == "alpha") return spdc::SweepParameter::azimuth_deg;
    if (name == "ws") return spdc::SweepParameter::filter_waist_um;
    if (name == "w0") return spdc::SweepParameter::pump_waist_um;
    if (name == "L") return spdc::SweepParameter::crystal_length_mm;
    throw spdc::ConfigError("--sweep must be one of alpha|ws|w0|L, got '" + name + "'");
}

int cmd_schmidt(const CommonOptions& opt, const std::string& args, const std::string& sweep,
                const std::string& range, int kernel_samples, int dump_modes) {
    Timer timer;
    const auto cfg_file = load_config(opt);
    const auto cfg = cfg_file.biphoton();
    const spdc::SweepGridPolicy grid_policy{kernel_samples, cfg_file.grid_halfwidth()};

    std::vector<double> values;
    spdc::SweepParameter param = spdc::SweepParameter::azimuth_deg;
    if (!sweep.empty()) {
        param = parse_sweep_parameter(sweep);
        values = parse_range(range);
    } else {
        values.push_back(spdc::rad_to_deg(cfg.crystal.azimuth_rad));
    }

    const auto points = spdc::schmidt_sweep(cfg, param, values, grid_policy, opt.threads);
    std::vector<std::vector<double>> rows;
    for (const auto& p : points) {
        rows.push_back({p.param, p.schmidt_number});
        std::cout << spdc::sweep_parameter_name(param) << "=" << spdc::format_double(p.param)
                  << " K=" << spdc::format_double(p.schmidt_number) << "\n";
    }

    prepare_prefix(opt.out_prefix);
    const std::string csv = opt.out_prefix + ".csv";
    spdc::write_csv(csv, "param,K", rows);
    std::cout << "wrote " << csv << "\n";
    std::vector<std::string> outputs{csv};

    if (dump_modes > 0) {
        const auto grid = grid_policy.resolve(cfg);
        const auto kernel = spdc::build_kernel(cfg, grid, opt.threads);
        const auto modes = spdc::schmidt_modes(kernel, dump_modes);
        for (size_t k = 0; k < modes.intensities.size(); ++k) {
            spdc::Image img{grid.half_width, grid.samples_per_axis, modes.intensities[k]};
            double peak = 0.0;
            for (const double v : img.pixels) peak = std::max(peak, v);
            if (peak > 0.0)
                for (auto& v : img.pixels) v /= peak;
            char suffix[24];
            std::snprintf(suffix, sizeof(suffix), "_mode_%02zu.pgm", k);
            const std::string path = opt.out_prefix + suffix;
            spdc::write_pgm16(path, img);
            outputs.push_back(path);
        }
        std::cout << "wrote " << modes.intensities.size() << " mode images\n";
    }

    emit_manifest(opt.out_prefix, "schmidt", args, grid_policy_note(grid_policy), std::move(outputs),
                  cfg_file, timer.seconds());
    return 0;
}

int cmd_concurrence(const CommonOptions& opt, const std::string& args, const std::string& sweep,
                    const std::string& range, int kernel_samples, std::optional<double> rho_s_deg,
                    std::optional<double> rho_i_deg, bool dump_rho) {
    Timer timer;
    const auto cfg_file = load_config(opt);
    const auto base = cfg_file.biphoton();
    const spdc::SweepGridPolicy grid_policy{kernel_samples, cfg_file.grid_halfwidth()};

    spdc::TwoCrystalConfig cfg = spdc::TwoCrystalConfig::from(base);
    if (rho_s_deg) cfg.signal_walkoff_rad = spdc::deg_to_rad(*rho_s_deg);
    if (rho_i_deg) cfg.idler_walkoff_rad = spdc::deg_to_rad(*rho_i_deg);

    std::vector<double> values;
    spdc::SweepParameter param = spdc::SweepParameter::crystal_length_mm;
    if (!sweep.empty()) {
        param = parse_sweep_parameter(sweep);
        if (param == spdc::SweepParameter::azimuth_deg)
            throw spdc::ConfigError("concurrence sweeps run over w0, L or ws; alpha is fixed by the two crystals");
        values = parse_range(range);
    } else {
        values.push_back(base.crystal.length_mm);
    }

    const auto points = spdc::concurrence_sweep(cfg, param, values, grid_policy, opt.threads);
    std::vector<std::vector<double>> rows;
    for (const auto& p : points) {
        rows.push_back({p.param, p.xi_abs, p.purity, p.concurrence});
        std::cout << spdc::sweep_parameter_name(param) << "=" << spdc::format_double(p.param)
                  << " xi_abs=" << spdc::format_double(p.xi_abs)
                  << " purity=" << spdc::format_double(p.purity)
                  << " concurrence=" << spdc::format_double(p.concurrence) << "\n";
    }

    prepare_prefix(opt.out_prefix);
    const std::string csv = opt.out_prefix + ".csv";
    spdc::write_csv(csv, "param,xi_abs,purity,concurrence", rows);
    std::cout << "wrote " << csv << "\n";
    std::vector<std::string> outputs{csv};

    if (dump_rho) {
        const auto modes = spdc::crystal_modes(cfg, grid_policy.resolve(cfg.base), opt.threads);
        const auto state = spdc::polarization_state(spdc::overlap_xi(modes.first, modes.second));
        const std::string path = opt.out_prefix + ".rho.txt";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write '" + path + "'");
        out.precision(17);
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                const auto z = state.rho(r, c);
                out << (c ? " " : "") << std::scientific << z.real() << " " << z.imag();
            }
            out << "\n";
        }
        outputs.push_back(path);
        std::cout << "wrote " << path << "\n";
    }

    emit_manifest(opt.out_prefix, "concurrence", args, grid_policy_note(grid_policy), std::move(outputs),
                  cfg_file, timer.seconds());
    return 0;
}

// Fast shape checks of the numerical core, shippable with the binary.
int cmd_selftest() {
    int failures = 0;
    auto check = [&failures](bool ok, const char* name) {
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };
    using spdc::Wavevector;

    {
        const auto axis = spdc::MomentumGrid{1.0, 3}.axis();
        check(axis == std::vector<double>({-1.0, 0.0, 1.0}), "momentum axis {-1,0,1}");
        const auto axis5 = spdc::MomentumGrid{2.0, 5}.axis();
        check(axis5 == std::vector<double>({-2.0, -1.0, 0.0, 1.0, 2.0}), "momentum axis {-2..2}");
        bool threw = false;
        try {
            spdc::MomentumGrid{1.0, 4}.validate();
        } catch (const std::invalid_argument&) {
            threw = true;
        }
        check(threw, "even sample count rejected");
    }
    {
        spdc::BiphotonConfig cfg;
        check(spdc::phase_mismatch({0, 0}, {0, 0}, cfg.crystal) == 0.0, "phase mismatch vanishes at origin");
        spdc::CrystalGeometry flat = cfg.crystal;
        flat.walkoff_rad = 0.0;
        double d1 = spdc::phase_mismatch({0.01, -0.02}, {0.005, 0.03}, flat);
        flat.azimuth_rad = 1.234;
        double d2 = spdc::phase_mismatch({0.01, -0.02}, {0.005, 0.03}, flat);
        check(d1 == d2, "no walk-off: mismatch independent of azimuth");
        check(spdc::mode_amplitude({0, 0}, {0, 0}, cfg) == std::complex<double>(1.0, 0.0),
              "amplitude is 1 at the origin");
        spdc::BiphotonConfig no_filter = cfg;
        no_filter.optics.filter_waist_um = 0.0;
        check(std::abs(spdc::mode_amplitude({0.01, 0.02}, {-0.01, 0.01}, no_filter)) <= 1.0,
              "amplitude bounded by 1");
    }
    {
        spdc::BiphotonConfig cfg;
        cfg.crystal.walkoff_rad = 0.0;
        const spdc::ModeFunction f0(cfg);
        cfg.crystal.azimuth_rad = 2.5;
        const spdc::ModeFunction f1(cfg);
        check(f0(0.013, -0.007, -0.004, 0.009) == f1(0.013, -0.007, -0.004, 0.009),
              "no walk-off: amplitude independent of azimuth");
    }
    {
        spdc::BiphotonConfig cfg;
        const auto grid = spdc::make_momentum_grid(cfg, 33);
        const auto mode = spdc::signal_mode(cfg, grid);
        const auto w = spdc::trapezoid_weights(grid.samples_per_axis, grid.spacing());
        double power = 0.0;
        for (int iy = 0; iy < 33; ++iy)
            for (int ix = 0; ix < 33; ++ix) power += w[iy] * w[ix] * std::norm(mode.at(iy, ix));
        check(std::abs(power - 1.0) < 1.0e-12, "signal mode normalized");
    }
    {
        spdc::BiphotonConfig cfg;
        const auto det = spdc::make_detector_grid(cfg, spdc::make_momentum_grid(cfg, 33));
        const auto image = spdc::coincidence_image(cfg, det);
        double peak = 0.0;
        bool nonnegative = true;
        for (const double v : image.pixels) {
            peak = std::max(peak, v);
            nonnegative = nonnegative && v >= 0.0;
        }
        check(nonnegative && peak == 1.0, "coincidence image nonnegative with unit peak");
        const auto shape = spdc::ellipticity(image);
        check(shape.axis_ratio >= 1.0, "ellipticity ratio >= 1");
    }
    {
        spdc::CrystalGeometry g;
        g.walkoff_rad = 0.0;
        check(spdc::mode_orientation_beta(g).degenerate, "orientation degenerate at zero walk-off");
        g.walkoff_rad = spdc::deg_to_rad(80.0);
        check(std::abs(spdc::mode_orientation_beta(g).beta_rad) < spdc::deg_to_rad(1.0),
              "orientation angle closes for large walk-off");
    }
    {
        spdc::BiphotonConfig iso;
        iso.crystal.walkoff_rad = 0.0;
        iso.crystal.noncollinear_rad = 0.0;
        spdc::PolarGrid polar{101, spdc::default_momentum_halfwidth(iso), 128};
        const auto spectrum = spdc::oam_weights(spdc::spiral_coefficients(iso, polar, 5));
        bool others_zero = true;
        for (int m = -5; m <= 5; ++m)
            if (m != 0) others_zero = others_zero && spectrum.weight(m) < 1.0e-12;
        check(std::abs(spectrum.weight(0) - 1.0) < 1.0e-9 && others_zero,
              "isotropic mode carries only m=0");
    }
    {
        // near-separable kernel: thin crystal and point-like pump leave
        // only the factorized collection filters
        spdc::BiphotonConfig sep;
        sep.pump.waist_um = 1.0e-6;
        sep.crystal.length_mm = 1.0e-9;
        sep.optics.filter_waist_um = 50.0;
        const spdc::MomentumGrid grid{0.08, 9};
        const auto spectrum = spdc::schmidt_spectrum(spdc::build_kernel(sep, grid));
        check(std::abs(spectrum.schmidt_number - 1.0) < 1.0e-6, "separable kernel has K = 1");
    }
    {
        const auto bell = spdc::polarization_state({1.0, 0.0});
        check(bell.purity == 1.0 && bell.concurrence == 1.0, "xi = 1 gives pure Bell pair");
        const auto mixed = spdc::polarization_state({0.0, 0.0});
        check(mixed.purity == 0.5 && mixed.concurrence == 0.0, "xi = 0 gives even mixture");
        const auto state = spdc::polarization_state(std::polar(0.7, 0.3));
        check(state.purity == (1.0 + state.concurrence * state.concurrence) / 2.0,
              "purity identity");
    }
    {
        spdc::BiphotonConfig cfg;
        cfg.crystal.walkoff_rad = 0.0;
        auto two = spdc::TwoCrystalConfig::from(cfg);
        const spdc::MomentumGrid grid{spdc::default_momentum_halfwidth(cfg), 9};
        const auto modes = spdc::crystal_modes(two, grid);
        const auto xi = spdc::overlap_xi(modes.first, modes.second);
        check(std::abs(std::abs(xi) - 1.0) < 1.0e-9, "no walk-off: crystals overlap fully");
        check(std::abs(xi) <= 1.0 + 1.0e-12, "|xi| bounded by 1");
    }

    std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
    return failures == 0 ? 0 : kExitNumerical;
}

} // namespace

int main(int argc, char** argv) {
    // Determinism: LAPACK must not spawn its own pool; --threads governs
    // all parallelism in this binary.
    setenv("OPENBLAS_NUM_THREADS", "1", 0);

    CLI::App app{"spatial quantum state of SPDC photon pairs with Poynting-vector walk-off"};
    app.require_subcommand(1);

    CommonOptions image_opt, movie_opt, oam_opt, schmidt_opt, conc_opt;
    double alpha_start = 0.0, alpha_stop = 360.0, alpha_step = 15.0;
    std::string oam_sweep_kind, oam_range, schmidt_sweep, schmidt_range, conc_sweep, conc_range;
    int m_max = 10, schmidt_kernel = 33, conc_kernel = 33, dump_modes = 0;
    bool dump_rho = false;
    std::optional<double> rho_s_deg, rho_i_deg;

    auto* image = app.add_subcommand("image", "coincidence-rate image (PGM + CSV)");
    add_common(image, image_opt, "spdcsim_image");

    auto* movie = app.add_subcommand("movie", "numbered image frames over the azimuth");
    add_common(movie, movie_opt, "spdcsim_movie");
    movie->add_option("--alpha-start", alpha_start, "first azimuth (deg)")->default_val(0.0);
    movie->add_option("--alpha-stop", alpha_stop, "last azimuth (deg)")->default_val(360.0);
    movie->add_option("--alpha-step", alpha_step, "azimuth step (deg)")->default_val(15.0);

    auto* oam = app.add_subcommand("oam", "orbital-angular-momentum weights (CSV)");
    add_common(oam, oam_opt, "spdcsim_oam");
    oam->add_option("--sweep", oam_sweep_kind, "alpha (requires --range)");
    oam->add_option("--range", oam_range, "START:STOP:STEP in degrees");
    oam->add_option("--m-max", m_max, "harmonic window half-width")->default_val(10);

    auto* schmidt = app.add_subcommand("schmidt", "Schmidt number (CSV)");
    add_common(schmidt, schmidt_opt, "spdcsim_schmidt");
    schmidt->add_option("--sweep", schmidt_sweep, "alpha|ws|w0|L");
    schmidt->add_option("--range", schmidt_range, "START:STOP:STEP");
    schmidt->add_option("--kernel-samples", schmidt_kernel, "kernel samples per axis (odd)")->default_val(33);
    schmidt->add_option("--dump-modes", dump_modes, "write the leading Schmidt modes as PGM");

    auto* conc = app.add_subcommand("concurrence", "two-crystal polarization concurrence (CSV)");
    add_common(conc, conc_opt, "spdcsim_concurrence");
    conc->add_option("--sweep", conc_sweep, "w0|L|ws");
    conc->add_option("--range", conc_range, "START:STOP:STEP");
    conc->add_option("--kernel-samples", conc_kernel, "kernel samples per axis (odd)")->default_val(33);
    conc->add_option("--rho-s-deg", rho_s_deg, "signal walk-off in the second crystal (deg)");
    conc->add_option("--rho-i-deg", rho_i_deg, "idler walk-off in the second crystal (deg)");
    conc->add_flag("--dump-rho", dump_rho, "write the 4x4 polarization density matrix");

    app.add_subcommand("selftest", "run the built-in shape checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    const std::string args = args_without_config(argc, argv);
    try {
        if (image->parsed()) return cmd_image(image_opt, args);
        if (movie->parsed()) return cmd_movie(movie_opt, args, alpha_start, alpha_stop, alpha_step);
        if (oam->parsed()) {
            if (!oam_sweep_kind.empty() && oam_sweep_kind != "alpha")
                throw spdc::ConfigError("oam sweeps run over the azimuth only (--sweep alpha)");
            if (!oam_sweep_kind.empty() && oam_range.empty())
                throw spdc::ConfigError("oam --sweep requires --range START:STOP:STEP");
            return cmd_oam(oam_opt, args, !oam_sweep_kind.empty(), oam_range, m_max);
        }
        if (schmidt->parsed()) {
            if (!schmidt_sweep.empty() && schmidt_range.empty())
                throw spdc::ConfigError("schmidt --sweep requires --range START:STOP:STEP");
            return cmd_schmidt(schmidt_opt, args, schmidt_sweep, schmidt_range, schmidt_kernel, dump_modes);
        }
        if (conc->parsed()) {
            if (!conc_sweep.empty() && conc_range.empty())
                throw spdc::ConfigError("concurrence --sweep requires --range START:STOP:STEP");
            return cmd_concurrence(conc_opt, args, conc_sweep, conc_range, conc_kernel, rho_s_deg,
                                   rho_i_deg, dump_rho);
        }
        return cmd_selftest();
    } catch (const spdc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
