#include "spdc/schmidt.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "spdc/mode_function.hpp"
#include "spdc/parallel.hpp"

namespace spdc {

namespace {

// Keep the LAPACK backend single-threaded: our own --threads flag owns
// parallelism, and outputs must not depend on the BLAS thread pool.
void pin_blas_threads() {
    static const bool done = [] {
        setenv("OPENBLAS_NUM_THREADS", "1", 0);
        return true;
    }();
    (void)done;
}

// Flattened product trapezoid weights, flat = iy * n + ix.
std::vector<double> flat_weights(const MomentumGrid& grid) {
    const auto w1 = trapezoid_weights(grid.samples_per_axis, grid.spacing());
    const int n = grid.samples_per_axis;
    std::vector<double> w(static_cast<size_t>(n) * n);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            w[static_cast<size_t>(iy) * n + ix] = w1[static_cast<size_t>(iy)] * w1[static_cast<size_t>(ix)];
    return w;
}

} // namespace

KernelMatrix build_kernel(const BiphotonConfig& cfg, const MomentumGrid& grid, int threads,
                          size_t max_flat_dim) {
    grid.validate();
    const int n = grid.samples_per_axis;
    const size_t dim = static_cast<size_t>(n) * n;
    if (dim > max_flat_dim)
        throw std::invalid_argument("kernel: flattened dimension " + std::to_string(dim) +
                                    " exceeds the cap " + std::to_string(max_flat_dim));

    const ModeFunction mode(cfg);
    const auto axis = grid.axis();
    const auto w = flat_weights(grid);
    std::vector<double> sqrt_w(dim);
    for (size_t i = 0; i < dim; ++i) sqrt_w[i] = std::sqrt(w[i]);

    KernelMatrix kernel{n, grid, grid.spacing() * grid.spacing(), {}};
    kernel.a.resize(dim * dim);
    parallel_for(static_cast<int>(dim), threads, [&](int row) {
        const double py = axis[static_cast<size_t>(row) / n];
        const double px = axis[static_cast<size_t>(row) % n];
        std::complex<double>* out = kernel.a.data() + static_cast<size_t>(row) * dim;
        for (size_t col = 0; col < dim; ++col) {
            const double qy = axis[col / n];
            const double qx = axis[col % n];
            out[col] = sqrt_w[static_cast<size_t>(row)] * sqrt_w[col] * mode(px, py, qx, qy);
        }
    });
    return kernel;
}

std::vector<double> singular_values(const KernelMatrix& kernel) {
    pin_blas_threads();
    const lapack_int dim = static_cast<lapack_int>(kernel.dim());
    if (kernel.a.size() != kernel.dim() * kernel.dim())
        throw std::invalid_argument("kernel: storage size does not match dimension");

    // zgesdd destroys its input; the row-major buffer is handed over as its
    // column-major transpose, which has the same singular values.
    std::vector<std::complex<double>> work = kernel.a;
    std::vector<double> sigma(static_cast<size_t>(dim));
    const lapack_int info =
        LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', dim, dim,
                       reinterpret_cast<lapack_complex_double*>(work.data()), dim, sigma.data(),
                       nullptr, 1, nullptr, 1);
    if (info != 0)
        throw std::runtime_error("zgesdd failed to converge (info=" + std::to_string(info) + ")");
    return sigma;
}

SchmidtSpectrum schmidt_spectrum(const KernelMatrix& kernel) {
    const auto sigma = singular_values(kernel);
    std::vector<double> lambdas(sigma.size());
    double total = 0.0;
    for (size_t i = 0; i < sigma.size(); ++i) {
        lambdas[i] = sigma[i] * sigma[i];
        total += lambdas[i];
    }
    if (!(total > 0.0)) throw std::runtime_error("schmidt spectrum: kernel has zero norm");

    SchmidtSpectrum out;
    out.lambdas.reserve(lambdas.size());
    double kept = 0.0;
    for (const double l : lambdas) {
        const double normalized = l / total;
        if (normalized < 1.0e-12) break; // descending order
        out.lambdas.push_back(normalized);
        kept += normalized;
    }
    double purity = 0.0;
    for (auto& l : out.lambdas) {
        l /= kept;
        purity += l * l;
    }
    out.schmidt_number = 1.0 / purity;
    return out;
}

SchmidtModes schmidt_modes(const KernelMatrix& kernel, int count) {
    pin_blas_threads();
    const lapack_int dim = static_cast<lapack_int>(kernel.dim());
    const int n = kernel.samples_per_axis;
    count = std::min<int>(count, static_cast<int>(dim));

    // Full factorization of the transpose: its right singular vectors
    // (rows of VT) are the signal-side modes of the row-major kernel.
    std::vector<std::complex<double>> work = kernel.a;
    std::vector<std::complex<double>> u(static_cast<size_t>(dim) * dim);
    std::vector<std::complex<double>> vt(static_cast<size_t>(dim) * dim);
    std::vector<double> sigma(static_cast<size_t>(dim));
    const lapack_int info =
        LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', dim, dim,
                       reinterpret_cast<lapack_complex_double*>(work.data()), dim, sigma.data(),
                       reinterpret_cast<lapack_complex_double*>(u.data()), dim,
                       reinterpret_cast<lapack_complex_double*>(vt.data()), dim);
    if (info != 0)
        throw std::runtime_error("zgesdd failed to converge (info=" + std::to_string(info) + ")");

    double total = 0.0;
    for (const double s : sigma) total += s * s;

    SchmidtModes out;
    out.samples_per_axis = n;
    for (int k = 0; k < count; ++k) {
        out.lambdas.push_back(sigma[static_cast<size_t>(k)] * sigma[static_cast<size_t>(k)] / total);
        std::vector<double> intensity(static_cast<size_t>(dim));
        for (lapack_int i = 0; i < dim; ++i) {
            // VT is column-major: row k of VT sits at stride dim.
            intensity[static_cast<size_t>(i)] =
                std::norm(vt[static_cast<size_t>(i) * dim + static_cast<size_t>(k)]);
        }
        out.intensities.push_back(std::move(intensity));
    }
    return out;
}

double purity_from_field(const JointFieldFn& field, const MomentumGrid& grid) {
    grid.validate();
    const int n = grid.samples_per_axis;
    const size_t dim = static_cast<size_t>(n) * n;
    const auto axis = grid.axis();
    const auto w = flat_weights(grid);

    // Tabulate the field once; all sums below run in a fixed order.
    std::vector<std::complex<double>> f(dim * dim);
    for (size_t r = 0; r < dim; ++r) {
        const double py = axis[r / n];
        const double px = axis[r % n];
        for (size_t c = 0; c < dim; ++c)
            f[r * dim + c] = field(px, py, axis[c / n], axis[c % n]);
    }

    double power = 0.0;
    for (size_t r = 0; r < dim; ++r)
        for (size_t c = 0; c < dim; ++c)
            power += w[r] * w[c] * std::norm(f[r * dim + c]);
    if (!(power > 0.0)) throw std::runtime_error("purity oracle: field has zero power");

    double purity = 0.0;
    for (size_t r = 0; r < dim; ++r) {
        for (size_t rp = 0; rp < dim; ++rp) {
            std::complex<double> overlap{};
            const std::complex<double>* fr = f.data() + r * dim;
            const std::complex<double>* frp = f.data() + rp * dim;
            for (size_t c = 0; c < dim; ++c) overlap += w[c] * fr[c] * std::conj(frp[c]);
            purity += w[r] * w[rp] * std::norm(overlap);
        }
    }
    return purity / (power * power);
}

double purity_oracle(const BiphotonConfig& cfg, const MomentumGrid& grid) {
    if (grid.samples_per_axis > 17)
        throw std::invalid_argument("purity oracle: meant for small grids (n <= 17)");
    const ModeFunction mode(cfg);
    return purity_from_field(
        [&mode](double px, double py, double qx, double qy) { return mode(px, py, qx, qy); }, grid);
}

std::vector<SchmidtSweepPoint> schmidt_sweep(const BiphotonConfig& base, SweepParameter param,
                                             std::span<const double> values,
                                             const SweepGridPolicy& grid_policy, int threads) {
    std::vector<SchmidtSweepPoint> out;
    out.reserve(values.size());
    for (const double v : values) {
        const BiphotonConfig cfg = with_parameter(base, param, v);
        const auto spectrum = schmidt_spectrum(build_kernel(cfg, grid_policy.resolve(cfg), threads));
        out.push_back({v, spectrum.schmidt_number});
    }
    return out;
}

} // namespace spdc
