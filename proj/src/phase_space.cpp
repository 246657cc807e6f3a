#include "kerrlab/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kerrlab/error.hpp"
#include "kerrlab/parallel.hpp"
#include "kerrlab/random.hpp"

namespace kerrlab {

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw Error(ErrorKind::invalid_argument, "grid needs at least one point");
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) v[i] = lo + step * i;
    return v;
}

void require_single_mode(const ModeLayout& layout) {
    if (layout.size() != 1 || layout[0].kind != ModeKind::bosonic) {
        throw Error(ErrorKind::dimension_mismatch, "phase-space functions need a single bosonic mode");
    }
}

double trapezoid_weight(std::size_t i, std::size_t n) { return (i == 0 || i + 1 == n) ? 0.5 : 1.0; }

}  // namespace

GridSpec GridSpec::square(double half_width, int points) {
    return GridSpec{-half_width, half_width, points, -half_width, half_width, points};
}

std::vector<double> GridSpec::x_values() const { return linspace(x_min, x_max, x_points); }
std::vector<double> GridSpec::p_values() const { return linspace(p_min, p_max, p_points); }

double WignerGrid::integral() const {
    if (x_values.size() < 2 || p_values.size() < 2) return 0.0;
    const double dx = (x_values.back() - x_values.front()) / static_cast<double>(x_values.size() - 1);
    const double dp = (p_values.back() - p_values.front()) / static_cast<double>(p_values.size() - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < x_values.size(); ++i) {
        for (std::size_t j = 0; j < p_values.size(); ++j) {
            acc += trapezoid_weight(i, x_values.size()) * trapezoid_weight(j, p_values.size()) *
                   values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return acc * dx * dp;
}

double wigner_at(const DensityMatrix& rho, double x, double p) {
    require_single_mode(rho.layout());
    const Matrix& r = rho.matrix();
    const auto dim = r.rows();
    // Laguerre-free recursion for the Wigner functions of |m><n|, alpha = (x + i p)/sqrt(2).
    const cplx a(x * M_SQRT1_2, p * M_SQRT1_2);
    const cplx a2 = 2.0 * a;
    const cplx a2c = 2.0 * std::conj(a);
    std::vector<cplx> w(static_cast<std::size_t>(dim));
    w[0] = std::exp(-2.0 * std::norm(a)) / std::numbers::pi;
    double acc = r(0, 0).real() * w[0].real();
    for (Eigen::Index n = 1; n < dim; ++n) {
        w[n] = a2 * w[n - 1] / std::sqrt(static_cast<double>(n));
        acc += 2.0 * (r(0, n) * w[n]).real();
    }
    for (Eigen::Index m = 1; m < dim; ++m) {
        const double sm = std::sqrt(static_cast<double>(m));
        cplx temp = w[m];
        w[m] = (a2c * temp - sm * w[m - 1]) / sm;
        acc += (r(m, m) * w[m]).real();
        for (Eigen::Index n = m + 1; n < dim; ++n) {
            const cplx next = (a2 * w[n - 1] - sm * temp) / std::sqrt(static_cast<double>(n));
            temp = w[n];
            w[n] = next;
            acc += 2.0 * (r(m, n) * w[n]).real();
        }
    }
    return acc;
}

WignerGrid wigner(const DensityMatrix& rho, const GridSpec& grid, bool check_normalization) {
    require_single_mode(rho.layout());
    WignerGrid out{grid.x_values(), grid.p_values(), {}};
    out.values.resize(static_cast<Eigen::Index>(out.x_values.size()), static_cast<Eigen::Index>(out.p_values.size()));
    parallel_for(out.x_values.size(), [&](std::size_t i) {
        for (std::size_t j = 0; j < out.p_values.size(); ++j) {
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                wigner_at(rho, out.x_values[i], out.p_values[j]);
        }
    });
    if (check_normalization) {
        const double integral = out.integral();
        if (std::abs(integral - 1.0) > 1e-2) {
            throw Error(ErrorKind::grid_too_coarse, "Wigner grid integrates to " + std::to_string(integral));
        }
    }
    return out;
}

WignerGrid wigner(const StateVector& state, const GridSpec& grid, bool check_normalization) {
    return wigner(DensityMatrix::from_pure(state), grid, check_normalization);
}

WignerMinimum wigner_min(const WignerGrid& grid) {
    if (grid.values.size() == 0) throw Error(ErrorKind::invalid_argument, "empty Wigner grid");
    Eigen::Index i = 0, j = 0;
    const double v = grid.values.minCoeff(&i, &j);
    return {v, grid.x_values[static_cast<std::size_t>(i)], grid.p_values[static_cast<std::size_t>(j)]};
}

std::vector<double> hermite_functions(int n_max, double x) {
    std::vector<double> psi(static_cast<std::size_t>(n_max) + 1);
    psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (n_max >= 1) psi[1] = std::sqrt(2.0) * x * psi[0];
    for (int n = 2; n <= n_max; ++n) {
        psi[n] = std::sqrt(2.0 / n) * x * psi[n - 1] - std::sqrt((n - 1.0) / n) * psi[n - 2];
    }
    return psi;
}

std::vector<double> quadrature_pdf(const DensityMatrix& rho, double lo_phase, const std::vector<double>& x_grid) {
    require_single_mode(rho.layout());
    const auto dim = rho.matrix().rows();
    std::vector<double> out(x_grid.size());
    Vector v(dim);
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const auto psi = hermite_functions(static_cast<int>(dim) - 1, x_grid[i]);
        for (Eigen::Index n = 0; n < dim; ++n) v(n) = std::polar(psi[n], lo_phase * static_cast<double>(n));
        out[i] = std::max(0.0, v.dot(rho.matrix() * v).real());
    }
    return out;
}

std::vector<double> quadrature_pdf(const StateVector& state, double lo_phase, const std::vector<double>& x_grid) {
    require_single_mode(state.layout());
    const auto dim = static_cast<Eigen::Index>(state.dim());
    std::vector<double> out(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const auto psi = hermite_functions(static_cast<int>(dim) - 1, x_grid[i]);
        cplx amp = 0.0;
        for (Eigen::Index n = 0; n < dim; ++n) amp += state.amplitudes()(n) * std::polar(psi[n], -lo_phase * static_cast<double>(n));
        out[i] = std::norm(amp);
    }
    return out;
}

void NoiseModel::validate() const {
    if (!(sigma_fraction >= 0.0) || !std::isfinite(sigma_fraction)) {
        throw Error(ErrorKind::invalid_argument, "sigma_fraction must be >= 0");
    }
    if (!(eta > 0.0 && eta <= 1.0)) throw Error(ErrorKind::invalid_argument, "eta must lie in (0, 1]");
}

double NoiseModel::gain() const { return kind == NoiseKind::efficiency ? std::sqrt(eta) : 1.0; }

double NoiseModel::added_std() const {
    switch (kind) {
        case NoiseKind::none: return 0.0;
        case NoiseKind::additive_gaussian: return sigma_fraction * M_SQRT1_2;
        case NoiseKind::efficiency: return std::sqrt((1.0 - eta) / 2.0);
    }
    return 0.0;
}

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::none: return "none";
        case NoiseKind::additive_gaussian: return "additive_gaussian";
        case NoiseKind::efficiency: return "efficiency";
    }
    return "none";
}

NoiseKind noise_kind_from_string(const std::string& name) {
    if (name == "none") return NoiseKind::none;
    if (name == "additive_gaussian") return NoiseKind::additive_gaussian;
    if (name == "efficiency") return NoiseKind::efficiency;
    throw Error(ErrorKind::invalid_argument, "unknown noise kind '" + name + "'");
}

std::vector<double> uniform_phases(int count) {
    if (count < 1) throw Error(ErrorKind::invalid_argument, "phase count must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) out[j] = std::numbers::pi * j / count;
    return out;
}

QuadratureDataset homodyne_sample(const DensityMatrix& rho, const std::vector<double>& lo_phases, int n_per_phase,
                                  const NoiseModel& noise, std::uint64_t seed) {
    require_single_mode(rho.layout());
    noise.validate();
    if (n_per_phase < 1) throw Error(ErrorKind::invalid_argument, "n_per_phase must be >= 1");
    if (lo_phases.empty()) throw Error(ErrorKind::invalid_argument, "need at least one phase");
    for (double phase : lo_phases) {
        if (!(phase >= 0.0 && phase < std::numbers::pi)) {
            throw Error(ErrorKind::invalid_argument, "local-oscillator phases must lie in [0, pi)");
        }
    }

    const double half_width = std::sqrt(2.0 * mean_photon_number(rho, 0)) + 6.0;
    const auto x_grid = linspace(-half_width, half_width, kSamplerGridPoints);
    const double dx = x_grid[1] - x_grid[0];
    const auto per_phase = static_cast<std::size_t>(n_per_phase);

    QuadratureDataset data;
    data.noise = noise;
    data.seed = seed;
    data.records.resize(lo_phases.size() * per_phase);

    parallel_for(lo_phases.size(), [&](std::size_t k) {
        const auto pdf = quadrature_pdf(rho, lo_phases[k], x_grid);
        std::vector<double> cdf(pdf.size(), 0.0);
        for (std::size_t i = 1; i < pdf.size(); ++i) cdf[i] = cdf[i - 1] + 0.5 * (pdf[i] + pdf[i - 1]) * dx;
        const double total = cdf.back();
        for (auto& c : cdf) c /= total;

        Rng rng(derive_seed(seed, k));
        for (std::size_t s = 0; s < per_phase; ++s) {
            const double u = rng.uniform();
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            std::size_t hi = static_cast<std::size_t>(it - cdf.begin());
            hi = std::clamp<std::size_t>(hi, 1, cdf.size() - 1);
            const std::size_t lo = hi - 1;
            const double span = cdf[hi] - cdf[lo];
            const double frac = span > 0.0 ? (u - cdf[lo]) / span : 0.5;
            double x = x_grid[lo] + frac * dx;
            if (noise.kind != NoiseKind::none) x = noise.gain() * x + noise.added_std() * rng.normal();
            data.records[k * per_phase + s] = {lo_phases[k], x};
        }
    });
    return data;
}

QuadratureDataset homodyne_sample(const StateVector& state, const std::vector<double>& lo_phases, int n_per_phase,
                                  const NoiseModel& noise, std::uint64_t seed) {
    return homodyne_sample(DensityMatrix::from_pure(state), lo_phases, n_per_phase, noise, seed);
}

}  // namespace kerrlab
