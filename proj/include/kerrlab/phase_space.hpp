#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "kerrlab/state.hpp"

namespace kerrlab {

// Quadrature convention: x_theta = (a e^{-i theta} + a^dag e^{i theta}) / sqrt(2),
// vacuum variance 1/2, and the Wigner function integrates to 1 over dx dp.

struct GridSpec {
    double x_min = -5.0;
    double x_max = 5.0;
    int x_points = 101;
    double p_min = -5.0;
    double p_max = 5.0;
    int p_points = 101;

    static GridSpec square(double half_width, int points);
    std::vector<double> x_values() const;
    std::vector<double> p_values() const;
};

struct WignerGrid {
    std::vector<double> x_values;
    std::vector<double> p_values;
    Eigen::MatrixXd values;  ///< values(i, j) = W(x_i, p_j)

    /// Trapezoidal integral over the grid.
    double integral() const;
};

/// Wigner function of a single bosonic mode at one phase-space point.
double wigner_at(const DensityMatrix& rho, double x, double p);

/// Throws GridTooCoarse if `check_normalization` and the grid integral is off by more than 1e-2.
WignerGrid wigner(const DensityMatrix& rho, const GridSpec& grid, bool check_normalization = true);
WignerGrid wigner(const StateVector& state, const GridSpec& grid, bool check_normalization = true);

struct WignerMinimum {
    double value;
    double x;
    double p;
};

WignerMinimum wigner_min(const WignerGrid& grid);

/// Normalized harmonic-oscillator eigenfunctions psi_0..psi_{n_max} at x.
std::vector<double> hermite_functions(int n_max, double x);

/// p(x | theta) on each grid point.
std::vector<double> quadrature_pdf(const DensityMatrix& rho, double lo_phase, const std::vector<double>& x_grid);
std::vector<double> quadrature_pdf(const StateVector& state, double lo_phase, const std::vector<double>& x_grid);

enum class NoiseKind { none, additive_gaussian, efficiency };

struct NoiseModel {
    NoiseKind kind = NoiseKind::none;
    double sigma_fraction = 0.0;  ///< additive noise std in units of the vacuum quadrature std
    double eta = 1.0;             ///< detection efficiency

    void validate() const;
    /// x -> gain * x + N(0, std^2)
    double gain() const;
    double added_std() const;
};

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

struct QuadratureRecord {
    double lo_phase;
    double value;
};

struct QuadratureDataset {
    std::vector<QuadratureRecord> records;
    NoiseModel noise;
    std::uint64_t seed = 0;
    std::string source_description;
};

/// k phases j*pi/k, j = 0..k-1.
std::vector<double> uniform_phases(int count);

/// Exact inverse-CDF sampling of each phase on 2^14 grid points spanning
/// +-(sqrt(2<n>) + 6), followed by the noise model. Phase k draws from
/// derive_seed(seed, k).
QuadratureDataset homodyne_sample(const DensityMatrix& rho, const std::vector<double>& lo_phases, int n_per_phase,
                                  const NoiseModel& noise, std::uint64_t seed);
QuadratureDataset homodyne_sample(const StateVector& state, const std::vector<double>& lo_phases, int n_per_phase,
                                  const NoiseModel& noise, std::uint64_t seed);

inline constexpr int kSamplerGridPoints = 1 << 14;

}  // namespace kerrlab
