#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kerrlab/phase_space.hpp"
#include "kerrlab/state.hpp"

namespace kerrlab {

struct ReconstructionConfig {
    int cutoff = 16;
    int max_iterations = 5000;
    double convergence_tol = 1e-6;  ///< trace distance between successive iterates
    int bin_count = 128;
    /// Smear each bin projector with the dataset's noise model instead of assuming ideal detection.
    bool noise_aware = false;
    /// Throw NonConvergence when max_iterations is hit; otherwise return the last iterate.
    bool require_convergence = true;

    void validate() const;
};

struct ReconstructionResult {
    DensityMatrix rho;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    std::vector<double> log_likelihood;  ///< one entry per iterate, starting with the initial state
};

/// Quadrature records histogrammed per distinct local-oscillator phase.
struct BinnedQuadratures {
    std::vector<double> phases;
    std::vector<double> edges;                     ///< bin_count + 1 shared bin edges
    std::vector<std::vector<double>> counts;       ///< counts[phase][bin]
    std::vector<std::size_t> record_phase;         ///< phase index of each record
    std::vector<std::size_t> record_bin;           ///< bin index of each record
    double total = 0.0;
};

/// Throws InsufficientPhases when fewer than 8 distinct phases are present.
BinnedQuadratures bin_quadratures(const QuadratureDataset& data, int bin_count);

/// Iterative maximum likelihood (R rho R) over the binned quadrature POVM.
/// Each step falls back to the diluted update (I + eps R) rho (I + eps R)
/// when the undiluted one would lower the likelihood.
ReconstructionResult reconstruct_maxlik(const QuadratureDataset& data, const ReconstructionConfig& config,
                                        const std::optional<DensityMatrix>& initial = std::nullopt);

ReconstructionResult reconstruct_binned(const BinnedQuadratures& binned, const NoiseModel& noise,
                                        const ReconstructionConfig& config,
                                        const std::optional<DensityMatrix>& initial = std::nullopt);

struct NegativityReport {
    double min_wigner = 0.0;
    double x = 0.0;
    double p = 0.0;
    double bootstrap_std = 0.0;
    double significance_sigmas = 0.0;
    bool identified = false;
    int resamples = 0;
};

/// Wigner minimum of `rho` on `grid` with a nonparametric bootstrap: records are
/// resampled with replacement within each phase, the reconstruction is rerun
/// (warm-started at `rho`), and the spread of the grid minimum gives the std.
/// identified <=> min + 3 std < 0.
NegativityReport negativity_report(const DensityMatrix& rho, const GridSpec& grid, int bootstrap_resamples,
                                   const QuadratureDataset& data, const ReconstructionConfig& config,
                                   std::uint64_t seed);

double trace_distance(const Matrix& a, const Matrix& b);

}  // namespace kerrlab
