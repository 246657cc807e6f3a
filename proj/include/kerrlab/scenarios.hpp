#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kerrlab/optics.hpp"
#include "kerrlab/state.hpp"

namespace kerrlab {

// ---------------------------------------------------------------------------
// Mach-Zehnder which-path interferometer and the two-cell eraser.
//
// Mode order inside the interferometer pipelines: [arm2, arm3, probe]. The
// signal photon enters on arm 2's port; BS I is beam_splitter(0.5) on
// (arm2, arm3); the first Kerr cell couples arm 3 to the probe; the optional
// second cell couples arm 2; the scan phase Theta is a phase_shift on arm 2;
// BS II recombines (arm2, arm3) and n4 is the photon number left in arm 2.
// ---------------------------------------------------------------------------

enum class JitterMode { gaussian, uniform };

struct InterferometerParams {
    KerrParams kerr;
    std::optional<KerrParams> second_kerr;
    cplx nu{0.0, 0.0};
    double theta_offset = 0.0;
    /// Std of the relative probe phase between the two cells (gaussian mode).
    double coherence_jitter_sigma = 0.0;
    JitterMode jitter_mode = JitterMode::gaussian;
    /// 0 selects default_cutoff(nu).
    int probe_cutoff = 0;

    void validate() const;
    int resolved_probe_cutoff() const;
};

struct FringeScan {
    std::vector<double> theta_values;
    std::vector<double> n4_values;
    double visibility = 0.0;
    double snr_R = 0.0;
};

/// R = 4 |nu| |sin(chi T)|
double snr_R(cplx nu, const KerrParams& kerr);

/// n points evenly spaced on [0, 2 pi).
std::vector<double> uniform_theta_grid(int points);

/// Visibility of a single-harmonic fringe n(theta) = a + b cos(theta) + c sin(theta),
/// fitted by least squares; extrema are a +- sqrt(b^2 + c^2). Needs >= 3 distinct angles.
double fringe_visibility(const std::vector<double>& theta, const std::vector<double>& values);

/// Closed form for one Kerr cell, evaluated at Theta = theta_offset + theta.
double mz_expected_n4_analytic(const InterferometerParams& params, double theta);

FringeScan mz_simulate(const InterferometerParams& params, const std::vector<double>& theta_grid);

/// Two Kerr cells with a random relative probe phase xi between them,
/// averaged over `jitter_trials` draws. Trial i draws from derive_seed(seed, i),
/// so results do not depend on how trials are sharded.
FringeScan eraser_simulate(const InterferometerParams& params, const std::vector<double>& theta_grid,
                           int jitter_trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Conditional cat generation.
// ---------------------------------------------------------------------------

enum class CatOutcome { diagonal /* 45 deg */, antidiagonal /* 135 deg */ };

struct CatResult {
    StateVector probe;
    double probability;
};

/// Photon at 45 deg through a PBS, Kerr cell on the H path, PBS recombination,
/// then a polarization measurement at 45/135 deg. Returns the conditional probe.
CatResult cat_generate(cplx nu, const KerrParams& kerr, CatOutcome outcome, int probe_cutoff = 0);

/// Normalized e^{-i(omega_s + chi_s)T} |nu e^{-2i chi T}> +- |nu>; the prefactor is the
/// signal self-phase picked up on the Kerr path and is 1 for the default couplings.
StateVector cat_reference(cplx nu, const KerrParams& kerr, CatOutcome outcome, int probe_cutoff = 0);

// ---------------------------------------------------------------------------
// GHZ generation from a Bell pair and a third photon at 45 deg.
// ---------------------------------------------------------------------------

enum class BellState { phi_plus, phi_minus, psi_plus, psi_minus };

/// Two polarization qubits, basis (HH, HV, VH, VV).
StateVector bell_state(BellState which);

/// Bell pair on qubits 1-2, |45> on qubit 3, conditional_kerr(phi) on qubits 2-3.
StateVector ghz_generate(BellState which, double phi);

/// Every Bell component |a b> followed by |45> when b = H and |135> when b = V.
StateVector ghz_target(BellState which);

// ---------------------------------------------------------------------------
// Translucent eavesdropping.
// ---------------------------------------------------------------------------

struct QubitState {
    double theta = 0.0;
    cplx h{1.0, 0.0};
    cplx v{0.0, 0.0};

    /// cos(theta)|H> + sin(theta)|V>
    static QubitState from_angle(double theta);
    static QubitState horizontal();
    static QubitState vertical();
    static QubitState diagonal();
    static QubitState antidiagonal();

    QubitState orthogonal() const;
};

std::vector<QubitState> default_alphabet();

/// Layout [u (qubit), p1, p2] with p1/p2 the probe's two paths (cutoff 1).
/// The V-polarized probe enters p1, is split by beam_splitter(transmittance),
/// and the p1 branch meets the transmitted qubit in the polarization-conditional cell.
StateVector eve_probe_state(const QubitState& qubit, double phi, double transmittance = 0.5);

struct EveLetter {
    QubitState qubit;
    StateVector joint_state;
    DensityMatrix eve_rho;  ///< probe paths after tracing out the qubit
    DensityMatrix bob_rho;  ///< qubit after tracing out the probe
    double p_guess;         ///< Helstrom success for qubit vs its orthogonal partner
    double qber;            ///< Bob's error measuring in the preparation basis
};

struct EveReport {
    StateVector joint_state;  ///< state of the first alphabet letter
    double eve_info_bound = 0.0;
    double p_guess = 0.5;
    double bob_qber = 0.0;
    cplx probe_overlap{1.0, 0.0};  ///< <e_H|e_V> of the probe states conditioned on H and V
    std::vector<EveLetter> letters;
};

double binary_entropy(double p);

EveReport eve_analysis(double phi, const std::vector<QubitState>& alphabet, double transmittance = 0.5);

}  // namespace kerrlab
