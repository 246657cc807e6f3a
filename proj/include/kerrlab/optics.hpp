#pragma once

#include "kerrlab/state.hpp"

namespace kerrlab {

/// Couplings (rad per unit time) and interaction time of one Kerr cell.
struct KerrParams {
    double chi = 0.0;      ///< cross-Kerr coupling
    double chi_s = 0.0;    ///< self-Kerr coupling of the signal
    double omega_s = 0.0;  ///< signal frequency
    double T = 0.0;        ///< interaction time

    void validate() const;
};

struct ConditionalKerrPhase {
    double phi = 0.0;
};

/// Two-mode beam splitter on equally truncated bosonic modes (a, b):
/// a^dag -> t a^dag + r b^dag, b^dag -> r a^dag + t b^dag with t = sqrt(T), r = i sqrt(1-T).
/// Exact on every photon-number sector n_a + n_b <= cutoff; sectors that do
/// not fit in the truncation are left untouched so the matrix stays unitary.
Matrix beam_splitter(double transmittance, int cutoff_a, int cutoff_b);

/// Acts on (polarization qubit, input path, empty path). |H> stays in the
/// input path, |V> is swapped into the second path. Self-inverse.
Matrix polarizing_bs(int path_cutoff);

/// diag(e^{i n theta})
Matrix phase_shift(double theta, int cutoff);

/// exp(-i T G) on (signal, probe) with
/// G = omega_s n_s + (chi_s/2) n_s (n_s + 1) + 2 chi n_s n_p.
Matrix kerr_evolution(const KerrParams& params, int signal_cutoff, int probe_cutoff);

/// exp(i angle n_a n_b): a probe rotation by `angle` conditioned on photons in mode a.
Matrix cross_phase(double angle, int cutoff_a, int cutoff_b);

/// diag(1, 1, 1, e^{i phi}) in the basis (HH, HV, VH, VV).
Matrix conditional_kerr(ConditionalKerrPhase phase);

}  // namespace kerrlab
