#include "kerrlab/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "kerrlab/error.hpp"
#include "kerrlab/parallel.hpp"

namespace kerrlab {

namespace {

constexpr std::size_t kArm2 = 0;
constexpr std::size_t kArm3 = 1;
constexpr std::size_t kProbe = 2;
constexpr std::size_t kTrialBlock = 4096;

Vector diagonal_of(const Matrix& m) { return m.diagonal(); }

StateVector interferometer_input(const InterferometerParams& params) {
    return tensor({fock_state(1, 1, "arm2"), fock_state(0, 1, "arm3"),
                   coherent_state(params.nu, params.resolved_probe_cutoff(), "probe")});
}

double n4_after_recombination(const DensityMatrix& signal, double theta) {
    static const Matrix bs = beam_splitter(0.5, 1, 1);
    auto rho = apply_unitary(phase_shift(theta, 1), signal, {kArm2});
    rho = apply_unitary(bs, rho, {kArm2, kArm3});
    return mean_photon_number(rho, kArm2);
}

double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace

void InterferometerParams::validate() const {
    kerr.validate();
    if (second_kerr) second_kerr->validate();
    if (!std::isfinite(theta_offset)) throw Error(ErrorKind::invalid_argument, "theta_offset must be finite");
    if (!(coherence_jitter_sigma >= 0.0)) throw Error(ErrorKind::invalid_argument, "jitter sigma must be >= 0");
    if (!std::isfinite(nu.real()) || !std::isfinite(nu.imag())) throw Error(ErrorKind::invalid_argument, "nu must be finite");
    if (probe_cutoff < 0) throw Error(ErrorKind::invalid_argument, "probe_cutoff must be >= 0");
}

int InterferometerParams::resolved_probe_cutoff() const { return probe_cutoff > 0 ? probe_cutoff : default_cutoff(nu); }

double snr_R(cplx nu, const KerrParams& kerr) { return 4.0 * std::abs(nu) * std::abs(std::sin(kerr.chi * kerr.T)); }

std::vector<double> uniform_theta_grid(int points) {
    if (points < 1) throw Error(ErrorKind::invalid_argument, "theta grid needs at least one point");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) grid[i] = 2.0 * std::numbers::pi * i / points;
    return grid;
}

double fringe_visibility(const std::vector<double>& theta, const std::vector<double>& values) {
    if (theta.size() != values.size()) throw Error(ErrorKind::dimension_mismatch, "theta/value length mismatch");
    const auto n = static_cast<Eigen::Index>(theta.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(theta[i]);
        design(i, 2) = std::sin(theta[i]);
        y(i) = values[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < 3) throw Error(ErrorKind::invalid_argument, "fringe fit needs at least 3 distinct angles");
    const Eigen::Vector3d coef = qr.solve(y);
    const double mean = coef(0);
    const double amplitude = std::hypot(coef(1), coef(2));
    if (mean <= 0.0) return 0.0;
    return amplitude / mean;
}

double mz_expected_n4_analytic(const InterferometerParams& params, double theta) {
    if (params.second_kerr) throw Error(ErrorKind::invalid_argument, "closed form covers a single Kerr cell");
    const auto& k = params.kerr;
    const double n2 = std::norm(params.nu);
    const double envelope = std::exp(-2.0 * n2 * std::pow(std::sin(k.chi * k.T), 2));
    const double phase = (k.omega_s + k.chi_s) * k.T + params.theta_offset + theta + n2 * std::sin(2.0 * k.chi * k.T);
    return 0.5 * (1.0 - envelope * std::cos(phase));
}

FringeScan mz_simulate(const InterferometerParams& params, const std::vector<double>& theta_grid) {
    params.validate();
    const int pc = params.resolved_probe_cutoff();
    const Matrix bs = beam_splitter(0.5, 1, 1);

    auto state = apply_unitary(bs, interferometer_input(params), {kArm2, kArm3});
    state = apply_diagonal(diagonal_of(kerr_evolution(params.kerr, 1, pc)), state, {kArm3, kProbe});
    if (params.second_kerr) {
        state = apply_diagonal(diagonal_of(kerr_evolution(*params.second_kerr, 1, pc)), state, {kArm2, kProbe});
    }

    FringeScan scan;
    scan.theta_values = theta_grid;
    scan.n4_values.reserve(theta_grid.size());
    for (double theta : theta_grid) {
        auto s = apply_diagonal(diagonal_of(phase_shift(params.theta_offset + theta, 1)), state, {kArm2});
        s = apply_unitary(bs, s, {kArm2, kArm3});
        scan.n4_values.push_back(mean_photon_number(s, kArm2));
    }
    scan.visibility = fringe_visibility(scan.theta_values, scan.n4_values);
    scan.snr_R = snr_R(params.nu, params.kerr);
    return scan;
}

FringeScan eraser_simulate(const InterferometerParams& params, const std::vector<double>& theta_grid,
                           int jitter_trials, std::uint64_t seed) {
    params.validate();
    if (!params.second_kerr) throw Error(ErrorKind::invalid_argument, "eraser needs a second Kerr cell");
    if (jitter_trials < 1) throw Error(ErrorKind::invalid_argument, "jitter_trials must be >= 1");
    const int pc = params.resolved_probe_cutoff();
    const Matrix bs = beam_splitter(0.5, 1, 1);

    auto after_first = apply_unitary(bs, interferometer_input(params), {kArm2, kArm3});
    after_first = apply_diagonal(diagonal_of(kerr_evolution(params.kerr, 1, pc)), after_first, {kArm3, kProbe});
    const Vector second_cell = diagonal_of(kerr_evolution(*params.second_kerr, 1, pc));

    const auto trials = static_cast<std::size_t>(jitter_trials);
    const std::size_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<Matrix> block_sums(blocks, Matrix::Zero(4, 4));
    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t end = std::min(trials, (b + 1) * kTrialBlock);
        for (std::size_t i = b * kTrialBlock; i < end; ++i) {
            const double u1 = unit_interval(derive_seed(seed, 2 * i));
            const double u2 = unit_interval(derive_seed(seed, 2 * i + 1));
            double xi = 0.0;
            if (params.jitter_mode == JitterMode::uniform) {
                xi = 2.0 * std::numbers::pi * u1;
            } else if (params.coherence_jitter_sigma > 0.0) {
                xi = params.coherence_jitter_sigma * std::sqrt(-2.0 * std::log1p(-u1)) *
                     std::cos(2.0 * std::numbers::pi * u2);
            }
            auto s = apply_diagonal(diagonal_of(cross_phase(xi, 1, pc)), after_first, {kArm2, kProbe});
            s = apply_diagonal(second_cell, s, {kArm2, kProbe});
            block_sums[b] += partial_trace(s, {kArm2, kArm3}).matrix();
        }
    });
    Matrix total = Matrix::Zero(4, 4);
    for (const auto& m : block_sums) total += m;
    total /= static_cast<double>(trials);
    total = 0.5 * (total + total.adjoint()).eval();
    const DensityMatrix signal(after_first.layout().select({kArm2, kArm3}), total);

    FringeScan scan;
    scan.theta_values = theta_grid;
    scan.n4_values.reserve(theta_grid.size());
    for (double theta : theta_grid) scan.n4_values.push_back(n4_after_recombination(signal, params.theta_offset + theta));
    scan.visibility = fringe_visibility(scan.theta_values, scan.n4_values);
    scan.snr_R = snr_R(params.nu, params.kerr);
    return scan;
}

// --- cat -------------------------------------------------------------------

namespace {
Vector outcome_ket(CatOutcome outcome) {
    return outcome == CatOutcome::diagonal ? Vector(polarization::diagonal()) : Vector(polarization::antidiagonal());
}
}  // namespace

CatResult cat_generate(cplx nu, const KerrParams& kerr, CatOutcome outcome, int probe_cutoff) {
    kerr.validate();
    const int pc = probe_cutoff > 0 ? probe_cutoff : default_cutoff(nu);
    const Eigen::Vector2cd d45 = polarization::diagonal();
    // [pol, path3, path2, probe]
    auto state = tensor({qubit_state(d45(0), d45(1), "pol"), fock_state(1, 1, "path3"), fock_state(0, 1, "path2"),
                         coherent_state(nu, pc, "probe")});
    const Matrix pbs = polarizing_bs(1);
    state = apply_unitary(pbs, state, {0, 1, 2});
    state = apply_diagonal(diagonal_of(kerr_evolution(kerr, 1, pc)), state, {1, 3});
    state = apply_unitary(pbs, state, {0, 1, 2});

    Vector empty = Vector::Zero(2);
    empty(0) = 1.0;
    Vector occupied = Vector::Zero(2);
    occupied(1) = 1.0;
    auto no_photon_path2 = project_out(state, 2, empty);
    auto photon_path3 = project_out(no_photon_path2.state, 1, occupied);
    auto measured = project_out(photon_path3.state, 0, outcome_ket(outcome));
    return {measured.state, no_photon_path2.probability * photon_path3.probability * measured.probability};
}

StateVector cat_reference(cplx nu, const KerrParams& kerr, CatOutcome outcome, int probe_cutoff) {
    const int pc = probe_cutoff > 0 ? probe_cutoff : default_cutoff(nu);
    const cplx shifted = nu * std::polar(1.0, -2.0 * kerr.chi * kerr.T);
    const cplx self_phase = std::polar(1.0, -(kerr.omega_s + kerr.chi_s) * kerr.T);
    const double sign = outcome == CatOutcome::diagonal ? 1.0 : -1.0;
    Vector v = self_phase * coherent_state(shifted, pc).amplitudes() + sign * coherent_state(nu, pc).amplitudes();
    const double n = v.norm();
    if (n * n < 1e-14) throw Error(ErrorKind::zero_probability, "cat superposition vanishes");
    return StateVector(ModeLayout({Mode::bosonic(pc, "probe")}), v / n);
}

// --- GHZ -------------------------------------------------------------------

StateVector bell_state(BellState which) {
    Vector v = Vector::Zero(4);
    const double s = M_SQRT1_2;
    switch (which) {
        case BellState::phi_plus: v(0) = s; v(3) = s; break;
        case BellState::phi_minus: v(0) = s; v(3) = -s; break;
        case BellState::psi_plus: v(1) = s; v(2) = s; break;
        case BellState::psi_minus: v(1) = s; v(2) = -s; break;
    }
    return StateVector(ModeLayout({Mode::qubit("q1"), Mode::qubit("q2")}), std::move(v));
}

StateVector ghz_generate(BellState which, double phi) {
    const Eigen::Vector2cd d45 = polarization::diagonal();
    auto state = tensor({bell_state(which), qubit_state(d45(0), d45(1), "q3")});
    return apply_unitary(conditional_kerr({phi}), state, {1, 2});
}

StateVector ghz_target(BellState which) {
    const auto bell = bell_state(which);
    const Eigen::Vector2cd d45 = polarization::diagonal();
    const Eigen::Vector2cd d135 = polarization::antidiagonal();
    Vector v = Vector::Zero(8);
    for (int ab = 0; ab < 4; ++ab) {
        const Eigen::Vector2cd& third = (ab % 2 == 0) ? d45 : d135;
        v(2 * ab) += bell.amplitude(ab) * third(0);
        v(2 * ab + 1) += bell.amplitude(ab) * third(1);
    }
    return StateVector(ModeLayout({Mode::qubit("q1"), Mode::qubit("q2"), Mode::qubit("q3")}), std::move(v));
}

// --- eavesdropping -----------------------------------------------------------

QubitState QubitState::from_angle(double theta) { return {theta, std::cos(theta), std::sin(theta)}; }
QubitState QubitState::horizontal() { return {0.0, 1.0, 0.0}; }
QubitState QubitState::vertical() { return {std::numbers::pi / 2, 0.0, 1.0}; }
QubitState QubitState::diagonal() { return {std::numbers::pi / 4, M_SQRT1_2, M_SQRT1_2}; }
QubitState QubitState::antidiagonal() { return {-std::numbers::pi / 4, M_SQRT1_2, -M_SQRT1_2}; }

QubitState QubitState::orthogonal() const { return {theta + std::numbers::pi / 2, -std::conj(v), std::conj(h)}; }

std::vector<QubitState> default_alphabet() {
    return {QubitState::horizontal(), QubitState::vertical(), QubitState::diagonal(), QubitState::antidiagonal()};
}

StateVector eve_probe_state(const QubitState& qubit, double phi, double transmittance) {
    auto state = tensor({qubit_state(qubit.h, qubit.v, "u"), fock_state(1, 1, "p1"), fock_state(0, 1, "p2")});
    state = apply_unitary(beam_splitter(transmittance, 1, 1), state, {1, 2});
    // A photon in p1 is the V-polarized probe inside the cell.
    return apply_unitary(conditional_kerr({phi}), state, {0, 1});
}

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

EveReport eve_analysis(double phi, const std::vector<QubitState>& alphabet, double transmittance) {
    if (alphabet.empty()) throw Error(ErrorKind::invalid_argument, "alphabet must be nonempty");

    // Probe states conditioned on the qubit basis: |psi_u> = h |H>|e_H> + v |V>|e_V>.
    const auto e_h = project_out(eve_probe_state(QubitState::horizontal(), phi, transmittance), 0, polarization::horizontal());
    const auto e_v = project_out(eve_probe_state(QubitState::vertical(), phi, transmittance), 0, polarization::vertical());
    const Vector& a = e_h.state.amplitudes();
    const Vector& b = e_v.state.amplitudes();
    // rho_u - rho_perp = (|h|^2 - |v|^2)(|e_H><e_H| - |e_V><e_V|)
    const double split = trace_norm(a * a.adjoint() - b * b.adjoint());
    // Bob's error amplitude onto u_perp is h v (e_V - e_H).
    const double distance2 = (b - a).squaredNorm();

    std::vector<EveLetter> letters;
    letters.reserve(alphabet.size());
    double info = 0.0, guess = 0.0, qber = 0.0;
    for (const auto& q : alphabet) {
        auto joint = eve_probe_state(q, phi, transmittance);
        const double p_guess = 0.5 + 0.25 * std::abs(std::norm(q.h) - std::norm(q.v)) * split;
        const double err = std::norm(q.h) * std::norm(q.v) * distance2;
        info += 1.0 - binary_entropy(p_guess);
        guess += p_guess;
        qber += err;
        auto eve = partial_trace(joint, {1, 2});
        auto bob = partial_trace(joint, {0});
        letters.push_back(EveLetter{q, std::move(joint), std::move(eve), std::move(bob), p_guess, err});
    }

    const double n = static_cast<double>(alphabet.size());
    EveReport report{letters.front().joint_state, info / n, guess / n, qber / n, inner_product(e_h.state, e_v.state),
                     std::move(letters)};
    return report;
}

}  // namespace kerrlab
