#include "kerrlab/state.hpp"

#include <algorithm>
#include <cmath>

#include "kerrlab/error.hpp"

namespace kerrlab {

namespace {

void require_dims(const ModeLayout& layout, const Vector& amplitudes) {
    if (static_cast<std::size_t>(amplitudes.size()) != layout.total_dim()) {
        throw Error(ErrorKind::dimension_mismatch, "amplitude count " + std::to_string(amplitudes.size()) +
                                                       " does not match layout dimension " +
                                                       std::to_string(layout.total_dim()));
    }
}

std::size_t target_dim(const ModeLayout& layout, const std::vector<std::size_t>& targets) {
    std::size_t d = 1;
    for (auto t : targets) {
        if (t >= layout.size()) throw Error(ErrorKind::index_out_of_range, "target mode out of range");
        d *= layout.dim(t);
    }
    return d;
}

// Applies `op` to every column of `data`, viewed as vectors over `layout`.
void apply_in_place(const Matrix& op, Matrix& data, const ModeLayout& layout, const std::vector<std::size_t>& targets) {
    const auto idx = subspace_index(layout, targets);
    const auto dl = static_cast<Eigen::Index>(idx.local.size());
    Vector gathered(dl);
    for (Eigen::Index col = 0; col < data.cols(); ++col) {
        for (auto base : idx.rest) {
            for (Eigen::Index k = 0; k < dl; ++k) gathered(k) = data(static_cast<Eigen::Index>(base + idx.local[k]), col);
            Vector out = op * gathered;
            for (Eigen::Index k = 0; k < dl; ++k) data(static_cast<Eigen::Index>(base + idx.local[k]), col) = out(k);
        }
    }
}

void check_operator_shape(const Matrix& op, const ModeLayout& layout, const std::vector<std::size_t>& targets) {
    if (op.rows() != op.cols()) throw Error(ErrorKind::dimension_mismatch, "operator is not square");
    const auto d = target_dim(layout, targets);
    if (static_cast<std::size_t>(op.rows()) != d) {
        throw Error(ErrorKind::dimension_mismatch, "operator dimension " + std::to_string(op.rows()) +
                                                       " does not match target dimension " + std::to_string(d));
    }
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& modes) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::find(modes.begin(), modes.end(), i) == modes.end()) out.push_back(i);
    }
    return out;
}

}  // namespace

StateVector::StateVector(ModeLayout layout, Vector amplitudes, double norm_tolerance)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)), norm_tolerance_(norm_tolerance) {
    require_dims(layout_, amplitudes_);
    const double n2 = amplitudes_.squaredNorm();
    if (!(std::abs(n2 - 1.0) <= norm_tolerance_)) {
        throw Error(ErrorKind::not_normalized, "squared norm " + std::to_string(n2) + " differs from 1");
    }
}

DensityMatrix::DensityMatrix(ModeLayout layout, Matrix matrix, double tolerance)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(layout_.total_dim());
    if (matrix_.rows() != d || matrix_.cols() != d) {
        throw Error(ErrorKind::dimension_mismatch, "density matrix size does not match layout");
    }
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > tolerance) {
        throw Error(ErrorKind::invalid_argument, "density matrix is not Hermitian");
    }
    if (std::abs(matrix_.trace() - cplx(1.0)) > tolerance) {
        throw Error(ErrorKind::not_normalized, "density matrix trace differs from 1");
    }
    if (min_eigenvalue() < -1e-9) {
        throw Error(ErrorKind::invalid_argument, "density matrix has a negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
    Matrix m = psi.amplitudes() * psi.amplitudes().adjoint();
    m /= m.trace().real();
    return DensityMatrix(psi.layout(), std::move(m));
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double coherent_tail_mass(cplx nu, int cutoff) {
    const double mean = std::norm(nu);
    if (mean == 0.0) return 0.0;
    const double log_mean = std::log(mean);
    double tail = 0.0;
    for (int n = cutoff + 1;; ++n) {
        const double term = std::exp(-mean + n * log_mean - std::lgamma(n + 1.0));
        tail += term;
        if (n > mean && (term < 1e-20 * tail || term < 1e-300)) break;
    }
    return tail;
}

int default_cutoff(cplx nu) {
    const double a = std::abs(nu);
    int cutoff = static_cast<int>(std::ceil(a * a + 6.0 * a + 10.0));
    // The quadratic rule undershoots the tail bound for |nu| >~ 3.9.
    while (coherent_tail_mass(nu, cutoff) >= kTailMassLimit) ++cutoff;
    return cutoff;
}

StateVector coherent_state(cplx nu, int cutoff, std::string name) {
    if (cutoff < 1) throw Error(ErrorKind::invalid_argument, "cutoff must be >= 1");
    const double tail = coherent_tail_mass(nu, cutoff);
    if (tail >= kTailMassLimit) {
        throw Error(ErrorKind::cutoff_too_small, "cutoff " + std::to_string(cutoff) + " leaves tail mass " +
                                                     std::to_string(tail) + " for |nu|=" + std::to_string(std::abs(nu)));
    }
    Vector amps = Vector::Zero(cutoff + 1);
    amps(0) = std::exp(-0.5 * std::norm(nu));
    for (int n = 1; n <= cutoff; ++n) amps(n) = amps(n - 1) * nu / std::sqrt(static_cast<double>(n));
    amps /= amps.norm();
    return StateVector(ModeLayout({Mode::bosonic(cutoff, std::move(name))}), std::move(amps));
}

StateVector fock_state(int n, int cutoff, std::string name) {
    if (n < 0 || n > cutoff) {
        throw Error(ErrorKind::index_out_of_range,
                    "photon number " + std::to_string(n) + " outside [0, " + std::to_string(cutoff) + "]");
    }
    Vector amps = Vector::Zero(cutoff + 1);
    amps(n) = 1.0;
    return StateVector(ModeLayout({Mode::bosonic(cutoff, std::move(name))}), std::move(amps));
}

StateVector qubit_state(cplx h, cplx v, std::string name) {
    Vector amps(2);
    amps << h, v;
    return StateVector(ModeLayout({Mode::qubit(std::move(name))}), std::move(amps));
}

namespace polarization {
Eigen::Vector2cd horizontal() { return {1.0, 0.0}; }
Eigen::Vector2cd vertical() { return {0.0, 1.0}; }
Eigen::Vector2cd diagonal() { return {M_SQRT1_2, M_SQRT1_2}; }
Eigen::Vector2cd antidiagonal() { return {M_SQRT1_2, -M_SQRT1_2}; }
}  // namespace polarization

StateVector tensor(std::span<const StateVector> states) {
    if (states.empty()) throw Error(ErrorKind::invalid_argument, "tensor of an empty list");
    ModeLayout layout = states[0].layout();
    Vector amps = states[0].amplitudes();
    double tol = states[0].norm_tolerance();
    for (std::size_t i = 1; i < states.size(); ++i) {
        layout = layout.concat(states[i].layout());
        const Vector& b = states[i].amplitudes();
        Vector out(amps.size() * b.size());
        for (Eigen::Index j = 0; j < amps.size(); ++j) out.segment(j * b.size(), b.size()) = amps(j) * b;
        amps = std::move(out);
        tol = std::max(tol, states[i].norm_tolerance());
    }
    return StateVector(std::move(layout), std::move(amps), tol);
}

StateVector tensor(std::initializer_list<StateVector> states) {
    return tensor(std::span<const StateVector>(states.begin(), states.size()));
}

bool is_unitary(const Matrix& m, double tolerance) {
    if (m.rows() != m.cols()) return false;
    return ((m.adjoint() * m) - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tolerance;
}

StateVector apply_operator_unchecked(const Matrix& op, const StateVector& state,
                                     const std::vector<std::size_t>& targets, double norm_tolerance) {
    check_operator_shape(op, state.layout(), targets);
    Matrix data = state.amplitudes();
    apply_in_place(op, data, state.layout(), targets);
    return StateVector(state.layout(), data.col(0), norm_tolerance);
}

StateVector apply_unitary(const Matrix& unitary, const StateVector& state, const std::vector<std::size_t>& targets) {
    check_operator_shape(unitary, state.layout(), targets);
    if (!is_unitary(unitary, 1e-10)) throw Error(ErrorKind::not_unitary, "operator is not unitary within 1e-10");
    return apply_operator_unchecked(unitary, state, targets, state.norm_tolerance());
}

DensityMatrix apply_unitary(const Matrix& unitary, const DensityMatrix& rho, const std::vector<std::size_t>& targets) {
    check_operator_shape(unitary, rho.layout(), targets);
    if (!is_unitary(unitary, 1e-10)) throw Error(ErrorKind::not_unitary, "operator is not unitary within 1e-10");
    Matrix m = rho.matrix();
    apply_in_place(unitary, m, rho.layout(), targets);
    Matrix madj = m.adjoint();
    apply_in_place(unitary, madj, rho.layout(), targets);
    Matrix out = madj.adjoint();
    out = 0.5 * (out + out.adjoint()).eval();
    return DensityMatrix(rho.layout(), std::move(out));
}

StateVector apply_diagonal(const Vector& diagonal, const StateVector& state, const std::vector<std::size_t>& targets) {
    const auto d = target_dim(state.layout(), targets);
    if (static_cast<std::size_t>(diagonal.size()) != d) {
        throw Error(ErrorKind::dimension_mismatch, "diagonal length does not match target dimension");
    }
    if ((diagonal.cwiseAbs().array() - 1.0).abs().maxCoeff() > 1e-10) {
        throw Error(ErrorKind::not_unitary, "diagonal entries must have unit modulus");
    }
    const auto idx = subspace_index(state.layout(), targets);
    Vector amps = state.amplitudes();
    for (auto base : idx.rest) {
        for (std::size_t k = 0; k < idx.local.size(); ++k) {
            amps(static_cast<Eigen::Index>(base + idx.local[k])) *= diagonal(static_cast<Eigen::Index>(k));
        }
    }
    return StateVector(state.layout(), std::move(amps), state.norm_tolerance());
}

ConditionedState condition_on_outcome(const StateVector& state, const std::vector<std::size_t>& modes,
                                      const Matrix& projector) {
    check_operator_shape(projector, state.layout(), modes);
    if ((projector * projector - projector).cwiseAbs().maxCoeff() > 1e-10) {
        throw Error(ErrorKind::invalid_argument, "projector is not idempotent within 1e-10");
    }
    Matrix data = state.amplitudes();
    apply_in_place(projector, data, state.layout(), modes);
    const double p = data.col(0).squaredNorm();
    if (p < 1e-14) throw Error(ErrorKind::zero_probability, "outcome probability " + std::to_string(p));
    Vector amps = data.col(0) / std::sqrt(p);
    return {StateVector(state.layout(), std::move(amps), state.norm_tolerance()), p};
}

ConditionedState condition_on_outcome(const StateVector& state, std::size_t mode, const Matrix& projector) {
    return condition_on_outcome(state, std::vector<std::size_t>{mode}, projector);
}

ConditionedState project_out(const StateVector& state, std::size_t mode, const Vector& ket) {
    const auto& layout = state.layout();
    if (mode >= layout.size()) throw Error(ErrorKind::index_out_of_range, "mode out of range");
    if (layout.size() < 2) throw Error(ErrorKind::dimension_mismatch, "cannot remove the only mode");
    if (static_cast<std::size_t>(ket.size()) != layout.dim(mode)) {
        throw Error(ErrorKind::dimension_mismatch, "ket dimension does not match mode");
    }
    const auto idx = subspace_index(layout, {mode});
    Vector reduced(static_cast<Eigen::Index>(idx.rest.size()));
    for (std::size_t r = 0; r < idx.rest.size(); ++r) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < idx.local.size(); ++k) {
            acc += std::conj(ket(static_cast<Eigen::Index>(k))) * state.amplitude(idx.rest[r] + idx.local[k]);
        }
        reduced(static_cast<Eigen::Index>(r)) = acc;
    }
    const double p = reduced.squaredNorm();
    if (p < 1e-14) throw Error(ErrorKind::zero_probability, "outcome probability " + std::to_string(p));
    reduced /= std::sqrt(p);
    return {StateVector(layout.select(complement(layout.size(), {mode})), std::move(reduced), state.norm_tolerance()),
            p};
}

DensityMatrix partial_trace(const StateVector& state, const std::vector<std::size_t>& keep_modes) {
    if (keep_modes.empty()) throw Error(ErrorKind::dimension_mismatch, "keep_modes must be nonempty");
    const auto idx = subspace_index(state.layout(), keep_modes);
    const auto dk = static_cast<Eigen::Index>(idx.local.size());
    const auto dr = static_cast<Eigen::Index>(idx.rest.size());
    Matrix x(dk, dr);
    for (Eigen::Index r = 0; r < dr; ++r) {
        for (Eigen::Index k = 0; k < dk; ++k) x(k, r) = state.amplitude(idx.rest[r] + idx.local[k]);
    }
    Matrix rho = x * x.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return DensityMatrix(state.layout().select(keep_modes), std::move(rho));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep_modes) {
    if (keep_modes.empty()) throw Error(ErrorKind::dimension_mismatch, "keep_modes must be nonempty");
    const auto idx = subspace_index(rho.layout(), keep_modes);
    const auto dk = static_cast<Eigen::Index>(idx.local.size());
    Matrix out = Matrix::Zero(dk, dk);
    for (auto base : idx.rest) {
        for (Eigen::Index a = 0; a < dk; ++a) {
            for (Eigen::Index b = 0; b < dk; ++b) {
                out(a, b) += rho.matrix()(static_cast<Eigen::Index>(base + idx.local[a]),
                                          static_cast<Eigen::Index>(base + idx.local[b]));
            }
        }
    }
    return DensityMatrix(rho.layout().select(keep_modes), std::move(out));
}

cplx inner_product(const StateVector& a, const StateVector& b) {
    if (!(a.layout() == b.layout())) throw Error(ErrorKind::layout_conflict, "states have different layouts");
    return a.amplitudes().dot(b.amplitudes());
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner_product(a, b)); }

double fidelity(const DensityMatrix& rho, const StateVector& psi) {
    if (!(rho.layout() == psi.layout())) throw Error(ErrorKind::layout_conflict, "layouts differ");
    return psi.amplitudes().dot(rho.matrix() * psi.amplitudes()).real();
}

double mean_photon_number(const StateVector& state, std::size_t mode) {
    const auto& layout = state.layout();
    if (mode >= layout.size() || layout[mode].kind != ModeKind::bosonic) {
        throw Error(ErrorKind::dimension_mismatch, "mean photon number needs a bosonic mode");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const auto n = (i / layout.stride(mode)) % layout.dim(mode);
        acc += static_cast<double>(n) * std::norm(state.amplitude(i));
    }
    return acc;
}

double mean_photon_number(const DensityMatrix& rho, std::size_t mode) {
    const auto& layout = rho.layout();
    if (mode >= layout.size() || layout[mode].kind != ModeKind::bosonic) {
        throw Error(ErrorKind::dimension_mismatch, "mean photon number needs a bosonic mode");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        const auto n = (i / layout.stride(mode)) % layout.dim(mode);
        acc += static_cast<double>(n) * rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    }
    return acc;
}

double trace_norm(const Matrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace kerrlab
