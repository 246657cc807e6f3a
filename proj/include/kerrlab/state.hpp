#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "kerrlab/layout.hpp"

namespace kerrlab {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Largest Poisson tail beyond the cutoff that a coherent state may lose.
inline constexpr double kTailMassLimit = 1e-12;

/// Normalized pure state over a ModeLayout.
class StateVector {
public:
    StateVector(ModeLayout layout, Vector amplitudes, double norm_tolerance = 1e-10);

    const ModeLayout& layout() const { return layout_; }
    const Vector& amplitudes() const { return amplitudes_; }
    cplx amplitude(std::size_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }
    std::size_t dim() const { return layout_.total_dim(); }
    double norm_tolerance() const { return norm_tolerance_; }

    double squared_norm() const { return amplitudes_.squaredNorm(); }

private:
    ModeLayout layout_;
    Vector amplitudes_;
    double norm_tolerance_;
};

/// Mixed state. Construction checks Hermiticity, unit trace and positivity.
class DensityMatrix {
public:
    DensityMatrix(ModeLayout layout, Matrix matrix, double tolerance = 1e-10);

    static DensityMatrix from_pure(const StateVector& psi);

    const ModeLayout& layout() const { return layout_; }
    const Matrix& matrix() const { return matrix_; }
    std::size_t dim() const { return layout_.total_dim(); }

    double purity() const;
    double min_eigenvalue() const;

private:
    ModeLayout layout_;
    Matrix matrix_;
};

/// Probability mass of a Poissonian photon distribution with mean |nu|^2 above `cutoff`.
double coherent_tail_mass(cplx nu, int cutoff);

/// ceil(|nu|^2 + 6|nu| + 10), raised until the tail mass drops below kTailMassLimit.
int default_cutoff(cplx nu);

/// |nu> truncated at `cutoff`; throws CutoffTooSmall when the tail exceeds kTailMassLimit.
StateVector coherent_state(cplx nu, int cutoff, std::string name = {});

StateVector fock_state(int n, int cutoff, std::string name = {});

/// a|H> + b|V> on a single polarization mode (normalized by the caller).
StateVector qubit_state(cplx h, cplx v, std::string name = {});

namespace polarization {
Eigen::Vector2cd horizontal();
Eigen::Vector2cd vertical();
/// (|H> + |V>)/sqrt(2)
Eigen::Vector2cd diagonal();
/// (|H> - |V>)/sqrt(2)
Eigen::Vector2cd antidiagonal();
}  // namespace polarization

StateVector tensor(std::span<const StateVector> states);
StateVector tensor(std::initializer_list<StateVector> states);

/// Applies a unitary on `targets` (row-major over the listed order) and the
/// identity elsewhere. Throws NotUnitary if U^dagger U deviates from I by
/// more than 1e-10, DimensionMismatch on size disagreement.
StateVector apply_unitary(const Matrix& unitary, const StateVector& state, const std::vector<std::size_t>& targets);
DensityMatrix apply_unitary(const Matrix& unitary, const DensityMatrix& rho, const std::vector<std::size_t>& targets);

/// Diagonal unitary given by its diagonal over `targets`; entries must have modulus 1 within 1e-10.
StateVector apply_diagonal(const Vector& diagonal, const StateVector& state, const std::vector<std::size_t>& targets);

/// Same as apply_unitary but skips the unitarity check; the caller guarantees it.
StateVector apply_operator_unchecked(const Matrix& op, const StateVector& state,
                                     const std::vector<std::size_t>& targets, double norm_tolerance);

struct ConditionedState {
    StateVector state;
    double probability;
};

/// Projective measurement outcome on `modes`. Throws ZeroProbability below 1e-14.
ConditionedState condition_on_outcome(const StateVector& state, const std::vector<std::size_t>& modes,
                                      const Matrix& projector);
ConditionedState condition_on_outcome(const StateVector& state, std::size_t mode, const Matrix& projector);

/// Projects `mode` onto `ket` and removes it from the layout.
ConditionedState project_out(const StateVector& state, std::size_t mode, const Vector& ket);

DensityMatrix partial_trace(const StateVector& state, const std::vector<std::size_t>& keep_modes);
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep_modes);

/// |<a|b>|^2
double fidelity(const StateVector& a, const StateVector& b);
/// <psi|rho|psi>
double fidelity(const DensityMatrix& rho, const StateVector& psi);

cplx inner_product(const StateVector& a, const StateVector& b);

double mean_photon_number(const StateVector& state, std::size_t mode);
double mean_photon_number(const DensityMatrix& rho, std::size_t mode);

bool is_unitary(const Matrix& m, double tolerance);

/// Trace norm of a Hermitian matrix (sum of |eigenvalues|).
double trace_norm(const Matrix& hermitian);

}  // namespace kerrlab
