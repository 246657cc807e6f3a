#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "kerrlab/optics.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace kerrlab;
using testing::throws_kind;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

double unitarity_error(const Matrix& u) {
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

// exp(i theta (a^dag b + a b^dag)) with cos(theta) = sqrt(T) maps a^dag -> t a^dag + i sqrt(1-T) b^dag.
Matrix beam_splitter_oracle(double transmittance, int cutoff) {
    const int d = cutoff + 1;
    const Matrix a = oracle::kron(oracle::annihilation(d), Matrix::Identity(d, d));
    const Matrix b = oracle::kron(Matrix::Identity(d, d), oracle::annihilation(d));
    const Matrix g = a.adjoint() * b + a * b.adjoint();
    return oracle::expm_hermitian(-std::acos(std::sqrt(transmittance)) * g);
}

Matrix kerr_oracle(const KerrParams& k, int sc, int pc) {
    const Matrix ns = oracle::number(sc + 1);
    const Matrix np = oracle::number(pc + 1);
    const Matrix is = Matrix::Identity(sc + 1, sc + 1);
    const Matrix ip = Matrix::Identity(pc + 1, pc + 1);
    const Matrix g = oracle::kron(k.omega_s * ns + 0.5 * k.chi_s * ns * (ns + is), ip) + 2.0 * k.chi * oracle::kron(ns, np);
    return oracle::expm_hermitian(k.T * g);
}

StateVector two_mode_fock(int na, int nb, int cutoff) {
    return tensor({fock_state(na, cutoff, "a"), fock_state(nb, cutoff, "b")});
}

}  // namespace

TEST_CASE("beam splitter single photon at 50%") {
    const auto out = apply_unitary(beam_splitter(0.5, 1, 1), two_mode_fock(1, 0, 1), {0, 1});
    // basis |00>, |01>, |10>, |11>
    CHECK(std::abs(out.amplitude(2) - M_SQRT1_2) < 1e-15);
    CHECK(std::abs(out.amplitude(1) - kI * M_SQRT1_2) < 1e-15);
    CHECK(std::abs(out.amplitude(0)) == 0.0);
}

TEST_CASE("beam splitter Hong-Ou-Mandel") {
    const int c = 2;
    const auto out = apply_unitary(beam_splitter(0.5, c, c), two_mode_fock(1, 1, c), {0, 1});
    const int d = c + 1;
    Vector expected = Vector::Zero(d * d);
    expected(2 * d + 0) = kI * M_SQRT1_2;
    expected(0 * d + 2) = kI * M_SQRT1_2;
    CHECK((out.amplitudes() - expected).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(out.amplitude(1 * d + 1)) < 1e-15);

    const Matrix dense = beam_splitter_oracle(0.5, c);
    CHECK((dense.col(1 * d + 1) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("beam splitter agrees with the exponentiated generator on every fitting sector") {
    for (int c : {1, 3, 5}) {
        for (double tr : {0.0, 0.2, 0.5, 0.77, 1.0}) {
            const Matrix u = beam_splitter(tr, c, c);
            const Matrix dense = beam_splitter_oracle(tr, c);
            const int d = c + 1;
            CHECK(unitarity_error(u) < 1e-12);
            for (int na = 0; na <= c; ++na) {
                for (int nb = 0; na + nb <= c; ++nb) {
                    const int col = na * d + nb;
                    CHECK((u.col(col) - dense.col(col)).cwiseAbs().maxCoeff() < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("beam splitter limits") {
    const int c = 3;
    const int d = c + 1;
    CHECK((beam_splitter(1.0, c, c) - Matrix::Identity(d * d, d * d)).cwiseAbs().maxCoeff() < 1e-15);
    const Matrix swap = beam_splitter(0.0, c, c);
    for (int na = 0; na <= c; ++na) {
        for (int nb = 0; na + nb <= c; ++nb) {
            cplx phase = 1.0;
            for (int k = 0; k < na + nb; ++k) phase *= kI;
            CHECK(std::abs(swap(nb * d + na, na * d + nb) - phase) < 1e-15);
        }
    }
    CHECK(throws_kind([] { beam_splitter(1.5, 2, 2); }, ErrorKind::invalid_argument));
    CHECK(throws_kind([] { beam_splitter(0.5, 2, 3); }, ErrorKind::dimension_mismatch));
}

TEST_CASE("polarizing beam splitter routes by polarization") {
    const int c = 1;
    const Matrix pbs = polarizing_bs(c);
    CHECK(unitarity_error(pbs) < 1e-15);
    CHECK((pbs * pbs - Matrix::Identity(pbs.rows(), pbs.cols())).cwiseAbs().maxCoeff() < 1e-15);

    const auto input = [&](cplx h, cplx v) {
        return tensor({qubit_state(h, v, "pol"), fock_state(1, c, "path3"), fock_state(0, c, "path2")});
    };
    const auto h_out = apply_unitary(pbs, input(1.0, 0.0), {0, 1, 2});
    CHECK(mean_photon_number(h_out, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mean_photon_number(h_out, 2) == doctest::Approx(0.0));
    const auto v_out = apply_unitary(pbs, input(0.0, 1.0), {0, 1, 2});
    CHECK(mean_photon_number(v_out, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mean_photon_number(v_out, 1) == doctest::Approx(0.0));
    const auto d_out = apply_unitary(pbs, input(M_SQRT1_2, M_SQRT1_2), {0, 1, 2});
    CHECK(mean_photon_number(d_out, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(mean_photon_number(d_out, 2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(d_out.squared_norm() - 1.0) < 1e-15);
}

TEST_CASE("phase shift") {
    CHECK((phase_shift(0.0, 6) - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((phase_shift(2.0 * kPi, 6) - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-12);
    const cplx nu(1.2, -0.4);
    const int c = default_cutoff(nu);
    for (double theta : {0.3, 1.9, -2.5}) {
        const auto out = apply_unitary(phase_shift(theta, c), coherent_state(nu, c), {0});
        CHECK(fidelity(out, coherent_state(nu * std::polar(1.0, theta), c)) == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK((phase_shift(0.8, 5) - oracle::expm_hermitian(-0.8 * oracle::number(6))).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("kerr evolution matches the exponentiated generator") {
    const std::vector<KerrParams> params = {
        {kPi / 4, 0.0, 0.0, 1.0}, {0.3, 0.2, 1.1, 0.7}, {-0.5, 0.05, -0.3, 2.0}, {1.0, 1.0, 1.0, 0.0}};
    for (const auto& k : params) {
        const Matrix u = kerr_evolution(k, 2, 6);
        CHECK(unitarity_error(u) < 1e-12);
        CHECK((u - kerr_oracle(k, 2, 6)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((u - Matrix(u.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("kerr phases add in time") {
    const KerrParams a{0.37, 0.11, 0.9, 0.6};
    KerrParams b = a;
    b.T = 1.3;
    KerrParams sum = a;
    sum.T = a.T + b.T;
    CHECK((kerr_evolution(a, 3, 5) * kerr_evolution(b, 3, 5) - kerr_evolution(sum, 3, 5)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("kerr probe rotation per signal photon") {
    const cplx nu = 1.0;
    const int pc = default_cutoff(nu);
    const KerrParams k{kPi / 4, 0.0, 0.0, 1.0};
    const auto probe_after = [&](int ns) {
        const auto s = apply_unitary(kerr_evolution(k, 1, pc), tensor({fock_state(ns, 1, "s"), coherent_state(nu, pc, "p")}),
                                     {0, 1});
        return project_out(s, 0, Vector::Unit(2, ns)).state;
    };
    CHECK(fidelity(probe_after(0), coherent_state(nu, pc, "p")) == doctest::Approx(1.0).epsilon(1e-12));
    const auto rotated = probe_after(1);
    CHECK(std::abs(std::abs(inner_product(coherent_state(nu, pc, "p"), rotated)) - std::exp(-1.0)) < 1e-10);
    CHECK(std::abs(fidelity(rotated, coherent_state(nu * std::polar(1.0, -2.0 * k.chi * k.T), pc, "p")) - 1.0) < 1e-10);
}

TEST_CASE("kerr signal phase slope") {
    const KerrParams k{0.03, 0.02, 0.05, 1.0};
    const int pc = 3;
    const Matrix u = kerr_evolution(k, 2, pc);
    for (int np = 0; np <= pc; ++np) {
        const cplx up = u(2 * (pc + 1) + np, 2 * (pc + 1) + np);
        const cplx down = u(0 * (pc + 1) + np, 0 * (pc + 1) + np);
        const double slope = -std::arg(up / down) / (2.0 * k.T);
        CHECK(std::abs(slope - (k.omega_s + 1.5 * k.chi_s + 2.0 * k.chi * np)) < 1e-12);
    }
}

TEST_CASE("kerr parameter validation") {
    CHECK(throws_kind([] { KerrParams{0.1, 0.0, 0.0, -1.0}.validate(); }, ErrorKind::invalid_argument));
    CHECK(throws_kind([] { KerrParams{std::nan(""), 0.0, 0.0, 1.0}.validate(); }, ErrorKind::invalid_argument));
    CHECK_NOTHROW(KerrParams{0.1, 0.0, 0.0, 0.0}.validate());
}

TEST_CASE("cross phase") {
    const Matrix u = cross_phase(0.7, 2, 3);
    const Matrix g = oracle::kron(oracle::number(3), oracle::number(4));
    CHECK((u - oracle::expm_hermitian(-0.7 * g)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("conditional kerr") {
    CHECK((conditional_kerr({0.0}) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    const Matrix u = conditional_kerr({1.3});
    CHECK(u(0, 0) == cplx(1.0, 0.0));
    CHECK(std::abs(u(3, 3) - std::polar(1.0, 1.3)) < 1e-15);
    CHECK(unitarity_error(u) < 1e-15);

    Vector phi_plus = Vector::Zero(4);
    phi_plus(0) = phi_plus(3) = M_SQRT1_2;
    Vector phi_minus = phi_plus;
    phi_minus(3) = -M_SQRT1_2;
    const Vector out = conditional_kerr({kPi}) * phi_plus;
    CHECK((out - phi_minus).cwiseAbs().maxCoeff() < 1e-15);
}
