#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "kerrlab/io.hpp"
#include "kerrlab/random.hpp"
#include "kerrlab/state.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace kerrlab;
using testing::throws_kind;

namespace {

StateVector random_state_on(const ModeLayout& layout, Rng& rng) {
    return StateVector(layout, oracle::random_state(static_cast<int>(layout.total_dim()), rng));
}

std::vector<std::size_t> dims_of(const ModeLayout& layout) {
    std::vector<std::size_t> d;
    for (std::size_t m = 0; m < layout.size(); ++m) d.push_back(layout.dim(m));
    return d;
}

}  // namespace

TEST_CASE("layout dimensions and row-major digits") {
    const ModeLayout layout({Mode::bosonic(2, "a"), Mode::qubit("q"), Mode::bosonic(3, "b")});
    CHECK(layout.total_dim() == 3 * 2 * 4);
    CHECK(layout.stride(2) == 1);
    CHECK(layout.stride(1) == 4);
    CHECK(layout.stride(0) == 8);
    CHECK(layout.index({1, 1, 2}) == 8 + 4 + 2);
    CHECK(layout.digits(14) == std::vector<std::size_t>{1, 1, 2});
    CHECK(layout.find("q") == 1);
    CHECK(throws_kind([] { ModeLayout({Mode::qubit("x"), Mode::qubit("x")}); }, ErrorKind::layout_conflict));
    CHECK(throws_kind([] { Mode::bosonic(0); }, ErrorKind::invalid_argument));
}

TEST_CASE("coherent state amplitudes") {
    const auto vac = coherent_state(0.0, 10);
    CHECK(vac.amplitude(0) == cplx(1.0, 0.0));
    for (std::size_t n = 1; n < vac.dim(); ++n) CHECK(vac.amplitude(n) == cplx(0.0, 0.0));

    CHECK(std::norm(coherent_state(1.0, 20).amplitude(0)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(mean_photon_number(coherent_state(2.0, 30), 0) == doctest::Approx(4.0).epsilon(1e-10));

    const cplx nu(0.7, -1.1);
    const auto s = coherent_state(nu, default_cutoff(nu));
    double log_fact = 0.0;
    for (std::size_t n = 0; n < s.dim(); ++n) {
        if (n > 0) log_fact += std::log(static_cast<double>(n));
        const cplx expected = std::exp(-0.5 * std::norm(nu)) * std::pow(nu, static_cast<double>(n)) * std::exp(-0.5 * log_fact);
        CHECK(std::abs(s.amplitude(n) - expected) < 1e-12);
    }
}

TEST_CASE("cutoff rule") {
    CHECK(default_cutoff(0.0) == 10);
    CHECK(default_cutoff(1.0) == 17);
    CHECK(default_cutoff(cplx(0.0, 2.0)) == 26);
    CHECK(default_cutoff(1.5) == 22);
    CHECK(default_cutoff(4.0) == 51);
    for (double r : {0.3, 1.0, 2.5, 3.9, 4.0, 6.0}) CHECK(coherent_tail_mass(r, default_cutoff(r)) < kTailMassLimit);
    CHECK(throws_kind([] { coherent_state(3.0, 10); }, ErrorKind::cutoff_too_small));
}

TEST_CASE("fock states are orthonormal") {
    for (int m = 0; m <= 4; ++m) {
        for (int n = 0; n <= 4; ++n) {
            CHECK(std::abs(inner_product(fock_state(m, 4), fock_state(n, 4))) == (m == n ? 1.0 : 0.0));
        }
    }
    CHECK(fock_state(1, 1).dim() == 2);
    CHECK(throws_kind([] { fock_state(5, 4); }, ErrorKind::index_out_of_range));
}

TEST_CASE("tensor products") {
    const auto vv = tensor({fock_state(0, 2, "a"), fock_state(0, 3, "b")});
    CHECK(vv.amplitude(0) == cplx(1.0, 0.0));
    CHECK(vv.dim() == 12);
    CHECK(tensor({fock_state(1, 2, "a"), coherent_state(1.0, 17, "b")}).squared_norm() == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(7);
    const auto a = random_state_on(ModeLayout({Mode::bosonic(2, "a")}), rng);
    const auto b = random_state_on(ModeLayout({Mode::qubit("b")}), rng);
    const auto c = random_state_on(ModeLayout({Mode::bosonic(1, "c")}), rng);
    const auto left = tensor({tensor({a, b}), c});
    const auto right = tensor({a, tensor({b, c})});
    CHECK((left.amplitudes() - right.amplitudes()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((left.amplitudes() - oracle::Vector(oracle::kron(oracle::kron(a.amplitudes(), b.amplitudes()), c.amplitudes())))
              .cwiseAbs()
              .maxCoeff() < 1e-15);
    CHECK(throws_kind([&] { tensor({a, a}); }, ErrorKind::layout_conflict));
}

TEST_CASE("state validation") {
    const ModeLayout layout({Mode::qubit()});
    CHECK(throws_kind([&] { StateVector(layout, Eigen::Vector2cd(1.0, 1.0)); }, ErrorKind::not_normalized));
    CHECK(throws_kind([&] { StateVector(layout, Eigen::Vector3cd(1.0, 0.0, 0.0)); }, ErrorKind::dimension_mismatch));
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = 1.5;
    bad(1, 1) = -0.5;
    CHECK(throws_kind([&] { DensityMatrix(layout, bad); }, ErrorKind::invalid_argument));
    bad(0, 0) = 0.7;
    bad(1, 1) = 0.7;
    CHECK(throws_kind([&] { DensityMatrix(layout, bad); }, ErrorKind::not_normalized));
}

TEST_CASE("apply_unitary matches dense I (x) U (x) I") {
    Rng rng(11);
    const std::vector<ModeLayout> layouts = {
        ModeLayout({Mode::bosonic(3, "a"), Mode::qubit("q"), Mode::bosonic(2, "b")}),
        ModeLayout({Mode::qubit("p"), Mode::bosonic(8, "a"), Mode::bosonic(1, "b")}),
        ModeLayout({Mode::bosonic(4, "a"), Mode::bosonic(4, "b"), Mode::bosonic(4, "c")}),
    };
    const std::vector<std::vector<std::size_t>> target_sets = {{0}, {1}, {2}, {0, 2}, {2, 0}, {1, 2}, {2, 1, 0}};
    for (const auto& layout : layouts) {
        const auto dims = dims_of(layout);
        for (const auto& targets : target_sets) {
            int local = 1;
            for (auto t : targets) local *= static_cast<int>(dims[t]);
            const Matrix u = oracle::random_unitary(local, rng);
            const auto psi = random_state_on(layout, rng);
            const auto out = apply_unitary(u, psi, targets);
            const oracle::Vector expected = oracle::embed(u, dims, targets) * psi.amplitudes();
            CHECK((out.amplitudes() - expected).cwiseAbs().maxCoeff() < 1e-10);
            CHECK(std::abs(out.squared_norm() - 1.0) < 1e-12);

            const auto back = apply_unitary(Matrix(u.adjoint()), out, targets);
            CHECK((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);

            const auto rho = DensityMatrix::from_pure(psi);
            const Matrix big = oracle::embed(u, dims, targets);
            const Matrix expected_rho = big * rho.matrix() * big.adjoint();
            CHECK((apply_unitary(u, rho, targets).matrix() - expected_rho).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("apply_unitary rejects bad operators") {
    const auto psi = tensor({fock_state(0, 2, "a"), fock_state(1, 2, "b")});
    CHECK(throws_kind([&] { apply_unitary(Matrix::Identity(3, 3) * 1.01, psi, {0}); }, ErrorKind::not_unitary));
    CHECK(throws_kind([&] { apply_unitary(Matrix::Identity(4, 4), psi, {0}); }, ErrorKind::dimension_mismatch));
    CHECK(throws_kind([&] { apply_unitary(Matrix::Identity(3, 3), psi, {5}); }, ErrorKind::index_out_of_range));
    const auto same = apply_unitary(Matrix::Identity(9, 9), psi, {0, 1});
    CHECK(same.amplitudes() == psi.amplitudes());
}

TEST_CASE("conditioning") {
    const auto h = qubit_state(1.0, 0.0, "q");
    Matrix ph = Matrix::Zero(2, 2);
    ph(0, 0) = 1.0;
    Matrix pv = Matrix::Zero(2, 2);
    pv(1, 1) = 1.0;
    const auto kept = condition_on_outcome(h, 0, ph);
    CHECK(kept.probability == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fidelity(kept.state, h) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(throws_kind([&] { condition_on_outcome(h, 0, pv); }, ErrorKind::zero_probability));
    CHECK(throws_kind([&] { condition_on_outcome(h, 0, Matrix(2.0 * ph)); }, ErrorKind::invalid_argument));

    Rng rng(3);
    const ModeLayout layout({Mode::bosonic(2, "a"), Mode::qubit("q"), Mode::bosonic(1, "b")});
    const auto psi = random_state_on(layout, rng);
    double total = 0.0;
    for (int n = 0; n <= 2; ++n) {
        Matrix p = Matrix::Zero(3, 3);
        p(n, n) = 1.0;
        total += condition_on_outcome(psi, 0, p).probability;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);

    const Eigen::Vector2cd d = polarization::diagonal();
    const Eigen::Vector2cd a = polarization::antidiagonal();
    const double p45 = project_out(psi, 1, d).probability;
    const double p135 = project_out(psi, 1, a).probability;
    CHECK(std::abs(p45 + p135 - 1.0) < 1e-12);
    CHECK(project_out(psi, 1, d).state.layout() == layout.select({0, 2}));
}

TEST_CASE("partial traces") {
    Rng rng(5);
    const auto a = random_state_on(ModeLayout({Mode::bosonic(3, "a")}), rng);
    const auto b = random_state_on(ModeLayout({Mode::qubit("b")}), rng);
    const auto reduced = partial_trace(tensor({a, b}), {0});
    CHECK(reduced.purity() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(reduced.matrix().trace() - 1.0) < 1e-10);
    CHECK((reduced.matrix() - a.amplitudes() * a.amplitudes().adjoint()).cwiseAbs().maxCoeff() < 1e-12);

    Vector bell = Vector::Zero(4);
    bell(0) = bell(3) = M_SQRT1_2;
    const StateVector phi(ModeLayout({Mode::qubit("x"), Mode::qubit("y")}), bell);
    for (std::size_t keep : {0u, 1u}) {
        CHECK((partial_trace(phi, {keep}).matrix() - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(throws_kind([&] { partial_trace(phi, {}); }, ErrorKind::dimension_mismatch));

    // Density-matrix route agrees with the state route on a three-mode random state.
    const auto psi = random_state_on(ModeLayout({Mode::bosonic(2, "a"), Mode::qubit("q"), Mode::bosonic(1, "b")}), rng);
    const auto via_state = partial_trace(psi, {2, 0});
    const auto via_rho = partial_trace(DensityMatrix::from_pure(psi), {2, 0});
    CHECK((via_state.matrix() - via_rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fidelity and the coherent overlap law") {
    const auto x = coherent_state(cplx(0.4, 0.9), 20);
    CHECK(fidelity(x, x) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fidelity(fock_state(0, 3), fock_state(1, 3)) == 0.0);
    CHECK(throws_kind([] { fidelity(fock_state(0, 3), fock_state(0, 4)); }, ErrorKind::layout_conflict));

    for (double r : {0.5, 1.0, 2.0}) {
        for (double delta : {0.1, 1.0, std::numbers::pi / 2, std::numbers::pi, 4.0}) {
            const cplx nu = r;
            const int cutoff = default_cutoff(nu);
            const auto a = coherent_state(nu, cutoff);
            const auto b = coherent_state(nu * std::polar(1.0, delta), cutoff);
            const double s = std::sin(delta / 2);
            CHECK(std::abs(fidelity(a, b) - std::exp(-4.0 * r * r * s * s)) < 1e-10);
            CHECK(std::abs(std::abs(inner_product(a, b)) - std::exp(-2.0 * r * r * s * s)) < 1e-10);
            CHECK(std::abs(inner_product(a, b) - oracle::coherent_overlap(nu, nu * std::polar(1.0, delta))) < 1e-10);
        }
    }
}

TEST_CASE("json round trips are exact") {
    Rng rng(17);
    const auto psi = random_state_on(ModeLayout({Mode::bosonic(3, "a"), Mode::qubit("q")}), rng);
    const auto back = io::state_from_json(nlohmann::json::parse(io::state_to_json(psi).dump()));
    CHECK(back.layout() == psi.layout());
    CHECK(back.amplitudes() == psi.amplitudes());

    const auto rho = partial_trace(psi, {0});
    const auto rho_back = io::density_from_json(nlohmann::json::parse(io::density_to_json(rho).dump()));
    CHECK(rho_back.matrix() == rho.matrix());
    CHECK(io::format_double(0.1) == "0.10000000000000001");
}
