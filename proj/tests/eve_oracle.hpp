#pragma once

// Eavesdropping reference built entry by entry on the 8-dimensional space
// [u, p1, p2], index u*4 + p1*2 + p2.

#include <cmath>
#include <utility>
#include <vector>

#include "oracles.hpp"

namespace oracle {

struct EveOracle {
    Vector joint;
    Matrix eve;
    Matrix bob;
};

inline EveOracle eve_oracle(cplx h, cplx v, double phi, double transmittance) {
    const cplx t = std::sqrt(transmittance);
    const cplx r = cplx(0.0, 1.0) * std::sqrt(1.0 - transmittance);
    Vector probe = Vector::Zero(4);
    probe(2) = t;  // |1,0>
    probe(1) = r;  // |0,1>
    EveOracle out;
    out.joint.resize(8);
    for (int i = 0; i < 4; ++i) {
        out.joint(i) = h * probe(i);
        out.joint(4 + i) = v * probe(i) * (i / 2 == 1 ? std::polar(1.0, phi) : cplx(1.0));
    }
    const Matrix rho = out.joint * out.joint.adjoint();
    out.eve = rho.block(0, 0, 4, 4) + rho.block(4, 4, 4, 4);
    out.bob = Matrix(2, 2);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) out.bob(a, b) = rho.block(4 * a, 4 * b, 4, 4).trace();
    }
    return out;
}

inline double h2(double p) { return (p <= 0.0 || p >= 1.0) ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

struct EveLetterOracle {
    EveOracle state;
    double p_guess;
    double qber;
};

struct EveReportOracle {
    std::vector<EveLetterOracle> letters;
    double info = 0.0;
    double p_guess = 0.0;
    double qber = 0.0;
};

/// Helstrom guess of each letter against its orthogonal partner, and Bob's
/// error probability measuring in the letter's own basis, averaged over letters.
inline EveReportOracle eve_report_oracle(const std::vector<std::pair<cplx, cplx>>& alphabet, double phi,
                                         double transmittance) {
    EveReportOracle out;
    for (const auto& [h, v] : alphabet) {
        const cplx ph = -std::conj(v);
        const cplx pv = std::conj(h);
        auto o = eve_oracle(h, v, phi, transmittance);
        const auto o_perp = eve_oracle(ph, pv, phi, transmittance);
        const double p_guess = 0.5 + 0.25 * trace_norm(o.eve - o_perp.eve);
        const Eigen::Vector2cd perp(ph, pv);
        const double err = (perp.adjoint() * o.bob * perp)(0, 0).real();
        out.info += 1.0 - h2(p_guess);
        out.p_guess += p_guess;
        out.qber += err;
        out.letters.push_back({std::move(o), p_guess, err});
    }
    const double n = static_cast<double>(alphabet.size());
    out.info /= n;
    out.p_guess /= n;
    out.qber /= n;
    return out;
}

}  // namespace oracle
