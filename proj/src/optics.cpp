#include "kerrlab/optics.hpp"

#include <cmath>
#include <vector>

#include "kerrlab/error.hpp"

namespace kerrlab {

void KerrParams::validate() const {
    if (!std::isfinite(chi) || !std::isfinite(chi_s) || !std::isfinite(omega_s) || !std::isfinite(T)) {
        throw Error(ErrorKind::invalid_argument, "Kerr parameters must be finite");
    }
    if (T < 0.0) throw Error(ErrorKind::invalid_argument, "Kerr interaction time must be >= 0");
}

namespace {

using cld = std::complex<long double>;

// Binomial coefficients up to row n, long double.
std::vector<std::vector<long double>> binomials(int n) {
    std::vector<std::vector<long double>> c(n + 1);
    for (int i = 0; i <= n; ++i) {
        c[i].assign(i + 1, 1.0L);
        for (int k = 1; k < i; ++k) c[i][k] = c[i - 1][k - 1] + c[i - 1][k];
    }
    return c;
}

cld ipow(cld z, int k) {
    cld out = 1.0L;
    for (int i = 0; i < k; ++i) out *= z;
    return out;
}

}  // namespace

Matrix beam_splitter(double transmittance, int cutoff_a, int cutoff_b) {
    if (cutoff_a != cutoff_b) throw Error(ErrorKind::dimension_mismatch, "beam splitter modes need equal cutoffs");
    if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
        throw Error(ErrorKind::invalid_argument, "transmittance must lie in [0, 1]");
    }
    const int c = cutoff_a;
    const int d = c + 1;
    const cld t(std::sqrt(static_cast<long double>(transmittance)), 0.0L);
    const cld r(0.0L, std::sqrt(1.0L - static_cast<long double>(transmittance)));
    const auto binom = binomials(c);
    std::vector<long double> log_fact(c + 1, 0.0L);
    for (int i = 1; i <= c; ++i) log_fact[i] = log_fact[i - 1] + std::log(static_cast<long double>(i));

    Matrix u = Matrix::Identity(d * d, d * d);
    for (int n = 0; n <= c; ++n) {
        // Input |k, n-k>: (t a + r b)^k (r a + t b)^(n-k) / sqrt(k! (n-k)!)
        for (int k = 0; k <= n; ++k) {
            const int l = n - k;
            std::vector<cld> coeff(n + 1, 0.0L);  // coefficient of a^j b^(n-j)
            for (int p = 0; p <= k; ++p) {
                const cld first = binom[k][p] * ipow(t, p) * ipow(r, k - p);
                for (int q = 0; q <= l; ++q) {
                    const cld second = binom[l][q] * ipow(r, q) * ipow(t, l - q);
                    coeff[p + q] += first * second;
                }
            }
            const int col = k * d + l;
            for (int j = 0; j <= n; ++j) {
                const long double scale =
                    std::exp(0.5L * (log_fact[j] + log_fact[n - j] - log_fact[k] - log_fact[l]));
                const cld amp = coeff[j] * scale;
                u(j * d + (n - j), col) = cplx(static_cast<double>(amp.real()), static_cast<double>(amp.imag()));
            }
        }
    }
    return u;
}

Matrix polarizing_bs(int path_cutoff) {
    if (path_cutoff < 1) throw Error(ErrorKind::dimension_mismatch, "path modes need cutoff >= 1");
    const int d = path_cutoff + 1;
    const int dim = 2 * d * d;
    Matrix u = Matrix::Zero(dim, dim);
    for (int pol = 0; pol < 2; ++pol) {
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                const int in = pol * d * d + a * d + b;
                const int out = pol == 0 ? in : pol * d * d + b * d + a;
                u(out, in) = 1.0;
            }
        }
    }
    return u;
}

Matrix phase_shift(double theta, int cutoff) {
    if (cutoff < 1) throw Error(ErrorKind::dimension_mismatch, "cutoff must be >= 1");
    Vector diag(cutoff + 1);
    for (int n = 0; n <= cutoff; ++n) diag(n) = std::polar(1.0, theta * n);
    return diag.asDiagonal();
}

Matrix kerr_evolution(const KerrParams& params, int signal_cutoff, int probe_cutoff) {
    params.validate();
    if (signal_cutoff < 1 || probe_cutoff < 1) throw Error(ErrorKind::dimension_mismatch, "Kerr modes must be bosonic");
    const int ds = signal_cutoff + 1;
    const int dp = probe_cutoff + 1;
    Vector diag(ds * dp);
    for (int ns = 0; ns < ds; ++ns) {
        for (int np = 0; np < dp; ++np) {
            const double g = params.omega_s * ns + 0.5 * params.chi_s * ns * (ns + 1.0) + 2.0 * params.chi * ns * np;
            diag(ns * dp + np) = std::polar(1.0, -g * params.T);
        }
    }
    return diag.asDiagonal();
}

Matrix cross_phase(double angle, int cutoff_a, int cutoff_b) {
    if (cutoff_a < 1 || cutoff_b < 1) throw Error(ErrorKind::dimension_mismatch, "cutoffs must be >= 1");
    const int da = cutoff_a + 1;
    const int db = cutoff_b + 1;
    Vector diag(da * db);
    for (int na = 0; na < da; ++na) {
        for (int nb = 0; nb < db; ++nb) diag(na * db + nb) = std::polar(1.0, angle * na * nb);
    }
    return diag.asDiagonal();
}

Matrix conditional_kerr(ConditionalKerrPhase phase) {
    Vector diag(4);
    diag << 1.0, 1.0, 1.0, std::polar(1.0, phase.phi);
    return diag.asDiagonal();
}

}  // namespace kerrlab
